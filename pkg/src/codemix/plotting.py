"""Figures for the stats report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import LANG_NAMES, CorpusStats  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (4.5, 3.0),
    "figure.dpi": 100,
    "savefig.bbox": "tight",
    # fixed metadata keeps repeated renders byte-stable
    "svg.hashsalt": "codemix",
}

CLASS_LABELS = {
    "codeswitched": "Codeswitched",
    "english_only": "English",
    "native_only": "Native",
    "other_only": "Other",
}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _histogram(values, title, xlabel, path, upper):
    fig, ax = plt.subplots()
    ax.hist(values, bins=20, range=(0.0, upper), color="0.35", edgecolor="white")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("utterances")
    return _save(fig, path)


def render_stats_figures(stats: CorpusStats, cmi_values, i_values, outdir) -> list[Path]:
    """Write PNG figures for a stats report into ``outdir``; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    with plt.rc_context(STYLE):
        paths.append(_histogram(cmi_values, "Code-mixing index per utterance", "CMI",
                                outdir / "cmi_hist.png", 0.5))
        paths.append(_histogram(i_values, "I-index per utterance", "I-index",
                                outdir / "i_index_hist.png", 1.0))

        fig, ax = plt.subplots()
        names = [CLASS_LABELS[k] for k in stats.classification]
        ax.bar(names, list(stats.classification.values()), color="0.35")
        ax.set_title("Unique utterances by class")
        ax.set_ylabel("utterances")
        paths.append(_save(fig, outdir / "utterance_classes.png"))

        fig, ax = plt.subplots()
        labels = [LANG_NAMES.get(l, l) for l in stats.vocab_sizes] + ["Others"]
        sizes = list(stats.vocab_sizes.values()) + [stats.other_vocab_size]
        ax.bar(labels, sizes, color="0.35")
        ax.set_title("Vocabulary size by language")
        ax.set_ylabel("unique forms")
        paths.append(_save(fig, outdir / "vocabulary.png"))
    return paths
