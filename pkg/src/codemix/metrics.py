"""Code-mixing metrics and corpus statistics."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .tagging import ENGLISH, OTHER, TokenTag, is_punct

LANG_NAMES = {"eng": "English", "hin": "Hindi", "kan": "Kannada", "mar": "Marathi"}


class EmptyCorpus(ValueError):
    pass


class UtteranceClass(enum.Enum):
    CODESWITCHED = "codeswitched"
    ENGLISH_ONLY = "english_only"
    NATIVE_ONLY = "native_only"
    OTHER_ONLY = "other_only"


def _langs(tags: Iterable[TokenTag | str]) -> list[str]:
    return [t if isinstance(t, str) else t.lang for t in tags]


@dataclass(frozen=True)
class CmiInputs:
    counts: dict[str, int]
    n_lang_dependent: int
    n_other: int
    total_len: int


def cmi_inputs(tags: Iterable[TokenTag | str]) -> CmiInputs:
    langs = _langs(tags)
    counts = Counter(l for l in langs if l != OTHER)
    n = sum(counts.values())
    return CmiInputs(dict(counts), n, len(langs) - n, len(langs))


def cmi_utterance(tags: Iterable[TokenTag | str]) -> float:
    """Code-mixing index of one utterance, ``(N - max_i t_i) / 2N``.

    ``N`` counts language-dependent tokens only; ``other`` tokens are left
    out of both ``N`` and the per-language counts. Returns 0 when ``N == 0``.
    """
    inp = cmi_inputs(tags)
    if inp.n_lang_dependent == 0:
        return 0.0
    return (inp.n_lang_dependent - max(inp.counts.values())) / (2 * inp.n_lang_dependent)


def cmi_corpus(values: Sequence[float]) -> float:
    values = list(values)
    if not values:
        raise EmptyCorpus("CMI of an empty corpus is undefined")
    return sum(values) / len(values)


def i_index(tags: Iterable[TokenTag | str]) -> float:
    """Switch points over word boundaries.

    ``other`` tokens are skipped when looking for switches but still count
    towards the number of boundaries.
    """
    langs = _langs(tags)
    if len(langs) <= 1:
        return 0.0
    dependent = [l for l in langs if l != OTHER]
    switches = sum(a != b for a, b in zip(dependent, dependent[1:]))
    return switches / (len(langs) - 1)


def classify_utterance(tags: Iterable[TokenTag | str]) -> UtteranceClass:
    langs = set(_langs(tags))
    has_eng = ENGLISH in langs
    has_native = bool(langs - {ENGLISH, OTHER})
    if has_eng and has_native:
        return UtteranceClass.CODESWITCHED
    if has_eng:
        return UtteranceClass.ENGLISH_ONLY
    if has_native:
        return UtteranceClass.NATIVE_ONLY
    return UtteranceClass.OTHER_ONLY


@dataclass
class CorpusStats:
    n_variants: int
    unique_utterances: int
    average_length: float
    total_vocab_size: int
    vocab_sizes: dict[str, int]
    other_vocab_size: int
    classification: dict[str, int]
    c_avg: float
    mean_i_index: float
    token_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def table_rows(self) -> list[tuple[str, str]]:
        rows = [
            ("Number of Unique Utterances", str(self.unique_utterances)),
            ("Number of Generated Utterances", str(self.n_variants)),
            ("Average Length", f"{self.average_length:.2f}"),
            ("Total Vocabulary Size", str(self.total_vocab_size)),
        ]
        for lang in sorted(self.vocab_sizes, key=lambda l: (l != ENGLISH, l)):
            rows.append((f"{LANG_NAMES.get(lang, lang)} Vocabulary Size", str(self.vocab_sizes[lang])))
        rows.append(("Others Vocabulary Size", str(self.other_vocab_size)))
        rows += [
            ("Codeswitched Utterances", str(self.classification[UtteranceClass.CODESWITCHED.value])),
            ("English Utterances", str(self.classification[UtteranceClass.ENGLISH_ONLY.value])),
            ("Native Utterances", str(self.classification[UtteranceClass.NATIVE_ONLY.value])),
            ("Other Utterances", str(self.classification[UtteranceClass.OTHER_ONLY.value])),
            ("C_avg", f"{self.c_avg:.4f}"),
            ("I-index", f"{self.mean_i_index:.4f}"),
        ]
        return rows

    def render_table(self) -> str:
        rows = [("Metric", "Value")] + self.table_rows()
        width = max(len(r[0]) for r in rows)
        lines = [f"{name:<{width}}  {value}" for name, value in rows]
        lines.insert(1, "-" * (width + 2 + max(len(r[1]) for r in rows)))
        return "\n".join(lines) + "\n"


def corpus_stats(variants: Sequence) -> CorpusStats:
    """Aggregate statistics over variants (anything with a ``tokens`` list of TokenTag).

    Vocabularies are unique case-folded forms per language with
    punctuation-only forms dropped. Utterance classes are counted once per
    distinct assembled text, averages over every variant.
    """
    if not variants:
        raise EmptyCorpus("no utterances to summarise")
    vocab: dict[str, set[str]] = {}
    token_counts: Counter = Counter()
    classes = Counter({c.value: 0 for c in UtteranceClass})
    seen_texts = set()
    cmis = []
    iidx = []
    total_tokens = 0
    for v in variants:
        tokens = v.tokens
        total_tokens += len(tokens)
        cmis.append(cmi_utterance(tokens))
        iidx.append(i_index(tokens))
        for t in tokens:
            token_counts[t.lang] += 1
            if not is_punct(t.form):
                vocab.setdefault(t.lang, set()).add(t.form.casefold())
        text = " ".join(t.form for t in tokens)
        if text not in seen_texts:
            seen_texts.add(text)
            classes[classify_utterance(tokens).value] += 1
    all_forms = set().union(*vocab.values()) if vocab else set()
    return CorpusStats(
        n_variants=len(variants),
        unique_utterances=len(seen_texts),
        average_length=total_tokens / len(variants),
        total_vocab_size=len(all_forms),
        vocab_sizes={ENGLISH: 0, **{l: len(f) for l, f in sorted(vocab.items()) if l != OTHER}},
        other_vocab_size=len(vocab.get(OTHER, ())),
        classification=dict(classes),
        c_avg=cmi_corpus(cmis),
        mean_i_index=sum(iidx) / len(iidx),
        token_counts=dict(sorted(token_counts.items())),
    )
