"""Command-line front end: ``codemix {segment,generate,clean,stats}``.

Every flag can also come from a ``--config`` file with one ``key = value``
per line (keys are flag names without the leading dashes, lines starting
with ``#`` are comments, repeat a key for multi-valued flags). Command-line
flags win.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import ConlluError, build_graph, read_conllu
from .generator import GenerationPolicy, PolicyMode, Variant, enumerate_variants, select_top_k
from .metrics import EmptyCorpus, corpus_stats
from .segmenter import SegmentKind, extract_segments
from .tagging import LanguageTagger, TokenTag, load_other_lexicon
from .translation import (
    HttpBackend,
    LexiconBackend,
    TranslationError,
    TranslationStore,
    cached,
    load_lexicon,
)

log = logging.getLogger("codemix")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BACKEND = 3

TARGETS = ("hin", "kan", "mar")

MENTION_RE = re.compile(r"(?<!\w)@\w+")
URL_RE = re.compile(r"(?:\b[a-z][a-z0-9+.-]*://|\bwww\.)\S+", re.IGNORECASE)
HASHTAG_RE = re.compile(r"(?<!\w)#\w+")

LIST_KEYS = {"target", "lexicon"}
BOOL_KEYS = {"clause_only", "no_figures"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: Path | None = None
    labels: Path | None = None
    lexicons: dict[str, Path] = field(default_factory=dict)
    mt: bool = False
    targets: list[str] = field(default_factory=lambda: ["hin"])
    policy: GenerationPolicy = field(default_factory=GenerationPolicy)
    other_lexicon: Path | None = None
    out: Path = Path("out")
    workers: int = 1
    cache: Path | None = None
    seed: int | None = None  # reserved; every code path is deterministic
    figures: bool = True


def read_config_file(path) -> dict[str, list[str]]:
    values: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            values.setdefault(key.strip().replace("-", "_"), []).append(value.strip())
    return values


def _truthy(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _parse_lexicons(specs: list[str], targets: list[str]) -> dict[str, Path]:
    out = {}
    for spec in specs:
        code, sep, path = spec.partition("=")
        if sep and code in TARGETS:
            out[code] = Path(path)
        else:
            for t in targets:
                out.setdefault(t, Path(spec))
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if args.config else {}

    def pick(key):
        value = getattr(args, key, None)
        if value not in (None, [], False):
            return value
        if key not in file_values:
            return value
        if key in LIST_KEYS:
            return file_values[key]
        if key in BOOL_KEYS:
            return _truthy(file_values[key][-1])
        return file_values[key][-1]

    cfg = RunConfig()
    if pick("input"):
        cfg.input = Path(pick("input"))
    if pick("labels"):
        cfg.labels = Path(pick("labels"))
    if pick("other_lexicon"):
        cfg.other_lexicon = Path(pick("other_lexicon"))
    if pick("out"):
        cfg.out = Path(pick("out"))
    if pick("cache"):
        cfg.cache = Path(pick("cache"))
    targets = pick("target")
    if targets:
        bad = [t for t in targets if t not in TARGETS]
        if bad:
            raise UsageError(f"unsupported target(s) {bad}; choose from {TARGETS}")
        cfg.targets = list(dict.fromkeys(targets))
    cfg.lexicons = _parse_lexicons(pick("lexicon") or [], cfg.targets)
    mt = pick("mt")
    cfg.mt = _truthy(mt) if isinstance(mt, str) else bool(mt)
    try:
        cfg.policy = GenerationPolicy.parse(pick("policy") or "all", clause_only=bool(pick("clause_only")))
        cfg.workers = int(pick("workers") or 1)
        seed = pick("seed")
        cfg.seed = int(seed) if seed is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.workers < 1:
        raise UsageError("--workers must be >= 1")
    cfg.figures = not pick("no_figures")
    return cfg


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _require_input(cfg: RunConfig) -> Path:
    if cfg.input is None:
        raise UsageError("--input is required")
    if not cfg.input.exists():
        raise UsageError(f"input file {cfg.input} does not exist")
    return cfg.input


def _write_lines(path: Path, lines) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line + "\n")


def cmd_segment(cfg: RunConfig) -> int:
    corpus = read_conllu(_require_input(cfg), cfg.labels)
    results = _map(lambda s: extract_segments(build_graph(s)), corpus.sentences, cfg.workers)
    out = cfg.out / "segments.jsonl"
    _write_lines(out, (r.to_json(s.text) for s, r in zip(corpus.sentences, results)))
    n_seg = sum(len(r) for r in results)
    n_clause = sum(s.kind is SegmentKind.INDEPENDENT_CLAUSE for r in results for s in r.segments)
    n_diag = sum(len(r.diagnostics) for r in results)
    print(f"{len(results)} sentences, {n_seg} segments ({n_clause} clauses, "
          f"{n_seg - n_clause} adjuncts), {n_diag} diagnostics -> {out}", file=sys.stderr)
    return EXIT_OK


def build_backend(cfg: RunConfig):
    if cfg.mt == bool(cfg.lexicons):
        raise UsageError("select exactly one backend: --lexicon or --mt")
    if cfg.mt:
        try:
            backend = HttpBackend()
        except TranslationError as exc:
            raise UsageError(str(exc)) from None
        store = TranslationStore(cfg.cache or cfg.out / "translation_cache.log")
        return cached(backend, store)
    missing = [t for t in cfg.targets if t not in cfg.lexicons]
    if missing:
        raise UsageError(f"no lexicon given for target(s) {missing}")
    backend = LexiconBackend({t: load_lexicon(cfg.lexicons[t]) for t in cfg.targets})
    if cfg.cache:
        return cached(backend, TranslationStore(cfg.cache))
    return backend


def generate_variants(cfg: RunConfig) -> list[Variant]:
    corpus = read_conllu(_require_input(cfg), cfg.labels)
    backend = build_backend(cfg)
    other = load_other_lexicon(cfg.other_lexicon) if cfg.other_lexicon else frozenset()
    tagger = LanguageTagger(other)
    segmented = _map(lambda s: (s, extract_segments(build_graph(s))), corpus.sentences, cfg.workers)
    order = {s.id: i for i, s in enumerate(corpus.sentences)}
    produced = []
    for target in cfg.targets:
        per_sentence = _map(
            lambda pair: enumerate_variants(pair[1], pair[0], backend, cfg.policy, target, tagger),
            segmented, cfg.workers)
        variants = [v for vs in per_sentence for v in vs]
        if cfg.policy.mode is PolicyMode.TOP_K:
            variants = select_top_k(variants, cfg.policy.k)
            variants.sort(key=lambda v: (order[v.sentence_id], v.mask))
        produced.extend(variants)
    return produced


def cmd_generate(cfg: RunConfig) -> int:
    variants = generate_variants(cfg)
    out = cfg.out / "generated.jsonl"
    _write_lines(out, (v.to_json() for v in variants))
    print(f"{len(variants)} variants -> {out}", file=sys.stderr)
    return EXIT_OK


def clean_line(line: str) -> str:
    for pattern in (URL_RE, MENTION_RE, HASHTAG_RE):
        line = pattern.sub(" ", line)
    return " ".join(line.split())


def cmd_clean(cfg: RunConfig) -> int:
    with open(_require_input(cfg), encoding="utf-8") as f:
        cleaned = [c for c in (clean_line(line) for line in f) if c]
    out = cfg.out / "cleaned.txt"
    _write_lines(out, cleaned)
    print(f"{len(cleaned)} utterances -> {out}", file=sys.stderr)
    return EXIT_OK


def read_tagged(path: Path) -> list[Variant]:
    """Load utterances from generated JSONL or a ``form<TAB>lang`` column file."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    stripped = text.lstrip()
    variants = []
    if stripped.startswith("{"):
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                variants.append(Variant.from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"{path}:{lineno}: bad record ({exc})") from None
        return variants
    block: list[TokenTag] = []
    for lineno, line in enumerate(text.splitlines() + [""], start=1):
        if not line.strip():
            if block:
                variants.append(Variant.from_record({"id": str(len(variants) + 1),
                                                     "tokens": [t.to_dict() for t in block]}))
                block = []
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise UsageError(f"{path}:{lineno}: expected form<TAB>lang")
        block.append(TokenTag(parts[0], parts[1].strip()))
    return variants


def cmd_stats(cfg: RunConfig) -> int:
    variants = read_tagged(_require_input(cfg))
    stats = corpus_stats(variants)
    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / "stats.json", "w", encoding="utf-8") as f:
        json.dump(stats.to_dict(), f, indent=2, ensure_ascii=False)
        f.write("\n")
    table = stats.render_table()
    (cfg.out / "stats.txt").write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    if cfg.figures:
        from .plotting import render_stats_figures

        paths = render_stats_figures(stats, [v.cmi for v in variants],
                                     [v.i_index for v in variants], cfg.out / "figures")
        print(f"{len(paths)} figures -> {cfg.out / 'figures'}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "segment": cmd_segment,
    "generate": cmd_generate,
    "clean": cmd_clean,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file mirroring these flags")
    common.add_argument("--input", help="input file (CoNLL-U, text or JSONL depending on command)")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--workers", type=int, help="worker threads over sentences")
    common.add_argument("-v", "--verbose", action="store_true")

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--labels", help="sent_id<TAB>label sidecar")
    gen.add_argument("--lexicon", action="append",
                     help="english<TAB>native TSV; PATH or TARGET=PATH, repeatable")
    gen.add_argument("--mt", action="store_true", default=None,
                     help="use the HTTP MT backend at $CODEMIX_MT_URL")
    gen.add_argument("--cache", help="translation cache file")
    gen.add_argument("--target", action="append", choices=TARGETS, help="native language, repeatable")
    gen.add_argument("--policy", help="all | max-cmi | top-k=<k>")
    gen.add_argument("--clause-only", action="store_true", default=None,
                     help="translate independent clauses only")
    gen.add_argument("--other-lexicon", help="file of language-independent forms, one per line")
    gen.add_argument("--seed", type=int, help="reserved")

    parser = argparse.ArgumentParser(prog="codemix", description="Code-switched corpus synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("segment", parents=[common, gen], help="segment CoNLL-U into clauses and adjuncts")
    sub.add_parser("generate", parents=[common, gen], help="generate code-switched variants")
    sub.add_parser("clean", parents=[common], help="strip mentions, URLs and hashtags")
    st = sub.add_parser("stats", parents=[common], help="corpus statistics report")
    st.add_argument("--no-figures", action="store_true", default=None, help="skip figure rendering")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ConlluError, UsageError, EmptyCorpus, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TranslationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
