"""CoNLL-U ingestion and the dependency-tree model used by the segmenter."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator


class ConlluError(ValueError):
    """Base class for problems reading CoNLL-U input."""


class MalformedLine(ConlluError):
    pass


class BadHead(ConlluError):
    pass


class CycleDetected(ConlluError):
    pass


class MultipleRoots(ConlluError):
    pass


class EmptyInput(ConlluError):
    pass


class DuplicateSentenceId(ConlluError):
    pass


class NodeOutOfRange(IndexError):
    pass


# UD v2 renamed dobj to obj; both are treated as the same relation.
REL_ALIASES = {"dobj": "obj", "obj": "obj"}


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str = "_"
    upos: str = "_"
    head: int = 0
    deprel: str = "_"
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.index < 1:
            raise MalformedLine(f"token index must be >= 1, got {self.index}")
        if self.head < 0 or self.head == self.index:
            raise BadHead(f"token {self.index} has invalid head {self.head}")
        if not self.form:
            raise MalformedLine(f"token {self.index} has an empty form")

    def to_line(self) -> str:
        return "\t".join([
            str(self.index), self.form, self.lemma, self.upos, self.xpos,
            self.feats, str(self.head), self.deprel, self.deps, self.misc,
        ])


@dataclass(frozen=True)
class Sentence:
    """A parsed utterance.

    ``extra_lines`` keeps multiword-token and empty-node lines verbatim,
    each paired with the number of regular tokens preceding it, so they
    survive serialization without entering the graph.
    """

    id: str
    tokens: tuple[Token, ...]
    label: str | None = None
    raw_text: str | None = None
    comments: tuple[str, ...] = ()
    extra_lines: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        validate_tree(self.tokens, where=f"sentence {self.id!r}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def text(self) -> str:
        return " ".join(self.forms)

    @property
    def n_skipped(self) -> int:
        return len(self.extra_lines)

    def token(self, index: int) -> Token:
        if not 1 <= index <= len(self.tokens):
            raise NodeOutOfRange(f"node {index} outside 1..{len(self.tokens)}")
        return self.tokens[index - 1]

    def span_text(self, lo: int, hi: int) -> str:
        return " ".join(t.form for t in self.tokens[lo - 1:hi])


@dataclass
class Corpus:
    sentences: list[Sentence]
    source_name: str = "<stream>"

    def __post_init__(self):
        seen = set()
        for s in self.sentences:
            if s.id in seen:
                raise DuplicateSentenceId(f"duplicate sentence id {s.id!r} in {self.source_name}")
            seen.add(s.id)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)


def validate_tree(tokens: tuple[Token, ...], where: str = "sentence") -> None:
    n = len(tokens)
    if n == 0:
        raise MalformedLine(f"{where}: no tokens")
    for pos, tok in enumerate(tokens, start=1):
        if tok.index != pos:
            raise MalformedLine(f"{where}: token ids must run 1..{n} without gaps (found {tok.index} at position {pos})")
        if tok.head > n:
            raise BadHead(f"{where}: token {tok.index} has head {tok.head} but sentence has {n} tokens")
    roots = [t.index for t in tokens if t.head == 0]
    if len(roots) > 1:
        raise MultipleRoots(f"{where}: multiple roots {roots}")
    # With every head in range, a missing root implies a cycle; walk each
    # token towards the root to find it.
    heads = [0] + [t.head for t in tokens]
    state = [0] * (n + 1)  # 0 unvisited, 1 on current path, 2 reaches root
    for start in range(1, n + 1):
        path = []
        node = start
        while node != 0 and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node]
        if node != 0 and state[node] == 1:
            raise CycleDetected(f"{where}: cycle through token {node}")
        for p in path:
            state[p] = 2
    if not roots:
        raise CycleDetected(f"{where}: no root token")


def read_labels(stream: IO[str] | Iterable[str]) -> dict[str, str]:
    """Read a ``sent_id<TAB>label`` sidecar. Blank and ``#`` lines are ignored."""
    labels = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedLine(f"label sidecar line {lineno}: expected 2 tab-separated columns")
        labels[parts[0]] = parts[1]
    return labels


def _parse_head(value: str, where: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise BadHead(f"{where}: head {value!r} is not an integer") from None


def _blocks(stream: Iterable[str]) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    block: list[tuple[int, str]] = []
    start = 0
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if line.strip() == "":
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


def _parse_block(number: int, start: int, lines: list[tuple[int, str]],
                 source_name: str) -> Sentence | None:
    sent_id = None
    raw_text = None
    comments = []
    tokens = []
    extra = []
    where_block = f"{source_name}: block {number} (line {start})"
    for lineno, line in lines:
        if line.startswith("#"):
            comments.append(line)
            body = line[1:].strip()
            key, sep, value = body.partition("=")
            if sep and key.strip() == "sent_id":
                sent_id = value.strip()
            elif sep and key.strip() == "text":
                raw_text = value.strip()
            continue
        cols = line.split("\t")
        where = f"{where_block}, line {lineno}"
        if len(cols) != 10:
            raise MalformedLine(f"{where}: expected 10 tab-separated columns, got {len(cols)}")
        tid = cols[0]
        if "-" in tid or "." in tid:
            extra.append((len(tokens), line))
            continue
        try:
            index = int(tid)
        except ValueError:
            raise MalformedLine(f"{where}: bad token id {tid!r}") from None
        head = _parse_head(cols[6], where)
        try:
            tokens.append(Token(index=index, form=cols[1], lemma=cols[2], upos=cols[3],
                                head=head, deprel=cols[7], xpos=cols[4], feats=cols[5],
                                deps=cols[8], misc=cols[9]))
        except ConlluError as exc:
            raise type(exc)(f"{where}: {exc}") from None
    if not tokens:
        if not extra:
            return None  # comment-only block
        raise MalformedLine(f"{where_block}: block has no regular token lines")
    if sent_id is None:
        sent_id = str(number)
    try:
        return Sentence(id=sent_id, tokens=tuple(tokens), raw_text=raw_text,
                        comments=tuple(comments), extra_lines=tuple(extra))
    except ConlluError as exc:
        raise type(exc)(f"{where_block}: {exc}") from None


def parse_conllu(stream: IO[str] | Iterable[str] | str, labels: dict[str, str] | None = None,
                 source_name: str = "<stream>") -> Corpus:
    """Parse CoNLL-U text into a :class:`Corpus`.

    ``stream`` may be an open text file, any iterable of lines, or a string.
    ``labels`` maps sentence ids to annotations; unmatched ids stay unlabeled.
    Errors carry the block number so a bad sentence can be found quickly.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    sentences = []
    for number, (start, lines) in enumerate(_blocks(stream), start=1):
        sent = _parse_block(number, start, lines, source_name)
        if sent is None:
            continue
        if labels and sent.id in labels:
            sent = Sentence(id=sent.id, tokens=sent.tokens, label=labels[sent.id],
                            raw_text=sent.raw_text, comments=sent.comments,
                            extra_lines=sent.extra_lines)
        sentences.append(sent)
    if not sentences:
        raise EmptyInput(f"{source_name}: no sentences found")
    return Corpus(sentences=sentences, source_name=source_name)


def read_conllu(path, labels_path=None) -> Corpus:
    labels = None
    if labels_path is not None:
        with open(labels_path, encoding="utf-8") as f:
            labels = read_labels(f)
    with open(path, encoding="utf-8") as f:
        return parse_conllu(f, labels=labels, source_name=str(path))


def serialize_sentence(sentence: Sentence) -> str:
    lines = list(sentence.comments)
    extra = list(sentence.extra_lines)
    for pos, tok in enumerate(sentence.tokens):
        while extra and extra[0][0] == pos:
            lines.append(extra.pop(0)[1])
        lines.append(tok.to_line())
    lines.extend(line for _, line in extra)
    return "\n".join(lines) + "\n"


def serialize_conllu(corpus: Corpus | Iterable[Sentence]) -> str:
    return "".join(serialize_sentence(s) + "\n" for s in corpus)


def rel_matches(deprel: str, rel: str) -> bool:
    """True when ``deprel`` satisfies the filter ``rel``.

    A filter without a subtype matches on the base relation, so ``nsubj``
    also matches ``nsubj:pass``; ``dobj`` and ``obj`` are interchangeable.
    """
    if ":" in rel:
        return deprel == rel
    base = deprel.split(":", 1)[0]
    return REL_ALIASES.get(base, base) == REL_ALIASES.get(rel, rel)


@dataclass(frozen=True)
class DepGraph:
    sentence: Sentence
    children: dict[int, tuple[tuple[str, int], ...]] = field(repr=False)
    _spans: tuple[tuple[int, int, int], ...] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.sentence.tokens)

    def _check(self, node: int) -> None:
        if not 1 <= node <= len(self):
            raise NodeOutOfRange(f"node {node} outside 1..{len(self)}")

    def head(self, node: int) -> int:
        return self.sentence.token(node).head

    def deprel(self, node: int) -> str:
        return self.sentence.token(node).deprel

    def subtree(self, node: int) -> list[int]:
        self._check(node)
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(c for _, c in self.children[n])
        return sorted(out)


def build_graph(sentence: Sentence) -> DepGraph:
    n = len(sentence.tokens)
    kids: dict[int, list[tuple[str, int]]] = {i: [] for i in range(0, n + 1)}
    for tok in sentence.tokens:
        kids[tok.head].append((tok.deprel, tok.index))
    children = {i: tuple(kids[i]) for i in range(1, n + 1)}

    # subtree lo/hi/size, bottom-up in reverse BFS order from the root
    order = []
    queue = [c for _, c in kids[0]]
    while queue:
        node = queue.pop()
        order.append(node)
        queue.extend(c for _, c in children[node])
    lo = list(range(n + 1))
    hi = list(range(n + 1))
    size = [1] * (n + 1)
    for node in reversed(order):
        for _, c in children[node]:
            lo[node] = min(lo[node], lo[c])
            hi[node] = max(hi[node], hi[c])
            size[node] += size[c]
    spans = tuple((lo[i], hi[i], size[i]) for i in range(n + 1))
    return DepGraph(sentence=sentence, children=children, _spans=spans)


def children_by_rel(graph: DepGraph, node: int, rel: str | None = None) -> list[int]:
    graph._check(node)
    return [c for d, c in graph.children[node] if rel is None or rel_matches(d, rel)]


def subtree_span(graph: DepGraph, node: int) -> tuple[int, int]:
    graph._check(node)
    lo, hi, _ = graph._spans[node]
    return lo, hi


def is_contiguous_subtree(graph: DepGraph, node: int) -> bool:
    graph._check(node)
    lo, hi, size = graph._spans[node]
    return size == hi - lo + 1
