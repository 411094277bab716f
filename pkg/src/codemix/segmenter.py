"""Split a parsed sentence into independent clauses and adjuncts.

Clause boundaries come from heads that govern a nominal subject and/or a
direct object. Four configurations are recognised, named after the order
in which the anchor tokens occur:

    CASE1  subject, head, object
    CASE2  subject, head          (no object)
    CASE3  head, subject
    CASE4  head, object           (no subject)

Whatever is left over after the clause spans are laid down becomes
adjunct segments, so every token ends up in exactly one segment.
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field

from .corpus import (
    DepGraph,
    children_by_rel,
    is_contiguous_subtree,
    rel_matches,
    subtree_span,
)

log = logging.getLogger(__name__)

CASE2_EXTEND_RELS = frozenset({"amod", "advmod", "acomp", "attr", "xcomp"})
NON_COPULA_HEAD_UPOS = frozenset({"VERB", "AUX"})


class UnorderedAnchor(ValueError):
    pass


class CaseKind(enum.Enum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3
    CASE4 = 4


class SegmentKind(enum.Enum):
    INDEPENDENT_CLAUSE = "clause"
    ADJUNCT = "adjunct"


@dataclass(frozen=True)
class ClauseAnchor:
    head: int
    subject: int | None = None
    object: int | None = None

    def __post_init__(self):
        if self.subject is None and self.object is None:
            raise ValueError("anchor needs a subject or an object")

    def members(self) -> list[int]:
        return [i for i in (self.subject, self.head, self.object) if i is not None]


@dataclass(frozen=True)
class Segment:
    lo: int
    hi: int
    kind: SegmentKind
    anchor: ClauseAnchor | None = None
    case: CaseKind | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty segment span ({self.lo}, {self.hi})")
        if (self.kind is SegmentKind.INDEPENDENT_CLAUSE) != (self.anchor is not None):
            raise ValueError("anchor must be present exactly for independent clauses")

    @property
    def span(self) -> tuple[int, int]:
        return self.lo, self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "kind": self.kind.value,
            "case": self.case.value if self.case else None,
        }


@dataclass(frozen=True)
class SegmentationResult:
    sentence_id: str
    segments: tuple[Segment, ...]
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.segments)

    def to_record(self, text: str) -> dict:
        return {
            "id": self.sentence_id,
            "text": text,
            "segments": [s.to_dict() for s in self.segments],
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self, text: str) -> str:
        return json.dumps(self.to_record(text), ensure_ascii=False)


@dataclass(frozen=True)
class SegmenterConfig:
    case2_extend_rels: frozenset[str] = CASE2_EXTEND_RELS


DEFAULT_CONFIG = SegmenterConfig()


def find_anchors(graph: DepGraph) -> list[ClauseAnchor]:
    anchors = []
    for head in range(1, len(graph) + 1):
        subjects = children_by_rel(graph, head, "nsubj")
        objects = children_by_rel(graph, head, "dobj")
        if subjects or objects:
            anchors.append(ClauseAnchor(
                head=head,
                subject=subjects[0] if subjects else None,
                object=objects[0] if objects else None,
            ))
    return anchors


def classify_case(anchor: ClauseAnchor) -> CaseKind:
    h, s, o = anchor.head, anchor.subject, anchor.object
    if s is not None and o is not None and s < h < o:
        return CaseKind.CASE1
    if o is None and s is not None and s < h:
        return CaseKind.CASE2
    if s is not None and h < s:
        return CaseKind.CASE3
    if s is None and o is not None and h < o:
        return CaseKind.CASE4
    raise UnorderedAnchor(f"anchor {anchor} matches no case")


def _has_copula(graph: DepGraph, head: int) -> bool:
    if graph.sentence.token(head).upos in NON_COPULA_HEAD_UPOS:
        return False
    return bool(children_by_rel(graph, head, "cop"))


def _clause_span(graph: DepGraph, anchor: ClauseAnchor, kind: CaseKind,
                 config: SegmenterConfig, notes: list[str]) -> tuple[int, int]:
    h, s, o = anchor.head, anchor.subject, anchor.object
    n = len(graph)

    # the noun-phrase extension relies on the yield being a single interval
    np_node = o if kind is CaseKind.CASE4 else s
    if not is_contiguous_subtree(graph, np_node):
        notes.append(f"non-contiguous yield under token {np_node} (head {h}); whole-sentence fallback")
        return 1, n

    if kind is CaseKind.CASE1:
        return subtree_span(graph, s)[0], o

    if kind is CaseKind.CASE2:
        lo = subtree_span(graph, s)[0]
        hi = h
        for rel, child in graph.children[h]:
            if any(rel_matches(rel, r) for r in config.case2_extend_rels):
                c_lo, c_hi = subtree_span(graph, child)
                if c_lo >= h:
                    hi = max(hi, c_hi)
        if _has_copula(graph, h):
            hi = max(hi, subtree_span(graph, h)[1])
            notes.append(f"copula rule applied at head {h}")
        return lo, hi

    dependents = [c for _, c in graph.children[h]]
    preceding = [c for c in dependents if c < h]
    lo = min([h] + preceding)
    if kind is CaseKind.CASE3:
        hi = max(h, subtree_span(graph, s)[1])
        if o is not None:
            hi = max(hi, o)
        return lo, hi
    return lo, subtree_span(graph, o)[1]


def clause_span(graph: DepGraph, anchor: ClauseAnchor, kind: CaseKind,
                config: SegmenterConfig = DEFAULT_CONFIG) -> tuple[int, int]:
    """Token span (inclusive) of the clause built around ``anchor``."""
    return _clause_span(graph, anchor, kind, config, [])


def _is_punct(graph: DepGraph, index: int) -> bool:
    return graph.sentence.token(index).upos == "PUNCT"


def _attach_punctuation(graph: DepGraph, segments: list[Segment]) -> list[Segment]:
    # Leading punctuation of an adjunct moves to the preceding segment.
    # Clause starts are left alone so a subject phrase is never split.
    spans = [[s.lo, s.hi] for s in segments]
    for i in range(1, len(segments)):
        if segments[i].kind is not SegmentKind.ADJUNCT:
            continue
        while spans[i][0] <= spans[i][1] and _is_punct(graph, spans[i][0]):
            spans[i][0] += 1
            spans[i - 1][1] += 1
    out = [
        Segment(lo, hi, seg.kind, seg.anchor, seg.case)
        for (lo, hi), seg in zip(spans, segments) if lo <= hi
    ]
    # a sentence-initial run that is nothing but punctuation joins the next segment
    if len(out) > 1 and all(_is_punct(graph, i) for i in range(out[0].lo, out[0].hi + 1)):
        nxt = out[1]
        out[:2] = [Segment(out[0].lo, nxt.hi, nxt.kind, nxt.anchor, nxt.case)]
    # removing an all-punctuation segment can leave two adjuncts side by side
    merged: list[Segment] = []
    for seg in out:
        if merged and seg.kind is SegmentKind.ADJUNCT and merged[-1].kind is SegmentKind.ADJUNCT:
            merged[-1] = Segment(merged[-1].lo, seg.hi, SegmentKind.ADJUNCT)
        else:
            merged.append(seg)
    return merged


def extract_segments(graph: DepGraph, config: SegmenterConfig = DEFAULT_CONFIG) -> SegmentationResult:
    sent = graph.sentence
    n = len(graph)
    notes: list[str] = []

    candidates = []
    for anchor in find_anchors(graph):
        try:
            kind = classify_case(anchor)
        except UnorderedAnchor as exc:
            notes.append(f"dropped anchor at head {anchor.head}: {exc}")
            continue
        lo, hi = _clause_span(graph, anchor, kind, config, notes)
        candidates.append((lo, hi, anchor, kind))

    # earlier start wins; on equal starts the longer span wins
    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0]), c[2].head))
    kept = []
    covered_to = 0
    for lo, hi, anchor, kind in candidates:
        if lo <= covered_to:
            notes.append(f"dropped clause {lo}-{hi} (head {anchor.head}): overlaps an earlier clause")
            continue
        kept.append(Segment(lo, hi, SegmentKind.INDEPENDENT_CLAUSE, anchor, kind))
        covered_to = hi

    segments = []
    pos = 1
    for seg in kept:
        if seg.lo > pos:
            segments.append(Segment(pos, seg.lo - 1, SegmentKind.ADJUNCT))
        segments.append(seg)
        pos = seg.hi + 1
    if pos <= n:
        segments.append(Segment(pos, n, SegmentKind.ADJUNCT))

    segments = _attach_punctuation(graph, segments)
    for note in notes:
        log.debug("%s: %s", sent.id, note)
    return SegmentationResult(sentence_id=sent.id, segments=tuple(segments), diagnostics=tuple(notes))


def check_partition(result: SegmentationResult, n: int) -> None:
    """Raise AssertionError unless the segments tile 1..n in order."""
    pos = 1
    for seg in result.segments:
        assert seg.lo == pos, f"gap or overlap at token {pos}: {seg}"
        pos = seg.hi + 1
    assert pos == n + 1, f"segments end at {pos - 1}, sentence has {n} tokens"
