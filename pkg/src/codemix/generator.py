"""Code-switched variant enumeration and selection."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Sentence
from .metrics import cmi_utterance, i_index
from .segmenter import SegmentationResult, SegmentKind
from .tagging import ENGLISH, UNTOUCHED, LanguageTagger, TokenTag, tag_token_language, translated
from .translation import Backend, TranslationRequest, translate

__all__ = [
    "GenerationPolicy", "PolicyMode", "TokenTag", "Variant", "assemble_variant",
    "enumerate_variants", "select_top_k", "tag_token_language", "translated",
]


class PolicyMode(enum.Enum):
    ALL = "all"
    MAX_CMI = "max-cmi"
    TOP_K = "top-k"


@dataclass(frozen=True)
class GenerationPolicy:
    mode: PolicyMode = PolicyMode.ALL
    k: int | None = None
    clause_only: bool = False

    def __post_init__(self):
        if self.mode is PolicyMode.TOP_K and (self.k is None or self.k < 1):
            raise ValueError("top-k policy needs k >= 1")

    @classmethod
    def parse(cls, text: str, clause_only: bool = False) -> "GenerationPolicy":
        """Parse ``all``, ``max-cmi`` or ``top-k=<k>``."""
        text = text.strip().lower()
        if text.startswith("top-k"):
            _, sep, k = text.partition("=")
            if not sep or not k.strip().isdigit():
                raise ValueError(f"bad policy {text!r}; expected top-k=<k>")
            return cls(PolicyMode.TOP_K, int(k), clause_only)
        try:
            return cls(PolicyMode(text), None, clause_only)
        except ValueError:
            raise ValueError(f"unknown policy {text!r}") from None


@dataclass(frozen=True)
class Variant:
    sentence_id: str
    mask: tuple[int, ...]
    tokens: tuple[TokenTag, ...]
    cmi: float
    i_index: float
    label: str | None = None
    target: str | None = None

    @property
    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)

    @property
    def mask_str(self) -> str:
        return "".join(map(str, self.mask))

    @property
    def n_translated(self) -> int:
        return sum(self.mask)

    def to_record(self) -> dict:
        return {
            "id": self.sentence_id,
            "mask": self.mask_str,
            "target": self.target,
            "tokens": [t.to_dict() for t in self.tokens],
            "text": self.text,
            "cmi": self.cmi,
            "i_index": self.i_index,
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)

    @classmethod
    def from_record(cls, rec: dict) -> "Variant":
        tokens = tuple(TokenTag(t["form"], t["lang"]) for t in rec["tokens"])
        mask = tuple(int(b) for b in rec.get("mask") or "")
        return cls(sentence_id=str(rec.get("id", "")), mask=mask, tokens=tokens,
                   cmi=cmi_utterance(tokens), i_index=i_index(tokens),
                   label=rec.get("label"), target=rec.get("target"))


def _segment_forms(sentence: Sentence, seg) -> list[str]:
    return [t.form for t in sentence.tokens[seg.lo - 1:seg.hi]]


class _SegmentTranslations:
    """Translates each segment at most once per sentence."""

    def __init__(self, sentence, seg: SegmentationResult, backend, target, tagger):
        self.sentence = sentence
        self.seg = seg
        self.backend = backend
        self.target = target
        self.tagger = tagger
        self._done: dict[int, tuple[TokenTag, ...]] = {}
        self.original = [
            tuple(tagger.tag_tokens(_segment_forms(sentence, s))) for s in seg.segments
        ]

    def translated(self, i: int) -> tuple[TokenTag, ...]:
        if i not in self._done:
            s = self.seg.segments[i]
            req = TranslationRequest(" ".join(_segment_forms(self.sentence, s)), ENGLISH, self.target)
            self._done[i] = translate(self.backend, req, self.tagger, origin=s).tokens
        return self._done[i]

    def build(self, mask: Sequence[int]) -> Variant:
        tokens: list[TokenTag] = []
        for i, bit in enumerate(mask):
            tokens.extend(self.translated(i) if bit else self.original[i])
        tokens = tuple(tokens)
        return Variant(self.seg.sentence_id, tuple(mask), tokens, cmi_utterance(tokens),
                       i_index(tokens), self.sentence.label, self.target)


def assemble_variant(seg: SegmentationResult, sentence: Sentence, mask: Sequence[int],
                     backend: Backend, target: str,
                     tagger: LanguageTagger | None = None) -> Variant:
    if len(mask) != len(seg.segments):
        raise ValueError(f"mask has {len(mask)} bits for {len(seg.segments)} segments")
    return _SegmentTranslations(sentence, seg, backend, target, tagger or LanguageTagger()).build(mask)


def _max_cmi_key(v: Variant):
    # highest CMI, then fewest translated segments, then smallest mask
    return (-v.cmi, v.n_translated, v.mask)


def enumerate_variants(seg: SegmentationResult, sentence: Sentence, backend: Backend,
                       policy: GenerationPolicy, target: str,
                       tagger: LanguageTagger | None = None) -> list[Variant]:
    """Every translate/keep combination of the sentence's segments.

    Masks are enumerated in ascending binary order with the first segment as
    the most significant bit. Under ``clause_only`` adjunct bits stay 0.
    ``MAX_CMI`` keeps one variant; ``TOP_K`` returns everything and leaves
    the cut to :func:`select_top_k` over the whole corpus.
    """
    tr = _SegmentTranslations(sentence, seg, backend, target, tagger or LanguageTagger())
    free = [i for i, s in enumerate(seg.segments)
            if not policy.clause_only or s.kind is SegmentKind.INDEPENDENT_CLAUSE]
    variants = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        mask = [0] * len(seg.segments)
        for i, b in zip(free, bits):
            mask[i] = b
        variants.append(tr.build(mask))
    if policy.mode is PolicyMode.MAX_CMI:
        return [min(variants, key=_max_cmi_key)]
    return variants


def select_top_k(variants: Iterable[Variant], k: int) -> list[Variant]:
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(variants, key=lambda v: (-v.cmi, -v.i_index, v.sentence_id, v.mask, v.target or ""))
    return ranked[:k]
