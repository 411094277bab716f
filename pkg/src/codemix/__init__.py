"""Synthesize code-switched corpora from dependency-parsed English."""

from .corpus import Corpus, DepGraph, Sentence, Token, build_graph, parse_conllu, read_conllu, serialize_conllu
from .generator import GenerationPolicy, PolicyMode, Variant, assemble_variant, enumerate_variants, select_top_k
from .metrics import CorpusStats, classify_utterance, cmi_corpus, cmi_utterance, corpus_stats, i_index
from .segmenter import CaseKind, ClauseAnchor, Segment, SegmentationResult, SegmentKind, extract_segments
from .tagging import LanguageTagger, TokenTag, tag_token_language
from .translation import HttpBackend, Lexicon, LexiconBackend, TranslationStore, cached, lexicon_translate, translate

__version__ = "0.1.0"
