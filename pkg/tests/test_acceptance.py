"""Acceptance gate: one test per criterion, each reporting a pass/fail line."""

import itertools
import json
import time
from contextlib import contextmanager

import synth
from codemix.cli import main
from codemix.corpus import build_graph, parse_conllu, serialize_conllu
from codemix.generator import GenerationPolicy, PolicyMode, assemble_variant, enumerate_variants
from codemix.metrics import UtteranceClass, classify_utterance, cmi_utterance, i_index
from codemix.segmenter import extract_segments

from conftest import ACCEPTANCE_LINES, FIXTURES
from test_metrics import HAND, O, naive_cmi, naive_i_index, random_tag_sequences

TOL = 1e-12


@contextmanager
def criterion(number, title):
    started = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"[FAIL] criterion {number}: {title} ({type(exc).__name__}: {exc})")
        raise
    elapsed = time.perf_counter() - started
    ACCEPTANCE_LINES.append(f"[PASS] criterion {number}: {title} ({elapsed:.2f} s)")


def _jsonl(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


def test_criterion_1_four_cases_golden(tmp_path, four_cases):
    expected = {
        "case1": ["The cute boy is eating ice-cream", "in the car"],
        "case2": ["The Ganga is a holy river"],
        "case3": ["There are a few men", "in the room"],
        "case4": ["Needs someone", "to explain lambda calculus"],
    }
    with criterion(1, "four-case golden segmentation"):
        started = time.perf_counter()
        for sid, texts in expected.items():
            sent = four_cases[sid]
            result = extract_segments(build_graph(sent))
            assert [sent.span_text(s.lo, s.hi) for s in result.segments] == texts, sid
        assert main(["segment", "--input", str(FIXTURES / "four_cases.conllu"), "--out", str(tmp_path)]) == 0
        assert _jsonl(tmp_path / "segments.jsonl") == _jsonl(FIXTURES / "four_cases_segments.jsonl")
        assert time.perf_counter() - started < 1.0


def test_criterion_2_hand_metrics():
    with criterion(2, f"hand-evaluated metrics on {len(HAND)} sequences"):
        assert len(HAND) >= 10
        # zero-branch of CMI and the l <= 1 branch of the I-index are in the table
        assert any(all(t == O for t in tags) for tags, _, _ in HAND)
        assert any(len(tags) <= 1 for tags, _, _ in HAND)
        for tags, cmi, ii in HAND:
            assert abs(cmi_utterance(tags) - float(cmi)) <= TOL, tags
            assert abs(i_index(tags) - float(ii)) <= TOL, tags


SEQUENCES = random_tag_sequences(10_000, seed=2024)


def test_criterion_3_oracle_equivalence():
    with criterion(3, "oracle equivalence on 10,000 random sequences"):
        started = time.perf_counter()
        for tags in SEQUENCES:
            assert 1 <= len(tags) <= 50
            assert abs(cmi_utterance(tags) - naive_cmi(tags)) <= TOL, tags
            assert abs(i_index(tags) - naive_i_index(tags)) <= TOL, tags
        assert time.perf_counter() - started < 10.0


def test_criterion_4_bounds():
    with criterion(4, "CMI and I-index bounds"):
        for tags in SEQUENCES:
            langs = {t for t in tags if t != O}
            c = cmi_utterance(tags)
            assert c >= 0
            if langs:
                assert c <= (len(langs) - 1) / (2 * len(langs)) + TOL
            assert 0 <= i_index(tags) <= 1
        assert abs(cmi_utterance(["eng", "hin"] * 10) - 0.25) <= TOL
        assert abs(cmi_utterance(["eng"] * 10 + ["hin"] * 10) - 0.25) <= TOL


def test_criterion_5_combinatorics(synthetic50, lexicon_backend):
    everything = GenerationPolicy(PolicyMode.ALL)
    best_only = GenerationPolicy(PolicyMode.MAX_CMI)
    with criterion(5, "generation combinatorics on 50 synthetic sentences"):
        assert len(synthetic50) == 50
        for sent in synthetic50:
            seg = extract_segments(build_graph(sent))
            k = len(seg.segments)
            variants = enumerate_variants(seg, sent, lexicon_backend, everything, "hin")
            assert len(variants) == 2 ** k
            assert [v.mask for v in variants] == list(itertools.product((0, 1), repeat=k))
            brute = max(
                (assemble_variant(seg, sent, list(m), lexicon_backend, "hin")
                 for m in itertools.product((0, 1), repeat=k)),
                key=lambda v: cmi_utterance(v.tokens),
            )
            (chosen,) = enumerate_variants(seg, sent, lexicon_backend, best_only, "hin")
            assert abs(chosen.cmi - brute.cmi) <= TOL
            assert classify_utterance(variants[0].tokens) in (
                UtteranceClass.ENGLISH_ONLY, UtteranceClass.OTHER_ONLY)
            assert classify_utterance(variants[-1].tokens) is UtteranceClass.NATIVE_ONLY


def test_criterion_6_volume(tmp_path):
    source = FIXTURES / "synthetic_240.conllu"
    corpus = parse_conllu(source.read_text(encoding="utf-8"))
    with criterion(6, "generated volume at least 4x the source"):
        n_segments = sum(len(extract_segments(build_graph(s)).segments) for s in corpus)
        assert n_segments / len(corpus) >= 2
        assert main(["generate", "--input", str(source), "--lexicon", str(FIXTURES / "lexicon_hin.tsv"),
                     "--policy", "all", "--out", str(tmp_path)]) == 0
        n_variants = len(_jsonl(tmp_path / "generated.jsonl"))
        assert n_variants >= 4 * len(corpus)


def test_criterion_7_determinism_and_round_trip(tmp_path):
    text = synth.synthetic_conllu(100, seed=77)
    path = tmp_path / "in.conllu"
    path.write_text(text, encoding="utf-8")
    with criterion(7, "deterministic generate and CoNLL-U round trip"):
        outputs = []
        for run in ("a", "b"):
            assert main(["generate", "--input", str(path), "--lexicon", str(FIXTURES / "lexicon_hin.tsv"),
                         "--policy", "all", "--out", str(tmp_path / run)]) == 0
            outputs.append((tmp_path / run / "generated.jsonl").read_bytes())
        assert outputs[0] == outputs[1]
        corpus = parse_conllu(text)
        assert len(corpus) >= 100
        assert serialize_conllu(corpus) == text
        assert parse_conllu(serialize_conllu(corpus)).sentences == corpus.sentences


def test_criterion_8_end_to_end(tmp_path):
    fields = {"n_variants", "unique_utterances", "average_length", "total_vocab_size", "vocab_sizes",
              "other_vocab_size", "classification", "c_avg", "mean_i_index", "token_counts"}
    with criterion(8, "end-to-end generate (top-k=100) and stats"):
        started = time.perf_counter()
        assert main(["generate", "--input", str(FIXTURES / "synthetic_240.conllu"),
                     "--labels", str(FIXTURES / "synthetic_240.labels.tsv"),
                     "--lexicon", str(FIXTURES / "lexicon_hin.tsv"), "--policy", "top-k=100",
                     "--workers", "1", "--out", str(tmp_path)]) == 0
        assert len(_jsonl(tmp_path / "generated.jsonl")) == 100
        assert main(["stats", "--input", str(tmp_path / "generated.jsonl"), "--out", str(tmp_path),
                     "--workers", "1"]) == 0
        report = json.loads((tmp_path / "stats.json").read_text(encoding="utf-8"))
        assert fields <= set(report)
        assert sum(report["classification"].values()) == report["unique_utterances"]
        assert time.perf_counter() - started < 30.0
