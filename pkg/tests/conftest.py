import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import synth  # noqa: E402
from codemix.corpus import build_graph, parse_conllu, read_conllu  # noqa: E402
from codemix.translation import Lexicon, LexiconBackend  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class CountingBackend:
    """Wraps a backend and counts calls through it."""

    def __init__(self, inner):
        self.inner = inner
        self.name = inner.name
        self.calls = []

    def translate_text(self, text, source, target):
        self.calls.append((text, source, target))
        return self.inner.translate_text(text, source, target)


@pytest.fixture(scope="session")
def four_cases():
    corpus = read_conllu(FIXTURES / "four_cases.conllu")
    return {s.id: s for s in corpus}


@pytest.fixture(scope="session")
def case1(four_cases):
    return four_cases["case1"]


@pytest.fixture(scope="session")
def case1_graph(case1):
    return build_graph(case1)


@pytest.fixture(scope="session")
def synthetic_lexicon():
    return Lexicon(synth.synthetic_lexicon("hin"))


@pytest.fixture
def lexicon_backend(synthetic_lexicon):
    return LexiconBackend({"hin": synthetic_lexicon})


@pytest.fixture(scope="session")
def synthetic50():
    return parse_conllu(synth.synthetic_conllu(50, seed=5), source_name="synthetic50")


def graph_of(text):
    """Build a graph from compact rows ``form upos head deprel`` separated by ';'."""
    lines = []
    for i, row in enumerate(r.split() for r in text.split(";")):
        form, upos, head, rel = row
        lines.append("\t".join([str(i + 1), form, "_", upos, "_", "_", head, rel, "_", "_"]))
    return build_graph(parse_conllu("\n".join(lines) + "\n").sentences[0])
