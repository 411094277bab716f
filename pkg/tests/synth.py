"""Synthetic UD-style treebank and full-coverage lexicons for tests.

Run as a script to rewrite the committed fixtures::

    python tests/synth.py
"""

import random
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

SUBJECTS = ["boy", "girl", "man", "woman", "teacher", "doctor", "farmer", "student", "child", "driver"]
ADJS = ["cute", "tall", "young", "old", "happy", "clever", "quiet", "kind"]
ING = ["eating", "reading", "cooking", "washing", "buying", "selling"]
PAST = ["bought", "sold", "found", "painted", "cleaned"]
OBJECTS = ["apples", "books", "clothes", "vegetables", "letters", "flowers"]
SING_OBJECTS = ["car", "book", "chair", "lamp", "bicycle", "phone"]
PREPS = ["in", "near", "at", "behind"]
PLACES = ["car", "garden", "market", "house", "park", "school", "room", "station"]
PROPER = ["Ganga", "Yamuna", "Delhi", "Mysore", "Pune"]
PRED = [("holy", "river"), ("big", "city"), ("old", "town"), ("green", "place"), ("busy", "street")]
WANT = ["Needs", "Wants", "Asks"]
PRONS = ["someone", "somebody", "everyone"]
XCOMP = ["explain", "cook", "fix", "read", "write"]
ADVS = ["Yesterday", "Today", "Later", "Sometimes"]
LABELS = ["positive", "negative", "neutral"]


def _t1(r):
    # Case 1 clause + prepositional adjunct
    return [("The", "DET", 3, "det"), (r.choice(ADJS), "ADJ", 3, "amod"),
            (r.choice(SUBJECTS), "NOUN", 5, "nsubj"), ("is", "AUX", 5, "aux"),
            (r.choice(ING), "VERB", 0, "root"), (r.choice(OBJECTS), "NOUN", 5, "dobj"),
            (r.choice(PREPS), "ADP", 9, "case"), ("the", "DET", 9, "det"),
            (r.choice(PLACES), "NOUN", 5, "nmod"), (".", "PUNCT", 5, "punct")]


def _t2(r):
    # Case 2 copular clause covering the whole sentence
    adj, noun = r.choice(PRED)
    return [("The", "DET", 2, "det"), (r.choice(PROPER), "PROPN", 6, "nsubj"),
            ("is", "AUX", 6, "cop"), ("a", "DET", 6, "det"), (adj, "ADJ", 6, "amod"),
            (noun, "NOUN", 0, "root"), (".", "PUNCT", 6, "punct")]


def _t3(r):
    # Case 3 existential + adjunct
    return [("There", "PRON", 2, "expl"), ("are", "VERB", 0, "root"), ("a", "DET", 5, "det"),
            ("few", "ADJ", 5, "amod"), (r.choice(["men", "women", "children", "students"]), "NOUN", 2, "nsubj"),
            (r.choice(PREPS), "ADP", 8, "case"), ("the", "DET", 8, "det"),
            (r.choice(PLACES), "NOUN", 2, "nmod"), (".", "PUNCT", 2, "punct")]


def _t4(r):
    # two Case 4 phrases
    return [(r.choice(WANT), "VERB", 0, "root"), (r.choice(PRONS), "PRON", 1, "dobj"),
            ("to", "PART", 4, "mark"), (r.choice(XCOMP), "VERB", 1, "xcomp"),
            (r.choice(ADJS), "ADJ", 6, "amod"), (r.choice(SING_OBJECTS), "NOUN", 4, "dobj"),
            (".", "PUNCT", 1, "punct")]


def _t5(r):
    # adverbial adjunct, Case 1 clause, prepositional adjunct
    return [(r.choice(ADVS), "ADV", 5, "advmod"), (",", "PUNCT", 5, "punct"),
            ("the", "DET", 4, "det"), (r.choice(SUBJECTS), "NOUN", 5, "nsubj"),
            (r.choice(PAST), "VERB", 0, "root"), ("a", "DET", 7, "det"),
            (r.choice(SING_OBJECTS), "NOUN", 5, "dobj"), (r.choice(PREPS), "ADP", 10, "case"),
            ("the", "DET", 10, "det"), (r.choice(PLACES), "NOUN", 5, "nmod"),
            (".", "PUNCT", 5, "punct")]


TEMPLATES = [_t1, _t5, _t3, _t4, _t2, _t5]
# segments per template in TEMPLATES order
SEGMENTS_PER_TEMPLATE = [2, 3, 2, 2, 1, 3]


def synthetic_conllu(n, seed=0, prefix="s"):
    r = random.Random(seed)
    blocks = []
    for i in range(n):
        toks = TEMPLATES[i % len(TEMPLATES)](r)
        sid = f"{prefix}{i + 1:04d}"
        lines = [f"# sent_id = {sid}", "# text = " + " ".join(t[0] for t in toks)]
        for j, (form, upos, head, rel) in enumerate(toks, start=1):
            lines.append("\t".join([str(j), form, form.lower(), upos, "_", "_", str(head), rel, "_", "_"]))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks) + "\n"


def synthetic_labels(conllu_text):
    ids = [line.split("=", 1)[1].strip() for line in conllu_text.splitlines() if line.startswith("# sent_id")]
    return "".join(f"{sid}\t{LABELS[i % len(LABELS)]}\n" for i, sid in enumerate(ids))


def vocabulary():
    words = set()
    for group in (SUBJECTS, ADJS, ING, PAST, OBJECTS, SING_OBJECTS, PREPS, PLACES, PROPER, WANT,
                  PRONS, XCOMP, ADVS, ["the", "a", "is", "are", "there", "few", "to",
                                       "men", "women", "children", "students"]):
        words.update(w.lower() for w in group)
    for adj, noun in PRED:
        words.update([adj, noun])
    return sorted(words)


SCRIPT_BASE = {"hin": (0x0915, 26), "kan": (0x0C95, 20)}


def pseudo_native(word, target):
    base, span = SCRIPT_BASE[target]
    return "".join(chr(base + (ord(c) - ord("a")) % span) for c in word if c.isalpha())


def synthetic_lexicon(target="hin"):
    """Every vocabulary word plus a few multiword phrases, in native script."""
    entries = {w: pseudo_native(w, target) for w in vocabulary()}
    for prep in PREPS:
        for place in PLACES:
            entries[f"{prep} the {place}"] = f"{pseudo_native(place, target)} {pseudo_native(prep + 'x', target)}"
    return entries


def lexicon_tsv(target="hin"):
    lines = [f"# synthetic eng->{target} lexicon"]
    lines += [f"{k}\t{v}" for k, v in sorted(synthetic_lexicon(target).items())]
    return "\n".join(lines) + "\n"


def write_fixtures():
    text = synthetic_conllu(240, seed=240)
    (FIXTURES / "synthetic_240.conllu").write_text(text, encoding="utf-8")
    (FIXTURES / "synthetic_240.labels.tsv").write_text(synthetic_labels(text), encoding="utf-8")
    for target in SCRIPT_BASE:
        (FIXTURES / f"lexicon_{target}.tsv").write_text(lexicon_tsv(target), encoding="utf-8")


if __name__ == "__main__":
    write_fixtures()
