"""Per-token language tags."""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

ENGLISH = "eng"
OTHER = "other"

# script name (as it prefixes unicodedata names) for each native language
NATIVE_SCRIPTS = {
    "hin": "DEVANAGARI",
    "mar": "DEVANAGARI",
    "kan": "KANNADA",
    "ben": "BENGALI",
    "guj": "GUJARATI",
    "tam": "TAMIL",
    "tel": "TELUGU",
    "mal": "MALAYALAM",
    "pan": "GURMUKHI",
}

# language assumed for a native-script token that has no translation context
DEFAULT_SCRIPT_LANG = {
    "DEVANAGARI": "hin",
    "KANNADA": "kan",
    "BENGALI": "ben",
    "GUJARATI": "guj",
    "TAMIL": "tam",
    "TELUGU": "tel",
    "MALAYALAM": "mal",
    "GURMUKHI": "pan",
}

URL_RE = re.compile(r"^(?:[a-z][a-z0-9+.-]*://|www\.)\S+$", re.IGNORECASE)


@dataclass(frozen=True)
class TokenTag:
    form: str
    lang: str

    def __post_init__(self):
        if not self.form:
            raise ValueError("token form must be non-empty")

    def to_dict(self) -> dict:
        return {"form": self.form, "lang": self.lang}


def is_punct(form: str) -> bool:
    return bool(form) and all(unicodedata.category(ch)[0] in "PS" for ch in form)


def is_numeric(form: str) -> bool:
    """Digits, optionally with punctuation such as ``3.5`` or ``10,000``."""
    return (any(ch.isdigit() for ch in form)
            and all(ch.isdigit() or unicodedata.category(ch)[0] == "P" for ch in form))


def dominant_script(form: str) -> str | None:
    counts = Counter()
    for ch in form:
        if not ch.isalpha() and unicodedata.category(ch)[0] != "M":
            continue
        name = unicodedata.name(ch, "")
        if name:
            counts[name.split(" ", 1)[0]] += 1
    if not counts:
        return None
    return counts.most_common(1)[0][0]


def translated(code: str) -> tuple[str, str]:
    return ("translated", code)


UNTOUCHED = ("untouched", None)


@dataclass
class LanguageTagger:
    """Assigns ``eng``, a native code, or ``other`` to a surface form.

    Rules, first match wins:

    1. punctuation-only, numeric, URL-like or other-lexicon forms -> other
    2. native-script forms -> the native language (the translation target
       when it uses that script, else the script's default language)
    3. Latin forms inside a translated segment that were passed through
       untranslated -> eng
    4. otherwise eng for untouched text, the target for translated text

    For rule 3, ``source_forms`` lets the caller say which forms were in
    the segment before translation. Without it every Latin-script form in
    translated text counts as passthrough.
    """

    other_lexicon: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        self.other_lexicon = frozenset(w.casefold() for w in self.other_lexicon)

    def tag(self, form: str, provenance=UNTOUCHED, source_forms: Iterable[str] | None = None) -> str:
        if is_punct(form) or is_numeric(form) or URL_RE.match(form) or form.casefold() in self.other_lexicon:
            return OTHER
        kind, code = provenance
        script = dominant_script(form)
        if script is not None and script != "LATIN":
            if code is not None and NATIVE_SCRIPTS.get(code) == script:
                return code
            if script in DEFAULT_SCRIPT_LANG:
                return DEFAULT_SCRIPT_LANG[script]
        if kind == "translated":
            if source_forms is None:
                return ENGLISH if script == "LATIN" else code
            if script == "LATIN" and form.casefold() in {f.casefold() for f in source_forms}:
                return ENGLISH
            return code
        return ENGLISH

    def tag_tokens(self, forms: Iterable[str], provenance=UNTOUCHED,
                   source_forms: Iterable[str] | None = None) -> list[TokenTag]:
        if source_forms is not None:
            source_forms = [f.casefold() for f in source_forms]
        return [TokenTag(f, self.tag(f, provenance, source_forms)) for f in forms]


def load_other_lexicon(path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.casefold())
    return frozenset(words)


_DEFAULT_TAGGER = LanguageTagger()


def tag_token_language(form: str, provenance=UNTOUCHED, source_forms=None,
                       tagger: LanguageTagger | None = None) -> str:
    return (tagger or _DEFAULT_TAGGER).tag(form, provenance, source_forms)
