"""Translation backends and the persistent translation cache.

Every backend exposes ``name`` and ``translate_text(text, source, target)``.
:func:`translate` wraps a backend call and tags the output tokens.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import requests

from .tagging import ENGLISH, LanguageTagger, TokenTag, translated

log = logging.getLogger(__name__)

MT_URL_ENV = "CODEMIX_MT_URL"
MT_KEY_ENV = "CODEMIX_MT_KEY"


class TranslationError(RuntimeError):
    pass


class BackendUnavailable(TranslationError):
    pass


class UnsupportedPair(TranslationError):
    pass


class StoreCorrupt(TranslationError):
    pass


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source: str
    target: str

    def __post_init__(self):
        if not self.source or not self.target:
            raise ValueError("language codes must be non-empty")
        if self.source == self.target:
            raise ValueError(f"source and target are both {self.source!r}")
        if not self.text.strip():
            raise ValueError("cannot translate empty text")


@dataclass(frozen=True)
class TranslatedSegment:
    tokens: tuple[TokenTag, ...]
    backend_name: str
    origin: object = None

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("translated segment has no tokens")


class Backend(Protocol):
    name: str

    def translate_text(self, text: str, source: str, target: str) -> str: ...


def normalize_phrase(text: str) -> str:
    return " ".join(text.casefold().split())


@dataclass
class Lexicon:
    entries: dict[str, str]
    max_phrase_len: int = 0

    def __post_init__(self):
        clean = {}
        for key, value in self.entries.items():
            k = normalize_phrase(key)
            v = value.strip()
            if not k or not v:
                raise ValueError(f"empty lexicon entry {key!r} -> {value!r}")
            clean[k] = v
        self.entries = clean
        self.max_phrase_len = max((len(k.split()) for k in clean), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, phrase: str) -> bool:
        return normalize_phrase(phrase) in self.entries


def load_lexicon(path) -> Lexicon:
    """Read an ``english<TAB>native`` TSV file; later duplicates win."""
    entries = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated columns")
            entries[parts[0]] = parts[1]
    return Lexicon(entries)


def lexicon_translate(lexicon: Lexicon, text: str) -> str:
    """Greedy longest-match phrase replacement, left to right."""
    tokens = text.split()
    folded = [t.casefold() for t in tokens]
    out = []
    i = 0
    while i < len(tokens):
        for width in range(min(lexicon.max_phrase_len, len(tokens) - i), 0, -1):
            hit = lexicon.entries.get(" ".join(folded[i:i + width]))
            if hit is not None:
                out.append(hit)
                i += width
                break
        else:
            out.append(tokens[i])
            i += 1
    return " ".join(out)


class LexiconBackend:
    """Offline, deterministic backend driven by phrase lexicons (one per target)."""

    name = "lexicon"

    def __init__(self, lexicons: dict[str, Lexicon], source: str = ENGLISH):
        self.lexicons = dict(lexicons)
        self.source = source

    def translate_text(self, text: str, source: str, target: str) -> str:
        if source != self.source or target not in self.lexicons:
            raise UnsupportedPair(f"no lexicon for {source}->{target}")
        return lexicon_translate(self.lexicons[target], text)


class HttpBackend:
    """JSON-over-HTTP machine translation client.

    Sends ``{"q", "source", "target"}`` and expects ``{"translatedText"}``
    back. Failed attempts are retried with exponential backoff; once the
    attempts or the per-request deadline run out it raises
    :class:`BackendUnavailable`.
    """

    name = "http"

    def __init__(self, url: str | None = None, key: str | None = None, attempts: int = 3,
                 backoff: float = 0.5, deadline: float = 30.0, session=None, sleep=time.sleep):
        self.url = url or os.environ.get(MT_URL_ENV)
        if not self.url:
            raise BackendUnavailable(f"no MT endpoint configured (set {MT_URL_ENV})")
        self.key = key if key is not None else os.environ.get(MT_KEY_ENV)
        self.attempts = attempts
        self.backoff = backoff
        self.deadline = deadline
        self.session = session or requests.Session()
        self._sleep = sleep

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.key:
            headers["Authorization"] = f"Bearer {self.key}"
        return headers

    def translate_text(self, text: str, source: str, target: str) -> str:
        payload = {"q": text, "source": source, "target": target}
        started = time.monotonic()
        last_error = None
        for attempt in range(self.attempts):
            remaining = self.deadline - (time.monotonic() - started)
            if remaining <= 0:
                break
            try:
                resp = self.session.post(self.url, json=payload, headers=self._headers(),
                                         timeout=remaining)
                if 200 <= resp.status_code < 300:
                    out = resp.json().get("translatedText")
                    if isinstance(out, str):
                        return out
                    last_error = "response lacks translatedText"
                else:
                    last_error = f"HTTP {resp.status_code}"
            except (requests.RequestException, ValueError) as exc:
                last_error = str(exc)
            log.warning("translation attempt %d/%d failed: %s", attempt + 1, self.attempts, last_error)
            if attempt + 1 < self.attempts:
                delay = self.backoff * (2 ** attempt)
                if time.monotonic() - started + delay >= self.deadline:
                    break
                self._sleep(delay)
        raise BackendUnavailable(f"{self.url}: giving up after {self.attempts} attempts ({last_error})")


def cache_key(source: str, target: str, text: str) -> str:
    raw = json.dumps([source, target, text], ensure_ascii=False)
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


def _checksum(key: str, payload: bytes) -> str:
    return format(zlib.crc32(key.encode("ascii") + payload), "08x")


class TranslationStore:
    """Append-only key-value log on a single file.

    One entry per line: ``key<TAB>length<TAB>payload<TAB>crc32``, with the
    payload JSON-encoded so it never contains a tab or newline. Rewriting a
    key appends a new entry; the last valid entry wins. Entries that fail
    their length or checksum test are dropped with a warning.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._data: dict[str, str] = {}
        self._lock = threading.Lock()
        self.corrupt: set[str] = set()
        if self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, "rb") as f:
            for lineno, raw in enumerate(f, start=1):
                try:
                    key, value = self._decode(raw)
                except StoreCorrupt as exc:
                    log.warning("%s:%d: %s; treating as a miss", self.path, lineno, exc)
                    key = raw.split(b"\t", 1)[0].decode("ascii", "replace")
                    self._data.pop(key, None)
                    self.corrupt.add(key)
                    continue
                self._data[key] = value
                self.corrupt.discard(key)

    @staticmethod
    def _decode(raw: bytes) -> tuple[str, str]:
        if not raw.endswith(b"\n"):
            raise StoreCorrupt("truncated entry")
        parts = raw[:-1].split(b"\t")
        if len(parts) != 4:
            raise StoreCorrupt("wrong field count")
        key_b, length_b, payload, crc = parts
        key = key_b.decode("ascii", "replace")
        try:
            length = int(length_b)
        except ValueError:
            raise StoreCorrupt("bad length field") from None
        if length != len(payload) or _checksum(key, payload) != crc.decode("ascii", "replace"):
            raise StoreCorrupt(f"checksum mismatch for {key[:12]}")
        try:
            value = json.loads(payload.decode("utf-8"))
        except ValueError:
            raise StoreCorrupt("undecodable payload") from None
        if not isinstance(value, str):
            raise StoreCorrupt("payload is not a string")
        return key, value

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: str) -> bool:
        return key in self._data

    def get(self, key: str) -> str | None:
        return self._data.get(key)

    def _ends_with_newline(self) -> bool:
        with open(self.path, "rb") as f:
            f.seek(-1, os.SEEK_END)
            return f.read(1) == b"\n"

    def put(self, key: str, value: str) -> None:
        payload = json.dumps(value, ensure_ascii=False).encode("utf-8")
        line = b"\t".join([key.encode("ascii"), str(len(payload)).encode("ascii"), payload,
                           _checksum(key, payload).encode("ascii")]) + b"\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "ab") as f:
                if f.tell() and not self._ends_with_newline():
                    line = b"\n" + line  # seal a torn final entry
                f.write(line)
            self._data[key] = value
            self.corrupt.discard(key)


@dataclass
class CachedBackend:
    backend: Backend
    store: TranslationStore
    hits: int = field(default=0, init=False)
    misses: int = field(default=0, init=False)

    @property
    def name(self) -> str:
        return self.backend.name

    def translate_text(self, text: str, source: str, target: str) -> str:
        key = cache_key(source, target, text)
        value = self.store.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = self.backend.translate_text(text, source, target)
        self.store.put(key, value)
        return value


def cached(backend: Backend, store: TranslationStore) -> CachedBackend:
    return CachedBackend(backend, store)


def translate(backend: Backend, request: TranslationRequest, tagger: LanguageTagger | None = None,
              origin=None) -> TranslatedSegment:
    tagger = tagger or LanguageTagger()
    output = backend.translate_text(request.text, request.source, request.target)
    forms = output.split()
    if not forms:
        raise BackendUnavailable(f"{backend.name} returned empty output for {request.text!r}")
    tags = tagger.tag_tokens(forms, translated(request.target), source_forms=request.text.split())
    return TranslatedSegment(tokens=tuple(tags), backend_name=backend.name, origin=origin)
