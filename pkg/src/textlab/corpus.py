"""Corpus ingestion, preprocessing, tokenization, and train/test splitting.

Everything here is a pure function over immutable inputs; no shared state.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    CategoryTooSmall,
    EmptyCorpus,
    InvalidFraction,
    MalformedCsv,
    MalformedJson,
    MissingCategory,
    MissingTextColumn,
)

TRAIN = "TRAIN"
TEST = "TEST"

# Sentinels substituted for mentions, hashtags and links during preprocessing.
MENTION_SENTINEL = "@mention"
HASHTAG_SENTINEL = "#hashtag"
LINK_SENTINEL = "http://link"
SENTINELS = (MENTION_SENTINEL, HASHTAG_SENTINEL, LINK_SENTINEL)

# URLs are replaced first so fragments containing "#" are never mangled by
# the hashtag rule. Mention/hashtag rules replace whole whitespace tokens.
_URL_RE = re.compile(r"https?://\S+")
_MENTION_RE = re.compile(r"(?:(?<=\s)|^)@\w\S*")
_HASHTAG_RE = re.compile(r"(?:(?<=\s)|^)#\w\S*")
_EDGE_PUNCT_RE = re.compile(r"^\W+|\W+$")


@dataclass
class Document:
    id: int
    raw_text: str
    clean_text: str
    tokens: list[str]
    category: str
    source_meta: dict[str, str] = field(default_factory=dict)


@dataclass
class Corpus:
    id: int
    name: str
    categories: list[str]  # lexicographically ordered
    documents: list[Document]


@dataclass
class SplitSpec:
    train_fraction: Fraction
    seed: int
    assignment: dict[int, str]  # document id -> TRAIN | TEST

    def train_ids(self) -> list[int]:
        return [i for i, part in self.assignment.items() if part == TRAIN]

    def test_ids(self) -> list[int]:
        return [i for i, part in self.assignment.items() if part == TEST]


def preprocess(raw: str) -> str:
    """Replace mentions, hashtags and links with their sentinel forms.

    Any whitespace token starting with "@" or "#" followed by a word
    character becomes "@mention" / "#hashtag"; any http(s) URL substring
    becomes "http://link". Idempotent, total.
    """
    text = _URL_RE.sub(LINK_SENTINEL, raw)
    text = _MENTION_RE.sub(MENTION_SENTINEL, text)
    text = _HASHTAG_RE.sub(HASHTAG_SENTINEL, text)
    return text


def tokenize(clean: str) -> list[str]:
    """Lowercase, split on whitespace, strip edge punctuation.

    Sentinel tokens are kept verbatim; internal punctuation (apostrophes,
    hyphens) survives; tokens that strip to nothing are dropped.
    """
    tokens = []
    for piece in clean.lower().split():
        if piece in SENTINELS:
            tokens.append(piece)
            continue
        word = _EDGE_PUNCT_RE.sub("", piece)
        if word:
            tokens.append(word)
    return tokens


def _build_document(doc_id: int, raw_text: str, category: str,
                    source_meta: dict[str, str] | None = None) -> Document:
    clean = preprocess(raw_text)
    return Document(
        id=doc_id,
        raw_text=raw_text,
        clean_text=clean,
        tokens=tokenize(clean),
        category=category,
        source_meta=source_meta or {},
    )


def _assemble_corpus(rows: list[tuple[str, str | None]],
                     default_category: str | None,
                     name: str, corpus_id: int) -> Corpus:
    if not rows:
        raise EmptyCorpus("no data rows")
    documents = []
    for i, (text, category) in enumerate(rows):
        if not category:
            if default_category is None:
                raise MissingCategory(f"row {i} has no category and no default was given")
            category = default_category
        documents.append(_build_document(i, text, category))
    categories = sorted({d.category for d in documents})
    return Corpus(id=corpus_id, name=name, categories=categories, documents=documents)


def ingest_csv(data: bytes, default_category: str | None = None,
               name: str = "corpus", corpus_id: int = 0) -> Corpus:
    """Build a corpus from UTF-8 CSV bytes with a header row.

    Requires a "text" column; "category" is optional and falls back to
    default_category per row.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"not valid UTF-8: {exc}") from exc
    try:
        reader = csv.DictReader(io.StringIO(text, newline=""))
        header = reader.fieldnames
        if header is None:
            raise EmptyCorpus("no header row")
        if "text" not in header:
            raise MissingTextColumn(f"header {header!r} has no 'text' column")
        rows = []
        for record in reader:
            body = record.get("text")
            if body is None:
                raise MalformedCsv(f"row {reader.line_num} is shorter than the header")
            rows.append((body, record.get("category") or None))
    except csv.Error as exc:
        raise MalformedCsv(str(exc)) from exc
    return _assemble_corpus(rows, default_category, name, corpus_id)


def ingest_json(data: bytes, default_category: str | None = None,
                name: str = "corpus", corpus_id: int = 0) -> Corpus:
    """Build a corpus from a UTF-8 JSON array of {"text", "category"?} objects."""
    try:
        parsed = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(parsed, list):
        raise MalformedJson("top-level value must be an array")
    rows = []
    for i, obj in enumerate(parsed):
        if not isinstance(obj, dict):
            raise MalformedJson(f"element {i} is not an object")
        if "text" not in obj:
            raise MissingTextColumn(f"element {i} has no 'text' field")
        if not isinstance(obj["text"], str):
            raise MalformedJson(f"element {i} 'text' is not a string")
        category = obj.get("category")
        if category is not None and not isinstance(category, str):
            raise MalformedJson(f"element {i} 'category' is not a string")
        rows.append((obj["text"], category or None))
    return _assemble_corpus(rows, default_category, name, corpus_id)


def corpus_to_csv(corpus: Corpus) -> bytes:
    """Serialize raw texts and categories back to CSV (round-trips ingest_csv)."""
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(["text", "category"])
    for doc in corpus.documents:
        writer.writerow([doc.raw_text, doc.category])
    return buf.getvalue().encode("utf-8")


def corpus_to_json(corpus: Corpus) -> bytes:
    items = [{"text": d.raw_text, "category": d.category} for d in corpus.documents]
    return json.dumps(items, ensure_ascii=False).encode("utf-8")


def _as_fraction(value) -> Fraction:
    # Floats go through their decimal literal so 0.8 means 4/5, not the
    # nearest binary double.
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def round_half_down(x: Fraction) -> int:
    """Round to nearest integer, exact halves resolved downward."""
    return math.ceil(x - Fraction(1, 2))


def make_split(corpus: Corpus, train_fraction, seed: int) -> SplitSpec:
    """Seeded stratified train/test assignment over a corpus.

    Per category, round_half_down(fraction * n) documents go to TRAIN,
    clamped so both sides keep at least one document. Deterministic for
    identical (corpus, fraction, seed); document order does not matter.
    """
    if not corpus.documents:
        raise EmptyCorpus("cannot split an empty corpus")
    fraction = _as_fraction(train_fraction)
    if not (0 < fraction < 1):
        raise InvalidFraction(f"train_fraction must be in (0,1), got {fraction}")

    by_category: dict[str, list[int]] = {c: [] for c in corpus.categories}
    for doc in corpus.documents:
        by_category[doc.category].append(doc.id)
    for category, ids in by_category.items():
        if len(ids) < 2:
            raise CategoryTooSmall(
                f"category {category!r} has {len(ids)} document(s), need at least 2")

    rng = random.Random(seed)
    assignment: dict[int, str] = {}
    for category in corpus.categories:
        ids = sorted(by_category[category])
        rng.shuffle(ids)
        n_train = round_half_down(fraction * len(ids))
        n_train = min(max(n_train, 1), len(ids) - 1)
        for doc_id in ids[:n_train]:
            assignment[doc_id] = TRAIN
        for doc_id in ids[n_train:]:
            assignment[doc_id] = TEST
    return SplitSpec(train_fraction=fraction, seed=seed, assignment=assignment)


def reindexed(documents: list[Document]) -> list[Document]:
    """Copy documents with sequential ids 0..n-1 (pool views for analyses)."""
    return [replace(doc, id=i) for i, doc in enumerate(documents)]
