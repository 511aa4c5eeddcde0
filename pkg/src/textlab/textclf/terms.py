"""Search terms with "*" wildcards, expanded against a vocabulary."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import InvalidPattern


@dataclass
class SearchTerm:
    pattern: str
    reason: str = ""


def validate_pattern(pattern: str) -> str:
    """Return the trimmed pattern or raise InvalidPattern.

    A pattern must contain at least one literal (non-"*") character.
    """
    trimmed = pattern.strip()
    if not trimmed:
        raise InvalidPattern("empty pattern")
    if set(trimmed) == {"*"}:
        raise InvalidPattern(f"pattern {pattern!r} is all wildcards")
    return trimmed


def pattern_matcher(pattern: str):
    """Compile a wildcard pattern into a whole-word matcher.

    "*" matches any run of zero or more characters, anywhere in the
    pattern. Matching is case-insensitive.
    """
    trimmed = validate_pattern(pattern).lower()
    regex = re.compile("".join(
        ".*" if part == "*" else re.escape(part)
        for part in re.split(r"(\*)", trimmed) if part
    ))
    return lambda word: regex.fullmatch(word.lower()) is not None


def expand_terms(terms: list[SearchTerm], vocabulary: set[str]) -> dict[str, set[str]]:
    """Map each term's pattern to the vocabulary words it matches.

    A word may be matched by several patterns; callers deduplicate when
    they build a feature set.
    """
    matches: dict[str, set[str]] = {}
    for term in terms:
        matcher = pattern_matcher(term.pattern)
        matches[term.pattern] = {w for w in vocabulary if matcher(w)}
    return matches


def matched_words(expansion: dict[str, set[str]]) -> set[str]:
    """Deduplicated union of all matched words."""
    union: set[str] = set()
    for words in expansion.values():
        union |= words
    return union
