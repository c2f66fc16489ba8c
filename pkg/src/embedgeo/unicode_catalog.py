"""Character and token categorization backed by a pinned Unicode table.

Every character maps to a major general-category class (L, P, N, S, M,
Z, C) and, for letters only, a writing-system script (LATIN, CYRILLIC,
HIRAGANA, ...). A token's category is the most frequent character
category after dropping the word-boundary marker; letters vote by
script, everything else by class.
"""

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from . import _ucd_table
from .errors import EmptyToken

#: SentencePiece word-boundary marker (LOWER ONE EIGHTH BLOCK).
BOUNDARY_MARKER = "▁"

#: Major general-category classes, letters excluded from the non-letter set.
CLASS_NAMES = ("L", "P", "N", "S", "M", "Z", "C")

UCD_VERSION = _ucd_table.UCD_VERSION

_STARTS = _ucd_table.STARTS
_CLASSES = _ucd_table.CLASSES
_SCRIPT_IDS = _ucd_table.SCRIPT_IDS
_SCRIPT_NAMES = _ucd_table.SCRIPT_NAMES


@dataclass(frozen=True)
class CharCategory:
    """Major class plus script; script is set iff the class is L."""

    klass: str
    script: Optional[str] = None

    def label(self) -> str:
        """Single vote label: script for letters, class otherwise."""
        return self.script if self.klass == "L" else self.klass


def char_category(c: str) -> CharCategory:
    """Categorize one Unicode scalar value.

    Total over the whole codepoint space; unassigned codepoints come
    back as class C.
    """
    cp = ord(c)
    i = bisect_right(_STARTS, cp) - 1
    klass = _CLASSES[i]
    if klass == "L":
        return CharCategory("L", _SCRIPT_NAMES[_SCRIPT_IDS[i]])
    return CharCategory(klass)


def known_categories() -> tuple[str, ...]:
    """Closed inventory of token categories: all scripts plus non-letter classes."""
    return tuple(_SCRIPT_NAMES) + tuple(k for k in CLASS_NAMES if k != "L")


def categorize_token(token: str) -> str:
    """Majority character category of a token.

    The word-boundary marker is excluded from the vote so that "▁of"
    classifies the same as "of"; a marker-only token falls back to the
    marker's own class. Ties prefer letter scripts over non-letter
    classes, then the label whose character appears first in the token.

    Raises EmptyToken for the empty string.
    """
    if not token:
        raise EmptyToken("cannot categorize an empty token")

    votes: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    is_letter: dict[str, bool] = {}
    for pos, ch in enumerate(token):
        if ch == BOUNDARY_MARKER:
            continue
        cat = char_category(ch)
        label = cat.label()
        votes[label] += 1
        if label not in first_seen:
            first_seen[label] = pos
            is_letter[label] = cat.klass == "L"

    if not votes:
        # Token was nothing but boundary markers.
        return char_category(BOUNDARY_MARKER).label()

    best = max(
        votes,
        key=lambda lab: (votes[lab], is_letter[lab], -first_seen[lab]),
    )
    return best


def categorize_tokens(tokens: Iterable[str]) -> list[str]:
    """Vectorized convenience wrapper over categorize_token."""
    return [categorize_token(t) for t in tokens]
