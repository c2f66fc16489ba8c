"""Vocabulary and matrix loading, token normalization, and alignment.

Interchange formats are deliberately plain: a vocabulary is a JSON
object {token: id} or array [token, ...]; a matrix is an npy file
(see npyio). Token strings from byte-level BPE vocabularies are
rewritten into the SentencePiece convention so that vocabularies from
different tokenizer families can be string-joined.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import npyio, unicode_catalog
from .errors import EmptyAlignment, ParseError, SchemaError, ShapeError
from .unicode_catalog import BOUNDARY_MARKER

PathLike = Union[str, Path]

SCHEMES = ("sentencepiece", "byte_bpe")


def _byte_bpe_char_map() -> dict[str, int]:
    """Inverse of the printable-byte table used by GPT-2-style BPE vocabs.

    Printable bytes keep their own codepoint; the rest are shifted up
    by 256 so every byte has a visible stand-in character.
    """
    printable = set(
        list(range(ord("!"), ord("~") + 1))
        + list(range(0xA1, 0xAD))
        + list(range(0xAE, 0x100))
    )
    mapping: dict[int, int] = {}
    n = 0
    for b in range(256):
        if b in printable:
            mapping[b] = b
        else:
            mapping[b] = 256 + n
            n += 1
    return {chr(cp): b for b, cp in mapping.items()}


_CHAR_TO_BYTE = _byte_bpe_char_map()


def normalize_token(token: str, scheme: str = "sentencepiece") -> str:
    """Rewrite a raw vocab entry into the common SentencePiece convention.

    sentencepiece strings pass through unchanged. byte_bpe strings are
    mapped back to raw bytes and UTF-8 decoded; spaces become the
    word-boundary marker, and byte runs that are not valid UTF-8 are
    kept as escaped <0xNN> literals.
    """
    if scheme == "sentencepiece":
        return token
    if scheme != "byte_bpe":
        raise ValueError(f"unknown normalization scheme {scheme!r}")

    buf = bytearray()
    for ch in token:
        b = _CHAR_TO_BYTE.get(ch)
        if b is None:
            # Not a byte stand-in; keep the character's own UTF-8 bytes.
            buf.extend(ch.encode("utf-8"))
        else:
            buf.append(b)

    try:
        text = buf.decode("utf-8")
    except UnicodeDecodeError:
        text = _decode_with_escapes(bytes(buf))
    return text.replace(" ", BOUNDARY_MARKER)


def _decode_with_escapes(raw: bytes) -> str:
    """Decode greedily, emitting <0xNN> for bytes that break UTF-8."""
    out = []
    i = 0
    n = len(raw)
    while i < n:
        for width in (4, 3, 2, 1):
            chunk = raw[i : i + width]
            if len(chunk) < width:
                continue
            try:
                out.append(chunk.decode("utf-8"))
                i += width
                break
            except UnicodeDecodeError:
                continue
        else:
            out.append(f"<0x{raw[i]:02X}>")
            i += 1
    return "".join(out)


@dataclass
class LoadReport:
    """Issues observed while loading a vocabulary."""

    collisions: list[tuple[str, int]] = field(default_factory=list)
    undecodable: list[int] = field(default_factory=list)

    @property
    def n_collisions(self) -> int:
        return len(self.collisions)


@dataclass
class Vocabulary:
    """Ordered token list with a token -> row index."""

    tokens: list[str]
    model_name: str = ""
    report: LoadReport = field(default_factory=LoadReport)

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise SchemaError("vocabulary tokens are not unique")

    def __len__(self) -> int:
        return len(self.tokens)


def _disambiguate(tokens: list[str]) -> tuple[list[str], list[tuple[str, int]]]:
    """Suffix duplicate tokens so every row keeps a distinct name."""
    seen: Counter[str] = Counter()
    taken = set()
    out = []
    collisions = []
    for row, tok in enumerate(tokens):
        seen[tok] += 1
        if seen[tok] == 1 and tok not in taken:
            out.append(tok)
            taken.add(tok)
            continue
        k = seen[tok] - 1
        cand = f"{tok}#dup{k}"
        while cand in taken or cand in seen:
            k += 1
            cand = f"{tok}#dup{k}"
        collisions.append((tok, row))
        out.append(cand)
        taken.add(cand)
    return out, collisions


def load_vocab(
    path: PathLike,
    scheme: str = "sentencepiece",
    model_name: Optional[str] = None,
) -> Vocabulary:
    """Load a vocabulary JSON file and normalize its tokens.

    Accepts {token: id} with dense ids 0..V-1, or [token, ...] where
    position is the id. Duplicate tokens after normalization are kept
    with a #dupN suffix (row alignment with the matrix must survive)
    and reported.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc

    if isinstance(payload, dict):
        ids = sorted(payload.values())
        if ids != list(range(len(payload))):
            raise SchemaError(f"{path}: token ids are not dense 0..{len(payload) - 1}")
        ordered = [None] * len(payload)
        for tok, i in payload.items():
            if not isinstance(tok, str):
                raise SchemaError(f"{path}: non-string token {tok!r}")
            ordered[i] = tok
        raw_tokens = ordered
    elif isinstance(payload, list):
        if not all(isinstance(t, str) for t in payload):
            raise SchemaError(f"{path}: vocabulary array must contain only strings")
        raw_tokens = list(payload)
    else:
        raise SchemaError(f"{path}: expected a JSON object or array")

    normalized = [normalize_token(t, scheme) for t in raw_tokens]
    tokens, collisions = _disambiguate(normalized)
    undecodable = [i for i, t in enumerate(tokens) if "<0x" in t]
    report = LoadReport(collisions=collisions, undecodable=undecodable)
    return Vocabulary(tokens, model_name=model_name or path.stem, report=report)


def load_matrix(path: PathLike) -> np.ndarray:
    """Load a V x d float32 embedding matrix (see npyio.read_matrix)."""
    return npyio.read_matrix(path)


def save_matrix(path: PathLike, matrix: np.ndarray) -> None:
    """Write an embedding matrix in the interchange format."""
    npyio.write_matrix(path, matrix)


@dataclass
class SharedAlignment:
    """Token-level join of two vocabularies, sorted by token bytes."""

    entries: list[tuple[str, int, int]]
    model_a: str = ""
    model_b: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def tokens(self) -> list[str]:
        return [t for t, _, _ in self.entries]

    @property
    def rows_a(self) -> np.ndarray:
        return np.array([a for _, a, _ in self.entries], dtype=np.int64)

    @property
    def rows_b(self) -> np.ndarray:
        return np.array([b for _, _, b in self.entries], dtype=np.int64)

    def category_counts(self) -> dict[str, int]:
        counts: Counter[str] = Counter()
        for tok, _, _ in self.entries:
            counts[unicode_catalog.categorize_token(tok)] += 1
        return dict(counts)


def align(a: Vocabulary, b: Vocabulary) -> SharedAlignment:
    """Exact string intersection of two vocabularies.

    Entries come back sorted by UTF-8 byte order so the alignment is
    deterministic regardless of input ordering.
    """
    shared = set(a.index) & set(b.index)
    if not shared:
        raise EmptyAlignment(f"{a.model_name} and {b.model_name} share no tokens")
    ordered = sorted(shared, key=lambda t: t.encode("utf-8"))
    entries = [(t, a.index[t], b.index[t]) for t in ordered]
    return SharedAlignment(entries, model_a=a.model_name, model_b=b.model_name)


def overlap_stats(
    a: Vocabulary,
    b: Vocabulary,
    by_category: bool = False,
) -> dict:
    """Intersection counts and percentages under all three denominators.

    Reports |A∩B| normalized by min(|A|,|B|) and by each vocabulary,
    plus the same three bases for the LATIN / non-LATIN split and,
    optionally, per token category.
    """
    shared = set(a.index) & set(b.index)

    def block(n_shared: int, n_a: int, n_b: int) -> dict:
        def pct(num, den):
            return 100.0 * num / den if den else 0.0

        return {
            "shared": n_shared,
            "size_a": n_a,
            "size_b": n_b,
            "pct_min": pct(n_shared, min(n_a, n_b)),
            "pct_of_a": pct(n_shared, n_a),
            "pct_of_b": pct(n_shared, n_b),
        }

    stats = {"total": block(len(shared), len(a), len(b))}

    cats_a = {t: unicode_catalog.categorize_token(t) for t in a.tokens}
    cats_b = {t: unicode_catalog.categorize_token(t) for t in b.tokens}

    latin_a = sum(1 for c in cats_a.values() if c == "LATIN")
    latin_b = sum(1 for c in cats_b.values() if c == "LATIN")
    latin_shared = sum(1 for t in shared if cats_a[t] == "LATIN")
    stats["latin"] = block(latin_shared, latin_a, latin_b)
    stats["non_latin"] = block(
        len(shared) - latin_shared, len(a) - latin_a, len(b) - latin_b
    )

    if by_category:
        per_cat = {}
        count_a = Counter(cats_a.values())
        count_b = Counter(cats_b.values())
        count_shared = Counter(cats_a[t] for t in shared)
        for cat in sorted(set(count_a) | set(count_b)):
            per_cat[cat] = block(count_shared[cat], count_a[cat], count_b[cat])
        stats["by_category"] = per_cat
    return stats


def submatrix(matrix: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    """Row-gathered copy of the matrix, preserving the order of rows."""
    idx = np.asarray(rows, dtype=np.int64)
    if idx.size == 0:
        raise ShapeError("empty row selection")
    if idx.min() < 0 or idx.max() >= matrix.shape[0]:
        bad = idx[(idx < 0) | (idx >= matrix.shape[0])][0]
        raise IndexError(f"row id {bad} out of range for {matrix.shape[0]} rows")
    return matrix[idx].copy()
