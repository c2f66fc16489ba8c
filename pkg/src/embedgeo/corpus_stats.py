"""Token-frequency estimation and the frequency-vs-diversity analysis.

Frequencies are estimated by greedy longest-match segmentation of a
text sample against the vocabulary (a stand-in for the original
subword segmenter: counts are an estimate, and the downstream analysis
is rank-based, so small segmentation differences wash out). Tokens
with nonzero counts are then split into frequency bands and each
band's mean neighbor-category diversity is compared, along with a
Spearman rank correlation.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.stats import spearmanr

from .errors import ArgumentError, EmptyCorpus
from .neighbors import DiversityStat
from .rng import stream_rng
from .unicode_catalog import BOUNDARY_MARKER
from .vocab_io import Vocabulary

PathLike = Union[str, Path]


@dataclass
class FrequencyTable:
    """Occurrence counts for every vocabulary token (zeros included)."""

    counts: dict[str, int]
    corpus: str
    total: int
    unknown_chars: int = 0

    def nonzero(self) -> list[str]:
        return [t for t, c in self.counts.items() if c > 0]


@dataclass
class FrequencyBand:
    """One frequency decile with its sampled tokens and mean diversity."""

    lo: int
    hi: int
    tokens: list[str]
    mean_distinct: float


@dataclass
class BandedSample:
    """Decile banding of nonzero-count tokens plus the rank correlation."""

    bands: list[FrequencyBand]
    zero_band: FrequencyBand
    spearman_rho: float
    n_sampled: int
    statistic: str = "spearman"
    seed: int = 0


def _segment_word(
    word: str, index: Mapping[str, int], max_len: int
) -> Iterable[Optional[str]]:
    """Greedy longest-prefix segmentation; unknown chars yield None."""
    i = 0
    n = len(word)
    while i < n:
        end = min(n, i + max_len)
        while end > i:
            piece = word[i:end]
            if piece in index:
                yield piece
                i = end
                break
            end -= 1
        else:
            yield None
            i += 1


def count_frequencies(
    corpus: Union[PathLike, Iterable[str]],
    vocab: Vocabulary,
    descriptor: Optional[str] = None,
) -> FrequencyTable:
    """Stream a line-delimited text sample and count vocabulary tokens.

    Each line is whitespace-collapsed, word-boundary markers are
    inserted, and the line is consumed left to right by greedy longest
    match; characters no token covers are tallied under a reserved
    <unk> pseudo-token. Memory is constant in the corpus size.
    """
    if isinstance(corpus, (str, Path)):
        descriptor = descriptor or str(corpus)
        lines: Iterable[str] = open(corpus, encoding="utf-8")
    else:
        descriptor = descriptor or "<memory>"
        lines = corpus

    counts = dict.fromkeys(vocab.tokens, 0)
    index = vocab.index
    max_len = max((len(t) for t in vocab.tokens), default=1)
    unknown = 0
    saw_text = False

    try:
        for line in lines:
            text = " ".join(line.split())
            if not text:
                continue
            saw_text = True
            marked = BOUNDARY_MARKER + text.replace(" ", BOUNDARY_MARKER)
            for piece in _segment_word(marked, index, max_len):
                if piece is None:
                    unknown += 1
                else:
                    counts[piece] += 1
    finally:
        if hasattr(lines, "close"):
            lines.close()

    if not saw_text:
        raise EmptyCorpus(f"{descriptor}: no non-empty lines")
    total = sum(counts.values())
    return FrequencyTable(counts, descriptor, total, unknown_chars=unknown)


def frequency_diversity(
    freq: FrequencyTable,
    diversity: Union[Sequence[DiversityStat], Mapping[str, int]],
    vocab: Optional[Vocabulary] = None,
    bands: int = 10,
    per_band_sample: Optional[int] = None,
    seed: int = 0,
) -> BandedSample:
    """Band tokens by frequency and relate frequency to neighbor diversity.

    Tokens with nonzero counts are sorted by (count, token) and cut
    into `bands` equal-size groups; a seeded sample per band (or the
    whole band) contributes its mean distinct-category count. The
    Spearman correlation between log(1 + count) and distinct-category
    count is computed over all sampled tokens. Zero-count tokens are
    reported as an extra band outside the correlation.

    diversity is either a token -> distinct-count mapping, or the
    DiversityStat list from neighbor_diversity together with the vocab
    that maps its row ids back to tokens.
    """
    if isinstance(diversity, Mapping):
        div_by_token: Mapping[str, int] = diversity
    else:
        if vocab is None:
            raise ArgumentError("vocab is required to map diversity row ids to tokens")
        div_by_token = {
            vocab.tokens[d.query_id]: d.distinct_categories for d in diversity
        }

    def token_div(tok: str) -> Optional[int]:
        return div_by_token.get(tok)

    nonzero = [t for t in freq.nonzero() if token_div(t) is not None]
    if len(nonzero) < bands:
        raise ArgumentError(
            f"{len(nonzero)} tokens with nonzero counts cannot fill {bands} bands"
        )
    nonzero.sort(key=lambda t: (freq.counts[t], t))

    rng = stream_rng(seed, "frequency-bands")
    chunks = np.array_split(np.arange(len(nonzero)), bands)
    out_bands = []
    sampled_tokens: list[str] = []
    for chunk in chunks:
        band_tokens = [nonzero[i] for i in chunk]
        if per_band_sample is not None and per_band_sample < len(band_tokens):
            pick = sorted(rng.choice(len(band_tokens), per_band_sample, replace=False))
            band_tokens = [band_tokens[i] for i in pick]
        divs = [token_div(t) for t in band_tokens]
        out_bands.append(
            FrequencyBand(
                lo=freq.counts[nonzero[chunk[0]]],
                hi=freq.counts[nonzero[chunk[-1]]],
                tokens=band_tokens,
                mean_distinct=float(np.mean(divs)),
            )
        )
        sampled_tokens.extend(band_tokens)

    zero_tokens = [t for t, c in freq.counts.items() if c == 0 and token_div(t) is not None]
    zero_band = FrequencyBand(
        lo=0,
        hi=0,
        tokens=zero_tokens,
        mean_distinct=float(np.mean([token_div(t) for t in zero_tokens]))
        if zero_tokens
        else float("nan"),
    )

    x = np.log1p([freq.counts[t] for t in sampled_tokens])
    y = np.array([token_div(t) for t in sampled_tokens], dtype=np.float64)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        rho = 0.0
    else:
        rho = float(spearmanr(x, y).statistic)
    return BandedSample(
        bands=out_bands,
        zero_band=zero_band,
        spearman_rho=rho,
        n_sampled=len(sampled_tokens),
        seed=seed,
    )
