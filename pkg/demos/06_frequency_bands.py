# Do frequent tokens have more diverse neighborhoods? Count token
# occurrences in a corpus sample by greedy longest-match segmentation,
# cut the nonzero-count tokens into frequency deciles, and compare each
# band's mean neighbor diversity. A Spearman rank correlation summarizes
# the relationship; near zero means frequency doesn't predict diversity.

import numpy as np

from embedgeo import Vocabulary, count_frequencies, frequency_diversity
from embedgeo.neighbors import DiversityStat

rng = np.random.default_rng(5)

# a vocabulary of 100 word tokens with a heavy-tailed usage profile
words = [f"w{i:02d}" for i in range(100)]
vocab = Vocabulary(["▁" + w for w in words])
probs = (1.0 / np.arange(1, 101)) ** 1.2
probs /= probs.sum()

draws = rng.choice(100, size=30_000, p=probs)
lines = [
    " ".join(words[i] for i in draws[s : s + 60]) for s in range(0, 30_000, 60)
]
table = count_frequencies(lines, vocab)
print(f"counted {table.total} tokens, {table.unknown_chars} unknown characters")
top = sorted(table.counts.items(), key=lambda kv: -kv[1])[:5]
print("most frequent:", ", ".join(f"{t}={c}" for t, c in top))

# diversity scores unrelated to frequency: banding should come out flat
diversity = [
    DiversityStat(i, int(rng.integers(1, 9)), {}) for i in range(len(vocab))
]
banded = frequency_diversity(table, diversity, vocab, bands=10, seed=17)
print()
print("band   count range      tokens  mean distinct categories")
for i, band in enumerate(banded.bands):
    print(
        f"  {i:2d}   {band.lo:6d}..{band.hi:<6d}  {len(band.tokens):5d}  "
        f"{band.mean_distinct:8.2f}"
    )
print(f"\nspearman rho = {banded.spearman_rho:+.3f} "
      f"over {banded.n_sampled} sampled tokens (flat, as constructed)")

# diversity that grows with frequency: the correlation picks it up
monotone = [
    DiversityStat(i, 1 + int(np.log1p(table.counts[t])), {})
    for i, t in enumerate(vocab.tokens)
]
banded2 = frequency_diversity(table, monotone, vocab, bands=10, seed=17)
print(f"constructed monotone relationship: rho = {banded2.spearman_rho:+.3f}")
