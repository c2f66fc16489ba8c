"""Canonical-angle similarity between two embedding matrices.

Both matrices (same rows, shared vocabulary order) are reduced by thin
QR; the singular values of Q_a^T Q_b are the cosines of the canonical
angles between the column spaces. The leading value is the cosine of
the smallest angle: 1.0 means one matrix is an exact rotation of the
other, values near the random baseline mean no rotational similarity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, EmbedGeoError, RankError, ShapeError

#: Singular values may exceed 1 by at most this much before it is
#: treated as a numerical fault rather than roundoff.
OVERSHOOT_TOL = 1e-6


@dataclass
class AngleSpectrum:
    """Cosines of the canonical angles, descending, clamped to [0, 1]."""

    sigma: np.ndarray
    n_rows: int
    d_a: int
    d_b: int

    @property
    def cos_smallest_angle(self) -> float:
        return float(self.sigma[0])

    @property
    def angles_rad(self) -> np.ndarray:
        return np.arccos(self.sigma)


def _thin_q(m: np.ndarray, label: str) -> np.ndarray:
    """Reduced-QR orthonormal basis with a full-column-rank check."""
    m = np.asarray(m, dtype=np.float64)
    n, d = m.shape
    q, r = np.linalg.qr(m, mode="reduced")
    sv = np.linalg.svd(r, compute_uv=False)
    cutoff = sv[0] * max(n, d) * np.finfo(np.float64).eps if sv[0] > 0 else 0.0
    rank = int(np.sum(sv > cutoff))
    if rank < d:
        raise RankError(
            f"matrix {label} is rank deficient: rank {rank} < {d} columns",
            rank=rank,
        )
    return q


def canonical_angles(a: np.ndarray, b: np.ndarray) -> AngleSpectrum:
    """Cosine spectrum of the canonical angles between column spaces.

    Requires equal row counts, at least as many rows as columns, and
    full column rank on both sides. Only the small d_a x d_b product is
    ever decomposed, never the tall inputs.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("both inputs must be rank-2 matrices")
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"row counts differ: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    d_a, d_b = a.shape[1], b.shape[1]
    if n < max(d_a, d_b):
        raise RankError(
            f"need rows >= columns, got {n} rows for {max(d_a, d_b)} columns"
        )

    q_a = _thin_q(a, "A")
    q_b = _thin_q(b, "B")
    sigma = np.linalg.svd(q_a.T @ q_b, compute_uv=False)
    if sigma[0] > 1.0 + OVERSHOOT_TOL:
        raise EmbedGeoError(
            f"singular value {sigma[0]!r} exceeds 1 beyond tolerance; "
            "QR factorization is inconsistent"
        )
    return AngleSpectrum(np.clip(sigma, 0.0, 1.0), n, d_a, d_b)


def random_baseline(n: int, d: int = 512, seed: int = 0) -> np.ndarray:
    """Seeded i.i.d. standard Gaussian matrix used as a null reference."""
    if n < d:
        raise ArgumentError(f"need n >= d, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, d)).astype(np.float32)
