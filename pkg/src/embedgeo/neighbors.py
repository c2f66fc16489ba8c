"""Exact cosine k-nearest-neighbor search and neighborhood statistics.

The search is brute force by design: distances are computed with
blocked matrix products over pre-normalized rows, and the top k is
selected under the exact lexicographic order (distance, row id), so
results are identical for any block size or worker count. Cosine
distance is 1 - x.y / (|x||y|), in [0, 2].
"""

import csv
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ArgumentError, DegenerateQuery, ShapeError
from .rng import stream_rng


@dataclass
class NeighborSet:
    """Ranked neighbors of one query row; the query itself is excluded."""

    query_id: int
    ids: np.ndarray
    distances: np.ndarray


@dataclass
class DiversityStat:
    """How many distinct token categories a query's neighborhood spans."""

    query_id: int
    distinct_categories: int
    histogram: dict[str, int]


@dataclass
class OverlapStat:
    """Size of the intersection of one token's neighbor sets in two models."""

    token: str
    common: int


@dataclass
class CategoryBreakdown:
    """Row-normalized neighbor-category distribution per query category."""

    row_labels: list[str]
    col_labels: list[str]
    matrix: np.ndarray


def _unit_rows(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Float64 row-normalized copy plus a mask of zero-norm rows."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"embedding matrix must be rank 2, got shape {m.shape}")
    norms = np.linalg.norm(m, axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    return m / safe[:, None], zero


def _topk_block(
    dist: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Exact top-k per row under the order (distance, column id).

    Boundary ties are resolved toward lower ids; rows with a value
    plateau at the k-th position fall back to an exact candidate sort.
    """
    n_rows, n_cols = dist.shape
    part = np.argpartition(dist, k - 1, axis=1)[:, :k]
    part = np.sort(part, axis=1)
    pdist = np.take_along_axis(dist, part, axis=1)
    kth = pdist.max(axis=1)

    # A boundary tie only matters when ids outside the partition share
    # the k-th distance with ids inside it.
    n_eq_in = (pdist == kth[:, None]).sum(axis=1)
    n_eq_all = (dist == kth[:, None]).sum(axis=1)
    for r in np.nonzero(n_eq_all > n_eq_in)[0]:
        cand = np.nonzero(dist[r] <= kth[r])[0]
        order = np.lexsort((cand, dist[r, cand]))[:k]
        part[r] = np.sort(cand[order])
        pdist[r] = dist[r, part[r]]

    order = np.argsort(pdist, axis=1, kind="stable")
    ids = np.take_along_axis(part, order, axis=1)
    dists = np.take_along_axis(pdist, order, axis=1)
    return ids, dists


def knn(
    matrix: np.ndarray,
    queries: Optional[Sequence[int]] = None,
    k: int = 50,
    block_size: int = 256,
    workers: int = 1,
) -> list[NeighborSet]:
    """Exact k nearest neighbors by cosine distance within one matrix.

    queries defaults to every row. Zero-norm rows are never returned as
    neighbors; a zero-norm query raises DegenerateQuery. k must leave
    at least k eligible candidates after excluding the query itself.
    """
    unit, zero = _unit_rows(matrix)
    n = unit.shape[0]
    if k < 1:
        raise ArgumentError("k must be positive")
    if k >= n:
        raise ArgumentError(f"k={k} must be smaller than the row count {n}")
    eligible = n - int(zero.sum())
    if k > eligible - 1:
        raise ArgumentError(
            f"k={k} exceeds the {eligible - 1} usable candidate rows"
        )

    if queries is None:
        q_ids = np.arange(n, dtype=np.int64)
    else:
        q_ids = np.asarray(list(queries), dtype=np.int64)
        if q_ids.size and (q_ids.min() < 0 or q_ids.max() >= n):
            raise IndexError("query id out of range")
    bad = q_ids[zero[q_ids]]
    if bad.size:
        raise DegenerateQuery(f"query row {int(bad[0])} has zero norm")

    zero_cols = np.nonzero(zero)[0]

    def run_block(start: int) -> tuple[np.ndarray, np.ndarray]:
        block = q_ids[start : start + block_size]
        sims = unit[block] @ unit.T
        dist = 1.0 - sims
        dist[:, zero_cols] = np.inf
        dist[np.arange(block.size), block] = np.inf
        return _topk_block(dist, k)

    starts = range(0, q_ids.size, block_size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_block, starts))
    else:
        parts = [run_block(s) for s in starts]

    out = []
    for bi, start in enumerate(starts):
        ids, dists = parts[bi]
        for r, qid in enumerate(q_ids[start : start + block_size]):
            out.append(NeighborSet(int(qid), ids[r].copy(), dists[r].copy()))
    return out


def token_categories(tokens: Sequence[str]) -> list[str]:
    """Per-row token categories (see unicode_catalog.categorize_token)."""
    from .unicode_catalog import categorize_token

    return [categorize_token(t) for t in tokens]


def neighbor_diversity(
    matrix: np.ndarray,
    categories: Sequence[str],
    k: int = 50,
    sample: Optional[float] = None,
    seed: int = 0,
    workers: int = 1,
) -> tuple[list[DiversityStat], float]:
    """Distinct-category count over each token's k nearest neighbors.

    With sample in (0, 1], a seeded random fraction of rows is used as
    queries instead of the full vocabulary. Returns the per-query stats
    and their mean.
    """
    n = matrix.shape[0]
    if len(categories) != n:
        raise ShapeError("one category label per matrix row is required")
    queries = None
    if sample is not None:
        if not 0.0 < sample <= 1.0:
            raise ArgumentError("sample must be in (0, 1]")
        rng = stream_rng(seed, "diversity-sample")
        size = max(1, int(round(sample * n)))
        queries = np.sort(rng.choice(n, size=size, replace=False))

    cats = np.asarray(categories, dtype=object)
    stats = []
    for ns in knn(matrix, queries=queries, k=k, workers=workers):
        hist = Counter(cats[ns.ids].tolist())
        stats.append(DiversityStat(ns.query_id, len(hist), dict(hist)))
    mean = float(np.mean([s.distinct_categories for s in stats]))
    return stats, mean


def neighbor_breakdown(
    matrix: np.ndarray,
    categories: Sequence[str],
    k: int = 50,
    for_categories: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> CategoryBreakdown:
    """Where each category's tokens find their neighbors.

    Each requested category (rows) gets the distribution of its tokens'
    pooled k-NN neighbor categories (columns); rows sum to 1.
    """
    n = matrix.shape[0]
    if len(categories) != n:
        raise ShapeError("one category label per matrix row is required")
    cats = np.asarray(categories, dtype=object)
    inventory = sorted(set(categories))
    if for_categories is None:
        for_categories = inventory
    else:
        unknown = [c for c in for_categories if c not in set(inventory)]
        if unknown:
            raise ArgumentError(f"no tokens in categories {unknown}")

    col_index = {c: j for j, c in enumerate(inventory)}
    counts = np.zeros((len(for_categories), len(inventory)), dtype=np.float64)
    row_index = {c: i for i, c in enumerate(for_categories)}
    wanted = set(for_categories)

    queries = np.nonzero(np.isin(cats, list(wanted)))[0]
    for ns in knn(matrix, queries=queries, k=k, workers=workers):
        i = row_index[cats[ns.query_id]]
        for c in cats[ns.ids]:
            counts[i, col_index[c]] += 1.0

    row_sums = counts.sum(axis=1, keepdims=True)
    if (row_sums == 0).any():
        empty = [for_categories[i] for i in np.nonzero(row_sums[:, 0] == 0)[0]]
        raise ArgumentError(f"categories without any usable query row: {empty}")
    return CategoryBreakdown(list(for_categories), inventory, counts / row_sums)


def neighbor_overlap(
    a: np.ndarray,
    b: np.ndarray,
    alignment=None,
    k: int = 100,
    workers: int = 1,
) -> tuple[list[OverlapStat], float]:
    """Per-token |N_a ∩ N_b| over two row-aligned matrices.

    Both matrices must already be restricted to the shared vocabulary
    in the same row order (use vocab_io.align + submatrix). When an
    alignment is supplied its tokens label the stats and its length
    must match the row count.
    """
    if a.shape[0] != b.shape[0]:
        raise ShapeError(
            f"row counts differ: {a.shape[0]} vs {b.shape[0]}"
        )
    if alignment is not None and len(alignment) != a.shape[0]:
        raise ShapeError(
            f"alignment has {len(alignment)} entries but matrices have "
            f"{a.shape[0]} rows"
        )
    tokens = alignment.tokens if alignment is not None else [str(i) for i in range(a.shape[0])]

    sets_a = knn(a, k=k, workers=workers)
    sets_b = knn(b, k=k, workers=workers)
    stats = []
    for sa, sb in zip(sets_a, sets_b):
        common = np.intersect1d(sa.ids, sb.ids, assume_unique=True).size
        stats.append(OverlapStat(tokens[sa.query_id], int(common)))
    mean = float(np.mean([s.common for s in stats]))
    return stats, mean


def export_neighbor_graph(sets: Sequence[NeighborSet], path) -> None:
    """Write neighbor sets as a src,dst,distance edge list (CSV)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["src", "dst", "distance"])
        for ns in sets:
            for j, d in zip(ns.ids, ns.distances):
                writer.writerow([ns.query_id, int(j), repr(float(d))])
