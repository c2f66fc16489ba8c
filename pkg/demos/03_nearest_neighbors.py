# Exact cosine neighborhoods. Three experiments on synthetic data with
# known structure: ranked neighbor lists, neighborhood category
# diversity, and where each category finds its neighbors.

import numpy as np

from embedgeo import knn, neighbor_breakdown, neighbor_diversity, neighbor_overlap

rng = np.random.default_rng(7)

# --- build four isolated "writing system" clusters ---------------------
# each cluster lives on its own coordinate block, so cross-cluster
# cosine similarity is exactly zero
per, dims = 30, 4
blocks = []
labels = []
for c, name in enumerate(["LATIN", "CYRILLIC", "CJK", "N"]):
    block = np.zeros((per, 4 * dims), dtype=np.float32)
    block[:, c * dims] = 1.0
    block[:, c * dims : (c + 1) * dims] += 0.1 * rng.random((per, dims), dtype=np.float32)
    blocks.append(block)
    labels += [name] * per
matrix = np.vstack(blocks)

print("ranked neighbors of row 0 (a LATIN token)")
print("-----------------------------------------")
(ns,) = knn(matrix, queries=[0], k=5)
for rank, (j, d) in enumerate(zip(ns.ids, ns.distances), 1):
    print(f"  {rank}. row {j:3d}  {labels[j]:9} distance {d:.4f}")

# --- diversity: distinct categories among the k nearest neighbors ------
stats, mean = neighbor_diversity(matrix, labels, k=20)
print()
print(f"isolated clusters: mean distinct categories = {mean:.2f} (always 1)")

# interleave all categories on a ring so every neighborhood mixes them
ring_n = 160
theta = np.arange(ring_n) * (0.5 * np.pi / ring_n)
ring = np.stack([np.cos(theta), np.sin(theta)], axis=1)
ring_labels = [["LATIN", "CYRILLIC", "CJK", "N"][i % 4] for i in range(ring_n)]
_, ring_mean = neighbor_diversity(ring, ring_labels, k=20)
print(f"fully interleaved ring:  mean distinct categories = {ring_mean:.2f} (always 4)")

# --- breakdown: which categories neighbor which ------------------------
bd = neighbor_breakdown(matrix, labels, k=20)
print()
print("neighbor-category distribution (rows sum to 1)")
header = "           " + "".join(f"{c:>10}" for c in bd.col_labels)
print(header)
for i, row in enumerate(bd.row_labels):
    cells = "".join(f"{bd.matrix[i, j]:10.2f}" for j in range(len(bd.col_labels)))
    print(f"  {row:9}{cells}")

# --- cross-model overlap ------------------------------------------------
# a rotation preserves every cosine, so neighbor sets are identical
q, _ = np.linalg.qr(rng.standard_normal((16, 16)))
_, mean_rot = neighbor_overlap(matrix, matrix @ q, k=10)
rand = rng.standard_normal((matrix.shape[0], 16))
_, mean_rand = neighbor_overlap(matrix, rand, k=10)
print()
print(f"neighbor overlap, same geometry rotated: {mean_rot:.1f} of k=10")
print(f"neighbor overlap, unrelated matrix:      {mean_rand:.2f} of k=10")
print(f"(chance level is k^2/(V-1) = {100 / (matrix.shape[0] - 1):.2f})")
