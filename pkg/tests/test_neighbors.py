import numpy as np
import pytest

from embedgeo import (
    ArgumentError,
    DegenerateQuery,
    ShapeError,
    Vocabulary,
    align,
    export_neighbor_graph,
    knn,
    neighbor_breakdown,
    neighbor_diversity,
    neighbor_overlap,
)
from oracles import clustered_matrix, naive_knn, random_orthogonal, ring_matrix


def assert_matches_oracle(matrix, k, atol=1e-6):
    got = knn(matrix, k=k)
    expected = naive_knn(matrix, k)
    for ns, (ids, dists) in zip(got, expected):
        assert np.array_equal(ns.ids, ids), f"query {ns.query_id}"
        assert np.allclose(ns.distances, dists, atol=atol)


class TestKnn:
    def test_duplicated_row_is_first_neighbor(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((6, 4)).astype(np.float32)
        m[3] = m[0]
        ns = knn(m, queries=[0], k=2)[0]
        assert ns.ids[0] == 3
        assert ns.distances[0] == 0.0

    def test_identity_matrix_ties_broken_by_id(self):
        sets = knn(np.eye(4, dtype=np.float32), k=3)
        for ns in sets:
            others = [j for j in range(4) if j != ns.query_id]
            assert ns.ids.tolist() == others
            assert np.allclose(ns.distances, 1.0)

    def test_matches_naive_oracle_random(self):
        rng = np.random.default_rng(42)
        assert_matches_oracle(rng.standard_normal((64, 8)).astype(np.float32), k=5)

    def test_matches_oracle_with_tie_plateaus(self):
        # rows repeated from a small pool give bitwise-equal distances,
        # so the k boundary falls inside a tie plateau
        rng = np.random.default_rng(11)
        pool = rng.standard_normal((6, 8)).astype(np.float32)
        m = pool[np.arange(40) % 6]
        assert_matches_oracle(m, k=7)
        # boundary ties keep the lowest ids: for query 0 the zero-distance
        # copies are ids 6, 12, 18, 24, 30, 36 and k=3 takes the first three
        ns = knn(m, queries=[0], k=3)[0]
        assert ns.ids.tolist() == [6, 12, 18]
        assert np.allclose(ns.distances, 0.0)

    def test_self_never_a_neighbor(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((20, 5)).astype(np.float32)
        for ns in knn(m, k=10):
            assert ns.query_id not in ns.ids

    def test_invariants_sorted_unique_in_range(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((30, 4)).astype(np.float32)
        for ns in knn(m, k=8):
            assert len(set(ns.ids.tolist())) == 8
            assert np.all(np.diff(ns.distances) >= 0)
            assert np.all(ns.distances >= 0) and np.all(ns.distances <= 2)

    def test_k_too_large(self):
        m = np.eye(4, dtype=np.float32)
        with pytest.raises(ArgumentError):
            knn(m, k=4)

    def test_zero_norm_query_rejected(self):
        m = np.eye(4, dtype=np.float32)
        m[1] = 0
        with pytest.raises(DegenerateQuery):
            knn(m, queries=[1], k=2)

    def test_zero_norm_rows_excluded_as_neighbors(self):
        m = np.eye(4, dtype=np.float32)
        m[1] = 0
        for ns in knn(m, queries=[0, 2, 3], k=2):
            assert 1 not in ns.ids

    def test_scale_invariance_single_row(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((25, 6)).astype(np.float32)
        base = knn(m, k=5)
        scaled = m.copy()
        scaled[7] *= 31.0
        after = knn(scaled, k=5)
        for b, a in zip(base, after):
            assert np.array_equal(b.ids, a.ids)
            assert np.allclose(b.distances, a.distances, atol=1e-6)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(4)
        m = rng.standard_normal((30, 8))
        q = random_orthogonal(8, rng)
        base = knn(m, k=6)
        rotated = knn(m @ q, k=6)
        for b, a in zip(base, rotated):
            assert np.array_equal(b.ids, a.ids)
            assert np.allclose(b.distances, a.distances, atol=1e-5)

    def test_block_size_and_workers_independence(self):
        # ids are exactly stable; distances may wobble in the last bits
        # because BLAS picks different kernels per block shape
        rng = np.random.default_rng(5)
        m = rng.standard_normal((70, 9)).astype(np.float32)
        base = knn(m, k=4, block_size=256, workers=1)
        for block in (1, 7, 64):
            for workers in (1, 3):
                other = knn(m, k=4, block_size=block, workers=workers)
                for b, o in zip(base, other):
                    assert np.array_equal(b.ids, o.ids)
                    assert np.allclose(b.distances, o.distances, atol=1e-12)

    def test_same_block_size_is_bitwise_reproducible(self):
        rng = np.random.default_rng(20)
        m = rng.standard_normal((50, 7)).astype(np.float32)
        a = knn(m, k=5, block_size=16, workers=2)
        b = knn(m, k=5, block_size=16, workers=4)
        for x, y in zip(a, b):
            assert np.array_equal(x.ids, y.ids)
            assert np.array_equal(x.distances, y.distances)

    def test_query_subset(self):
        rng = np.random.default_rng(6)
        m = rng.standard_normal((15, 3)).astype(np.float32)
        all_sets = {ns.query_id: ns for ns in knn(m, k=3)}
        subset = knn(m, queries=[4, 9], k=3)
        for ns in subset:
            assert np.array_equal(ns.ids, all_sets[ns.query_id].ids)


class TestDiversity:
    def test_isolated_clusters_mean_one(self):
        rng = np.random.default_rng(7)
        m, labels = clustered_matrix(4, 40, 4, rng)
        stats, mean = neighbor_diversity(m, labels, k=30)
        assert mean == 1.0
        assert all(s.distinct_categories == 1 for s in stats)

    def test_round_robin_mean_eight(self):
        m = ring_matrix(160)
        labels = [f"S{i % 8}" for i in range(160)]
        stats, mean = neighbor_diversity(m, labels, k=50)
        assert mean == 8.0

    def test_histogram_sums_to_k(self):
        rng = np.random.default_rng(8)
        m = rng.standard_normal((40, 5)).astype(np.float32)
        labels = [f"C{i % 3}" for i in range(40)]
        stats, _ = neighbor_diversity(m, labels, k=11)
        for s in stats:
            assert sum(s.histogram.values()) == 11

    def test_sampling_is_seeded(self):
        rng = np.random.default_rng(9)
        m = rng.standard_normal((50, 4)).astype(np.float32)
        labels = ["A"] * 50
        s1, _ = neighbor_diversity(m, labels, k=5, sample=0.3, seed=123)
        s2, _ = neighbor_diversity(m, labels, k=5, sample=0.3, seed=123)
        assert [s.query_id for s in s1] == [s.query_id for s in s2]
        s3, _ = neighbor_diversity(m, labels, k=5, sample=0.3, seed=124)
        assert [s.query_id for s in s1] != [s.query_id for s in s3]

    def test_label_length_checked(self):
        with pytest.raises(ShapeError):
            neighbor_diversity(np.eye(4, dtype=np.float32), ["A"], k=2)


class TestBreakdown:
    def test_pure_clusters_identity(self):
        rng = np.random.default_rng(10)
        m, labels = clustered_matrix(3, 30, 4, rng)
        bd = neighbor_breakdown(m, labels, k=20)
        assert bd.row_labels == ["C0", "C1", "C2"]
        assert np.allclose(bd.matrix, np.eye(3))

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(12)
        m = rng.standard_normal((60, 6)).astype(np.float32)
        labels = [f"C{i % 4}" for i in range(60)]
        bd = neighbor_breakdown(m, labels, k=9)
        assert np.allclose(bd.matrix.sum(axis=1), 1.0, atol=1e-9)

    def test_merged_categories_split_in_proportion(self):
        # one tight cluster, 10 rows labeled X and 20 labeled Y;
        # with k=29 every query sees all other members, so the mass
        # split is exactly the member proportion.
        rng = np.random.default_rng(13)
        base = rng.standard_normal(5)
        m = (base + 0.01 * rng.standard_normal((30, 5))).astype(np.float32)
        labels = ["X"] * 10 + ["Y"] * 20
        bd = neighbor_breakdown(m, labels, k=29)
        x_row = bd.matrix[bd.row_labels.index("X")]
        y_row = bd.matrix[bd.row_labels.index("Y")]
        cols = {c: j for j, c in enumerate(bd.col_labels)}
        assert x_row[cols["X"]] == pytest.approx(9 / 29)
        assert x_row[cols["Y"]] == pytest.approx(20 / 29)
        assert y_row[cols["X"]] == pytest.approx(10 / 29)
        assert y_row[cols["Y"]] == pytest.approx(19 / 29)

    def test_unknown_category_rejected(self):
        with pytest.raises(ArgumentError):
            neighbor_breakdown(
                np.eye(4, dtype=np.float32), ["A"] * 4, k=2, for_categories=["B"]
            )


class TestOverlap:
    def test_identical_matrices_full_overlap(self):
        rng = np.random.default_rng(14)
        m = rng.standard_normal((40, 6)).astype(np.float32)
        stats, mean = neighbor_overlap(m, m.copy(), k=10)
        assert mean == 10.0
        assert all(s.common == 10 for s in stats)

    def test_rotation_preserves_overlap(self):
        rng = np.random.default_rng(15)
        m = rng.standard_normal((40, 8))
        q = random_orthogonal(8, rng)
        _, mean = neighbor_overlap(m, m @ q, k=10)
        assert mean == 10.0

    def test_symmetry(self):
        rng = np.random.default_rng(16)
        a = rng.standard_normal((30, 5)).astype(np.float32)
        b = rng.standard_normal((30, 5)).astype(np.float32)
        sa, _ = neighbor_overlap(a, b, k=6)
        sb, _ = neighbor_overlap(b, a, k=6)
        assert [s.common for s in sa] == [s.common for s in sb]

    def test_row_mismatch(self):
        with pytest.raises(ShapeError):
            neighbor_overlap(
                np.eye(4, dtype=np.float32), np.eye(5, dtype=np.float32), k=2
            )

    def test_alignment_labels_and_length_check(self):
        a = Vocabulary(["a", "b", "c"], model_name="a")
        b = Vocabulary(["c", "a", "b"], model_name="b")
        alignment = align(a, b)
        rng = np.random.default_rng(17)
        ma = rng.standard_normal((3, 4)).astype(np.float32)
        stats, _ = neighbor_overlap(ma, ma, alignment, k=1)
        assert [s.token for s in stats] == ["a", "b", "c"]
        with pytest.raises(ShapeError):
            neighbor_overlap(
                rng.standard_normal((4, 4)).astype(np.float32),
                rng.standard_normal((4, 4)).astype(np.float32),
                alignment,
                k=1,
            )

    def test_random_overlap_near_hypergeometric_expectation(self):
        # E|N_a ∩ N_b| = k^2/(V-1) for independent matrices
        v, k = 300, 10
        means = []
        for seed in range(8):
            rng = np.random.default_rng(seed)
            a = rng.standard_normal((v, 16))
            b = rng.standard_normal((v, 16))
            _, mean = neighbor_overlap(a, b, k=k)
            means.append(mean)
        expectation = k * k / (v - 1)
        grand = np.mean(means)
        spread = np.std(means, ddof=1) / np.sqrt(len(means))
        assert abs(grand - expectation) < max(4 * spread, 0.1)


class TestExportGraph:
    def test_edge_count_and_determinism(self, tmp_path):
        rng = np.random.default_rng(18)
        m = rng.standard_normal((10, 4)).astype(np.float32)
        sets = knn(m, queries=[0], k=2)
        p1 = tmp_path / "g1.csv"
        p2 = tmp_path / "g2.csv"
        export_neighbor_graph(sets, p1)
        export_neighbor_graph(sets, p2)
        lines = p1.read_text().strip().splitlines()
        assert lines[0] == "src,dst,distance"
        assert len(lines) == 1 + 2
        assert p1.read_bytes() == p2.read_bytes()

    def test_no_self_edges(self, tmp_path):
        rng = np.random.default_rng(19)
        m = rng.standard_normal((12, 3)).astype(np.float32)
        path = tmp_path / "g.csv"
        export_neighbor_graph(knn(m, k=4), path)
        for line in path.read_text().strip().splitlines()[1:]:
            src, dst, _ = line.split(",")
            assert src != dst
