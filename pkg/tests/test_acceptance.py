"""Acceptance suite: one test per release criterion, one printed verdict each.

Run `pytest tests/test_acceptance.py -s` to see the verdict lines as
they happen. Tolerances are fixed here and must not be loosened to
make a failing criterion pass.
"""

import json
import os
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

import embedgeo
from embedgeo import (
    FormatError,
    UnsupportedLayout,
    canonical_angles,
    categorize_token,
    knn,
    neighbor_diversity,
    neighbor_overlap,
    train_logreg,
)
from embedgeo.npyio import read_matrix, write_matrix
from embedgeo.probe import ProbeTask, _loss_grad, cross_validate
from oracles import (
    clustered_matrix,
    naive_knn,
    numeric_gradient,
    random_orthogonal,
    ring_matrix,
)

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL", flush=True)
        raise
    print(f"[ACCEPTANCE] {name}: PASS", flush=True)


def test_rotation_recovery():
    with criterion("rotation recovery (n=2000, d=128)"):
        start = time.perf_counter()
        rng = np.random.default_rng(1234)
        a = rng.standard_normal((2000, 128))
        q = random_orthogonal(128, rng)
        spec = canonical_angles(a, a @ q)
        elapsed = time.perf_counter() - start
        assert abs(spec.cos_smallest_angle - 1.0) <= 1e-6
        assert spec.sigma.min() >= 1.0 - 1e-5
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_random_baseline_envelope():
    with criterion("random-baseline envelope (n=5000, d=64, 20 seeds)"):
        envelope = json.loads((DATA / "angle_envelope.json").read_text())
        lo, hi = envelope["envelope_lo"], envelope["envelope_hi"]
        n, d = envelope["n_rows"], envelope["n_cols"]
        for seed in range(20):
            rng = np.random.default_rng(50_000 + seed)
            s1 = canonical_angles(
                rng.standard_normal((n, d)), rng.standard_normal((n, d))
            ).cos_smallest_angle
            assert lo <= s1 <= hi, f"seed {seed}: {s1} outside [{lo}, {hi}]"


def test_knn_exactness_200_instances():
    with criterion("k-NN exactness vs naive oracle (200 instances)"):
        start = time.perf_counter()
        rng = np.random.default_rng(777)
        for trial in range(200):
            v = int(rng.integers(33, 513))
            d = int(rng.integers(2, 65))
            k = int(rng.integers(1, min(33, v)))
            m = rng.standard_normal((v, d)).astype(np.float32)
            got = knn(m, k=k)
            expected = naive_knn(m, k)
            for ns, (ids, dists) in zip(got, expected):
                assert np.array_equal(ns.ids, ids), f"trial {trial} query {ns.query_id}"
                assert np.abs(ns.distances - dists).max() <= 1e-6
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"took {elapsed:.2f}s"


def test_overlap_calibration():
    with criterion("overlap calibration (rotation exact, random vs expectation)"):
        v, k = 1000, 20
        rng = np.random.default_rng(99)
        a = rng.standard_normal((v, 32))
        q = random_orthogonal(32, rng)
        _, mean_rot = neighbor_overlap(a, a @ q, k=k)
        assert mean_rot == float(k)

        expectation = k * k / (v - 1)
        seed_means = []
        for seed in range(50):
            srng = np.random.default_rng(3000 + seed)
            x = srng.standard_normal((v, 32))
            y = srng.standard_normal((v, 32))
            _, mean = neighbor_overlap(x, y, k=k)
            seed_means.append(mean)
        seed_means = np.array(seed_means)
        grand = seed_means.mean()
        sigma_of_mean = seed_means.std(ddof=1) / np.sqrt(len(seed_means))
        assert abs(grand - expectation) <= 3 * sigma_of_mean, (
            f"grand mean {grand:.4f} vs expectation {expectation:.4f} "
            f"(3 sigma = {3 * sigma_of_mean:.4f})"
        )


def test_probe_calibration():
    with criterion("probe calibration (6-sigma, permuted labels, gradient)"):
        rng = np.random.default_rng(100)
        d = 16
        pos = rng.normal(size=(100, d))
        neg = rng.normal(size=(100, d))
        pos[:, 0] += 3.0
        neg[:, 0] -= 3.0
        X = np.vstack([pos, neg]).astype(np.float32)
        task = ProbeTask("SEP", np.arange(100), np.arange(100, 200), seed=0)
        assert cross_validate(task, X).mean_accuracy >= 0.99

        accs = []
        for seed in range(3):
            prng = np.random.default_rng(1000 + seed)
            Xp = np.vstack(
                [prng.normal(+2, 1, size=(500, 8)), prng.normal(-2, 1, size=(500, 8))]
            ).astype(np.float32)
            perm = prng.permutation(1000)
            ptask = ProbeTask("PERM", perm[:500], perm[500:], seed=seed)
            accs.append(cross_validate(ptask, Xp).mean_accuracy)
        assert abs(float(np.mean(accs)) - 0.5) <= 0.05

        grng = np.random.default_rng(0)
        for _ in range(100):
            Xg = grng.standard_normal((20, 8))
            y = (grng.random(20) > 0.5).astype(float)
            if y.min() == y.max():
                y[0] = 1 - y[0]
            w = grng.standard_normal(8)
            b = float(grng.standard_normal())
            l2 = float(10 ** grng.uniform(-5, -1))
            _, gw, gb = _loss_grad(Xg, y, w, b, l2)
            analytic = np.concatenate([gw, [gb]])
            theta = np.concatenate([w, [b]])
            numeric = numeric_gradient(
                lambda t: _loss_grad(Xg, y, t[:8], t[8], l2)[0], theta
            )
            rel = np.linalg.norm(numeric - analytic) / np.linalg.norm(numeric)
            assert rel <= 1e-5


def test_diversity_oracle():
    with criterion("diversity oracle (clusters 1.0, round-robin 8.0)"):
        rng = np.random.default_rng(7)
        m, labels = clustered_matrix(4, 40, 4, rng)
        _, mean = neighbor_diversity(m, labels, k=30)
        assert mean == 1.0

        ring = ring_matrix(160)
        labels8 = [f"S{i % 8}" for i in range(160)]
        _, mean8 = neighbor_diversity(ring, labels8, k=50)
        assert mean8 == 8.0


def test_categorizer_conformance():
    with criterion("categorizer conformance (worked example + 10k fuzz)"):
        assert categorize_token("doesn't") == "LATIN"

        pools = [
            "abcdefghijklmnopqrstuvwxyz",
            "абвгдежзийклмн",
            "あいうえおかきくけこ",
            "アイウエオカキクケコ",
            "漢字日本語中文",
            "한국어조선말",
            "0123456789",
            "!?.,;:()[]",
            "+<=>|~$%",
            "ँंः़ा",
            "   ",
        ]
        alphabet = "".join(pools)
        rng = np.random.default_rng(2024)
        inventory = set(embedgeo.known_categories())
        for _ in range(10_000):
            length = int(rng.integers(1, 9))
            chars = rng.integers(0, len(alphabet), size=length)
            token = "".join(alphabet[c] for c in chars)
            cat = categorize_token(token)
            assert cat in inventory
            assert categorize_token("▁" + token) == cat


def test_format_fidelity(tmp_path):
    with criterion("format fidelity (100 round-trips, malformed rejected)"):
        rng = np.random.default_rng(31337)
        for i in range(100):
            m = rng.standard_normal(
                (int(rng.integers(1, 64)), int(rng.integers(1, 32)))
            ).astype(np.float32)
            path = tmp_path / f"rt{i}.npy"
            write_matrix(path, m)
            back = read_matrix(path)
            assert back.tobytes() == m.tobytes()
            assert back.shape == m.shape

        bad_magic = tmp_path / "bad_magic.npy"
        bad_magic.write_bytes(b"PK\x03\x04" + bytes(128))
        with pytest.raises(FormatError):
            read_matrix(bad_magic)

        fortran = tmp_path / "fortran.npy"
        np.save(fortran, np.asfortranarray(np.ones((3, 4), dtype=np.float32)))
        with pytest.raises(UnsupportedLayout):
            read_matrix(fortran)


def test_paper_scale_reproduction():
    """Optional: needs exported real embeddings (multi-GB downloads)."""
    root = os.environ.get("EMBEDGEO_REAL_DATA")
    if not root:
        pytest.skip(
            "set EMBEDGEO_REAL_DATA to a directory of exported model files "
            "(reported, not gating)"
        )
    # Expected layout: <root>/<model>/matrix.npy + vocab.json for
    # mt5-xl, xlm-r-xl, xlm-r-xxl. Reported, not gating.
    from embedgeo import align, load_matrix, load_vocab, overlap_stats, submatrix

    root = Path(root)
    mt5_v = load_vocab(root / "mt5-xl" / "vocab.json")
    xlr_v = load_vocab(root / "xlm-r-xl" / "vocab.json")
    stats = overlap_stats(mt5_v, xlr_v)
    print("non-LATIN pct_min:", stats["non_latin"]["pct_min"])

    mt5_m = load_matrix(root / "mt5-xl" / "matrix.npy")
    xlr_m = load_matrix(root / "xlm-r-xl" / "matrix.npy")
    alignment = align(mt5_v, xlr_v)
    a = submatrix(mt5_m, alignment.rows_a)
    b = submatrix(xlr_m, alignment.rows_b)
    cats = [categorize_token(t) for t in alignment.tokens]
    _, div_mt5 = neighbor_diversity(a, cats, k=50)
    _, div_xlr = neighbor_diversity(b, cats, k=50)
    print("diversity means:", div_mt5, div_xlr)
    spec = canonical_angles(a, b)
    print("cos smallest angle:", spec.cos_smallest_angle)
