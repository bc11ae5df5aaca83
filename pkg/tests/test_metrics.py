import numpy as np
import pytest

from fabba.metrics import adjusted_rand, difference, dtw, euclid, mse, rates

from helpers import exhaustive_dtw, pair_counting_ari


class TestEuclidMse:
    def test_identical_zero(self):
        x = np.arange(10.0)
        assert euclid(x, x) == 0.0
        assert mse(x, x) == 0.0

    def test_three_four_five(self):
        assert euclid([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
        assert mse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(12.5)

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=64)
        b = rng.normal(size=64)
        oracle = sum((x - y) ** 2 for x, y in zip(a, b))
        assert euclid(a, b) == pytest.approx(oracle**0.5, rel=1e-12)
        assert mse(a, b) == pytest.approx(oracle / 64, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            euclid([1.0], [1.0, 2.0])


class TestDtw:
    def test_identical_zero(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=50)
        assert dtw(x, x) == 0.0

    def test_single_points(self):
        assert dtw([0.0], [5.0]) == pytest.approx(5.0)

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            a = rng.normal(size=int(rng.integers(1, 6)))
            b = rng.normal(size=int(rng.integers(1, 6)))
            assert dtw(a, b) == pytest.approx(exhaustive_dtw(a, b), abs=1e-9)

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=30)
        b = rng.normal(size=45)
        assert dtw(a, b) == pytest.approx(dtw(b, a), rel=1e-12)

    def test_bounded_by_euclid(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = rng.normal(size=40)
            b = rng.normal(size=40)
            assert dtw(a, b) <= euclid(a, b) + 1e-12

    def test_empty(self):
        with pytest.raises(ValueError, match="empty"):
            dtw([], [1.0])


class TestDifference:
    def test_basic(self):
        assert list(difference([0.0, 1.0, 3.0]).values) == [1.0, 2.0]

    def test_constant_gives_zeros(self):
        assert np.all(difference(np.full(5, 2.0)).values == 0.0)

    def test_removes_affine_trend(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=100)
        t = np.arange(100.0)
        a, b = 0.7, -2.0
        d_plain = difference(x).values
        d_trend = difference(x + a * t + b).values
        assert np.allclose(d_trend - d_plain, a)

    def test_too_short(self):
        with pytest.raises(ValueError):
            difference([1.0])


class TestAdjustedRand:
    def test_identical_partitions(self):
        assert adjusted_rand([0, 0, 1, 1], [5, 5, 9, 9]) == 1.0

    def test_singletons_vs_one_cluster(self):
        assert adjusted_rand([0, 1, 2, 3], [0, 0, 0, 0]) == pytest.approx(0.0)

    def test_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(60):
            a = rng.integers(0, 4, size=10)
            b = rng.integers(0, 4, size=10)
            assert adjusted_rand(a, b) == pytest.approx(pair_counting_ari(a, b), abs=1e-12)

    def test_relabel_invariance(self):
        rng = np.random.default_rng(7)
        a = rng.integers(0, 3, size=30)
        b = rng.integers(0, 3, size=30)
        remap = {0: 7, 1: 2, 2: 11}
        a2 = np.array([remap[v] for v in a])
        assert adjusted_rand(a, b) == pytest.approx(adjusted_rand(a2, b), abs=1e-14)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            adjusted_rand([0, 1], [0, 1, 2])


class TestRates:
    def test_degenerate(self):
        assert rates(10, 10, 10) == (1.0, 1.0)

    def test_basic(self):
        assert rates(100, 1000, 20) == (0.1, 0.2)

    def test_validation(self):
        with pytest.raises(ValueError):
            rates(0, 10, 1)
        with pytest.raises(ValueError):
            rates(5, 10, 6)
        with pytest.raises(ValueError):
            rates(11, 10, 1)
