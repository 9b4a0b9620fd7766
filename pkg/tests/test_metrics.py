"""Unit tests for raw correlation and reciprocity measures."""

import numpy as np
import pytest

from multinet import (
    UndefinedStatisticError,
    binary_reciprocity,
    cross_product_stats,
    local_stats,
    pearson_binary_pair,
    pearson_pair,
    weighted_reciprocity_min,
    weighted_reciprocity_pearson,
)


def two_node(w12, w21):
    return np.array([[0.0, w12], [w21, 0.0]])


def random_layer(seed, n=6, density=0.6):
    rng = np.random.default_rng(seed)
    w = rng.random((n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(w, 0)
    return w


class TestPearsonPair:
    def test_self_synergic_is_one(self):
        w = random_layer(0)
        assert pearson_pair(w, w, "syn") == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_reverse_is_one(self):
        w = random_layer(1)
        w = w + w.T
        assert pearson_pair(w, w, "rev") == pytest.approx(1.0, abs=1e-12)

    def test_anti_aligned_two_node(self):
        # A sends 1->2 only, B sends 2->1 only: perfectly aligned under
        # transposition.
        assert pearson_pair(two_node(1, 0), two_node(0, 1), "rev") == pytest.approx(1.0)

    def test_reverse_equals_syn_of_transpose(self):
        a = random_layer(2)
        b = random_layer(3)
        assert pearson_pair(a, b, "rev") == pytest.approx(
            pearson_pair(a, b.T, "syn"), abs=1e-12)

    def test_zero_variance_raises(self):
        with pytest.raises(UndefinedStatisticError):
            pearson_pair(np.zeros((3, 3)), random_layer(4, n=3))

    def test_range(self):
        for seed in range(5):
            v = pearson_pair(random_layer(seed), random_layer(seed + 50))
            assert -1.0 <= v <= 1.0


class TestPearsonBinaryPair:
    def test_identical_sparse(self):
        w = random_layer(5)
        assert pearson_binary_pair(w, w) == pytest.approx(1.0, abs=1e-12)

    def test_complementary_patterns(self):
        rng = np.random.default_rng(6)
        off = ~np.eye(6, dtype=bool)
        a = np.where(off, (rng.random((6, 6)) < 0.5).astype(float), 0.0)
        b = np.where(off, 1.0 - a, 0.0)
        assert pearson_binary_pair(a, b) == pytest.approx(-1.0, abs=1e-12)

    def test_complete_layer_raises(self):
        complete = np.ones((4, 4)) - np.eye(4)
        with pytest.raises(UndefinedStatisticError, match="complete"):
            pearson_binary_pair(complete, random_layer(7, n=4))

    def test_empty_layer_raises(self):
        with pytest.raises(UndefinedStatisticError, match="empty"):
            pearson_binary_pair(random_layer(8, n=4), np.zeros((4, 4)))


class TestBinaryReciprocity:
    def test_hand_enumeration(self):
        # links 1->2, 2->1, 2->3: r_b = 2/3, c = 1/2, rho = 1/3
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = w[1, 2] = 1.0
        r_b, c, rho_b = binary_reciprocity(w)
        assert r_b == pytest.approx(2 / 3)
        assert c == pytest.approx(1 / 2)
        assert rho_b == pytest.approx(1 / 3)

    def test_symmetric(self):
        w = random_layer(9)
        w = w + w.T
        r_b, _, rho_b = binary_reciprocity(w)
        assert r_b == 1.0
        assert rho_b == pytest.approx(1.0)

    def test_strictly_triangular(self):
        w = np.triu(np.ones((5, 5)), 1)
        r_b, c, rho_b = binary_reciprocity(w)
        assert r_b == 0.0
        assert rho_b == pytest.approx(-c / (1 - c), abs=1e-12)

    def test_complete_rho_undefined(self):
        w = np.ones((4, 4)) - np.eye(4)
        r_b, c, rho_b = binary_reciprocity(w)
        assert r_b == 1.0 and c == 1.0
        assert np.isnan(rho_b)

    def test_empty_raises(self):
        with pytest.raises(UndefinedStatisticError):
            binary_reciprocity(np.zeros((3, 3)))

    def test_matches_binary_reverse_pearson(self):
        # rho_b is by definition the Pearson correlation between a_ij and
        # a_ji; the closed form must agree with the generic implementation.
        for seed in range(10):
            w = random_layer(seed, n=8)
            if (w > 0).sum() == 0:
                continue
            _, c, rho_b = binary_reciprocity(w)
            if c in (0.0, 1.0):
                continue
            assert rho_b == pytest.approx(
                pearson_binary_pair(w, w, "rev"), abs=1e-12)


class TestWeightedReciprocity:
    def test_symmetric(self):
        w = random_layer(10)
        w = w + w.T
        r, _, rho = weighted_reciprocity_pearson(w)
        assert r == pytest.approx(1.0)
        assert rho == pytest.approx(1.0)

    def test_hand_two_node(self):
        r, _, _ = weighted_reciprocity_pearson(two_node(2, 1))
        assert r == pytest.approx(4 / 5)

    def test_one_directional(self):
        w = np.triu(random_layer(11), 1)
        r, _, _ = weighted_reciprocity_pearson(w)
        assert r == 0.0

    def test_all_zero_raises(self):
        with pytest.raises(UndefinedStatisticError):
            weighted_reciprocity_pearson(np.zeros((3, 3)))


class TestWeightedReciprocityMin:
    def test_symmetric(self):
        w = random_layer(12)
        w = w + w.T
        assert weighted_reciprocity_min(w) == pytest.approx(1.0)

    def test_hand_two_node(self):
        assert weighted_reciprocity_min(two_node(2, 1)) == pytest.approx(2 / 3)

    def test_one_directional(self):
        assert weighted_reciprocity_min(np.triu(random_layer(13), 1)) == 0.0

    def test_range(self):
        for seed in range(5):
            assert 0.0 <= weighted_reciprocity_min(random_layer(seed)) <= 1.0


class TestCrossProductStats:
    def test_hand_two_node(self):
        stats = cross_product_stats(two_node(2, 1), two_node(3, 4))
        assert stats.r == pytest.approx(11 / 21)
        assert stats.m == pytest.approx(10 / 21)
        assert stats.w_tot_a == 3 and stats.w_tot_b == 7

    def test_scale_invariance_spot(self):
        a, b = two_node(2, 1), two_node(3, 4)
        scaled = cross_product_stats(2 * a, 5 * b)
        plain = cross_product_stats(a, b)
        assert scaled.r == pytest.approx(plain.r, rel=1e-12)
        assert scaled.m == pytest.approx(plain.m, rel=1e-12)

    def test_one_directional_transpose_pair(self):
        a = np.triu(random_layer(14), 1)
        stats = cross_product_stats(a, a.T)
        assert stats.m == 0.0
        assert stats.r > 0.0

    def test_symmetry_of_r(self):
        a, b = random_layer(15), random_layer(16)
        assert cross_product_stats(a, b).r == pytest.approx(
            cross_product_stats(b, a).r, rel=1e-12)

    def test_zero_total_raises(self):
        with pytest.raises(UndefinedStatisticError):
            cross_product_stats(np.zeros((3, 3)), random_layer(17, n=3))

    def test_r_is_one_for_opposing_concentrated_layers(self):
        # r = 1 exactly when all of A sits on i->j and all of B on j->i;
        # the normalization is by global totals, so even a symmetric layer
        # against itself stays below 1 (a single balanced dyad gives 1/2).
        assert cross_product_stats(two_node(3, 0), two_node(0, 7)).r == 1.0
        a = two_node(3, 3)
        assert cross_product_stats(a, a).r == pytest.approx(0.5)


class TestLocalStats:
    def test_concentrated_dyad_scores_one(self):
        a = two_node(7, 0)
        b = two_node(0, 3)
        values = local_stats(a, b, "local_reciprocity").values
        assert values[0, 1] == pytest.approx(1.0)

    def test_hand_computation(self):
        # A: w12=2, w13=2 (s_out_1 = 4); B: w21=4, w31=4 (in-strength of 1 = 8)
        a = np.zeros((3, 3))
        a[0, 1] = a[0, 2] = 2.0
        b = np.zeros((3, 3))
        b[1, 0] = b[2, 0] = 4.0
        values = local_stats(a, b, "local_reciprocity").values
        assert values[0, 1] == pytest.approx(1 / 4)

    def test_zero_numerator(self):
        a = random_layer(18)
        b = random_layer(19)
        a[1, 2] = 0.0
        values = local_stats(a, b, "local_reciprocity").values
        assert values[1, 2] == 0.0

    def test_zero_strength_rows_nan(self):
        a = np.zeros((3, 3))
        a[0, 1] = 1.0
        b = random_layer(20, n=3)
        values = local_stats(a, b, "local_reciprocity").values
        assert np.isnan(values[1, 2]) and np.isnan(values[2, 0])

    def test_defined_entries_in_unit_interval(self):
        for seed in range(5):
            a, b = random_layer(seed), random_layer(seed + 30)
            for kind in ("local_reciprocity", "local_multiplexity"):
                values = local_stats(a, b, kind).values
                defined = values[~np.isnan(values)]
                assert np.all(defined >= 0.0) and np.all(defined <= 1.0)

    def test_direction_symmetry_bruteforce(self):
        # r_ij on (A, B) uses w^A_ij w^B_ji / (s_out^A_i s_in^B_i);
        # the same product normalized from j's side is r_ji on (B, A).
        for seed in range(5):
            a, b = random_layer(seed, n=5), random_layer(seed + 40, n=5)
            ab = local_stats(a, b, "local_reciprocity").values
            ba = local_stats(b, a, "local_reciprocity").values
            s_out_a, s_in_b = a.sum(axis=1), b.sum(axis=0)
            s_out_b, s_in_a = b.sum(axis=1), a.sum(axis=0)
            for i in range(5):
                for j in range(5):
                    if i == j or np.isnan(ab[i, j]) or np.isnan(ba[j, i]):
                        continue
                    lhs = ab[i, j] * s_out_a[i] * s_in_b[i]
                    rhs = ba[j, i] * s_out_b[j] * s_in_a[j]
                    assert lhs == pytest.approx(rhs, abs=1e-12)
