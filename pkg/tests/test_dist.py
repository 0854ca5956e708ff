"""Distance operator tests: frozen hand-checked values, oracle agreement,
and the order/invariance properties the operators must satisfy."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mibrv import (
    Bag,
    DistParams,
    OperatorId,
    bar_operator,
    cross_distance_matrix,
    directed_hausdorff,
    euclidean,
    operator_table,
    oracle_bar_operator,
    symmetric_hausdorff,
)
from mibrv.errors import DimMismatch, EmptyBag

from conftest import make_bag, random_bag

# the worked pair used throughout: row dists {0,4} from (0,0), {3,5} from (3,0)
A = make_bag([[0.0, 0.0], [3.0, 0.0]], "A")
B = make_bag([[0.0, 0.0], [0.0, 4.0]], "B")


class TestEuclidean:
    def test_three_four_five(self):
        assert euclidean([0.0, 0.0], [3.0, 4.0]) == 5.0

    def test_identity(self):
        x = [1.7, -2.2, 0.4]
        assert euclidean(x, x) == 0.0

    def test_sqrt14(self):
        # direct arithmetic: sqrt(1 + 4 + 9)
        assert euclidean([1, 1, 1], [2, 3, 4]) == pytest.approx(math.sqrt(14), abs=1e-15)

    def test_symmetry(self, rng):
        a, b = rng.uniform(-5, 5, (2, 7))
        assert euclidean(a, b) == euclidean(b, a)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            euclidean([1.0, 2.0], [1.0, 2.0, 3.0])


class TestCrossDistanceMatrix:
    def test_hand_checked(self):
        assert cross_distance_matrix(A, B).tolist() == [[0.0, 4.0], [3.0, 5.0]]

    def test_singleton_identity(self):
        x = make_bag([[2.0, 2.0]], "x")
        assert cross_distance_matrix(x, x).tolist() == [[0.0]]

    def test_shape(self, rng):
        a = make_bag(rng.normal(size=(5, 3)), "a")
        b = make_bag(rng.normal(size=(7, 3)), "b")
        assert cross_distance_matrix(a, b).shape == (5, 7)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            cross_distance_matrix(A, make_bag([[1.0, 2.0, 3.0]], "c"))


class TestHausdorff:
    def test_directed_hand_checked(self):
        assert directed_hausdorff(A, B) == 3.0

    def test_subset_gives_zero(self):
        sub = make_bag([[0.0, 0.0]], "sub")
        assert directed_hausdorff(sub, B) == 0.0

    def test_singletons(self):
        a = make_bag([[1.0, 0.0]], "a")
        b = make_bag([[4.0, 4.0]], "b")
        assert directed_hausdorff(a, b) == 5.0
        assert symmetric_hausdorff(a, b) == 5.0

    def test_symmetric_hand_checked(self):
        assert symmetric_hausdorff(A, B) == 4.0
        assert symmetric_hausdorff(B, A) == 4.0

    def test_symmetric_identical_bags(self):
        assert symmetric_hausdorff(A, A) == 0.0

    def test_directed_equals_op3_k1(self, rng):
        for i in range(20):
            a = random_bag(rng, "a", 4)
            b = random_bag(rng, "b", 4)
            assert directed_hausdorff(a, b) == bar_operator(OperatorId.MAX_MIN, 1, a, b)


# frozen from the independent oracle (sorted-row brute force) on the worked pair
K1_EXPECTED = {1: 0.0, 2: 1.5, 3: 3.0, 4: 4.0, 5: 4.5, 6: 5.0}


class TestBarOperator:
    @pytest.mark.parametrize("op,expected", sorted(K1_EXPECTED.items()))
    def test_k1_hand_checked(self, op, expected):
        assert bar_operator(op, 1, A, B) == expected
        assert oracle_bar_operator(op, 1, A, B) == expected

    def test_op3_k2(self):
        # row means of the 2 smallest: {2, 4}; max is 4
        assert bar_operator(3, 2, A, B) == 4.0
        assert oracle_bar_operator(3, 2, A, B) == 4.0

    def test_identical_bags_inner_min_k1_zero(self):
        for op in (OperatorId.MIN_MIN, OperatorId.MEAN_MIN, OperatorId.MAX_MIN):
            assert bar_operator(op, 1, A, A) == 0.0

    def test_k_clamped_to_reference_size(self):
        # k beyond |B| averages over all available neighbors
        assert bar_operator(2, 99, A, B) == oracle_bar_operator(2, 99, A, B)
        assert bar_operator(2, 99, A, B) == bar_operator(2, 2, A, B)

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            bar_operator(1, 0, A, B)

    def test_empty_bag(self):
        empty = Bag("e", np.empty((0, 2)))
        with pytest.raises(EmptyBag):
            bar_operator(1, 1, empty, B)

    def test_oracle_agreement_randomized(self, rng):
        worst = 0.0
        for _ in range(60):
            d = int(rng.integers(1, 6))
            a = random_bag(rng, "a", d)
            b = random_bag(rng, "b", d)
            for k in (1, 2, 3, 4):
                table = operator_table(a, b, k)
                for op in OperatorId:
                    worst = max(worst, abs(table[op - 1] - oracle_bar_operator(op, k, a, b)))
        assert worst <= 1e-12


class TestOperatorProperties:
    def test_permutation_invariance_exact(self, rng):
        for _ in range(30):
            d = int(rng.integers(1, 5))
            a = random_bag(rng, "a", d, max_instances=7)
            b = random_bag(rng, "b", d, max_instances=7)
            ap = Bag("a", a.features[rng.permutation(a.n_instances)])
            bp = Bag("b", b.features[rng.permutation(b.n_instances)])
            for k in (1, 2, 3):
                assert np.array_equal(operator_table(a, b, k), operator_table(ap, bp, k))

    def test_outer_and_inner_ordering(self, rng):
        for _ in range(40):
            a = random_bag(rng, "a", 3)
            b = random_bag(rng, "b", 3)
            for k in (1, 2, 3, 4):
                t = operator_table(a, b, k)
                assert t[0] <= t[1] <= t[2]
                assert t[3] <= t[4] <= t[5]
                for i in range(3):
                    assert t[i] <= t[i + 3]

    def test_k_monotonicity(self, rng):
        for _ in range(25):
            a = random_bag(rng, "a", 3)
            b = random_bag(rng, "b", 3)
            prev_min = [bar_operator(op, 1, a, b) for op in (1, 2, 3)]
            prev_max = [bar_operator(op, 1, a, b) for op in (4, 5, 6)]
            for k in (2, 3, 4, 5):
                cur_min = [bar_operator(op, k, a, b) for op in (1, 2, 3)]
                cur_max = [bar_operator(op, k, a, b) for op in (4, 5, 6)]
                for prev, cur in zip(prev_min, cur_min):
                    assert cur >= prev - 1e-12
                for prev, cur in zip(prev_max, cur_max):
                    assert cur <= prev + 1e-12
                prev_min, prev_max = cur_min, cur_max

    def test_extremes_symmetric_at_k1(self, rng):
        for _ in range(20):
            a = random_bag(rng, "a", 4)
            b = random_bag(rng, "b", 4)
            assert bar_operator(1, 1, a, b) == bar_operator(1, 1, b, a)
            assert bar_operator(6, 1, a, b) == bar_operator(6, 1, b, a)

    @given(
        scale=st.floats(min_value=0.0, max_value=50.0, allow_nan=False),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_scaling_covariance(self, scale, seed):
        r = np.random.default_rng(seed)
        a = random_bag(r, "a", 3, max_instances=5)
        b = random_bag(r, "b", 3, max_instances=5)
        sa = Bag("a", a.features * scale)
        sb = Bag("b", b.features * scale)
        for op in (1, 3, 5):
            base = bar_operator(op, 2, a, b)
            scaled = bar_operator(op, 2, sa, sb)
            assert scaled == pytest.approx(scale * base, rel=1e-10, abs=1e-10)

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_translation_invariance(self, seed):
        r = np.random.default_rng(seed)
        a = random_bag(r, "a", 3, max_instances=5)
        b = random_bag(r, "b", 3, max_instances=5)
        shift = r.uniform(-100, 100, 3)
        ta = Bag("a", a.features + shift)
        tb = Bag("b", b.features + shift)
        for op in (2, 4, 6):
            base = bar_operator(op, 2, a, b)
            moved = bar_operator(op, 2, ta, tb)
            assert moved == pytest.approx(base, rel=1e-9, abs=1e-9)

    def test_symmetric_hausdorff_dominates(self, rng):
        for _ in range(15):
            a = random_bag(rng, "a", 3)
            b = random_bag(rng, "b", 3)
            h_ab = directed_hausdorff(a, b)
            h_ba = directed_hausdorff(b, a)
            assert symmetric_hausdorff(a, b) == max(h_ab, h_ba)


class TestOperatorId:
    def test_canonical_numbering(self):
        expected = {
            1: ("min", "min"), 2: ("mean", "min"), 3: ("max", "min"),
            4: ("min", "max"), 5: ("mean", "max"), 6: ("max", "max"),
        }
        for op in OperatorId:
            assert (op.outer, op.inner) == expected[op.value]

    def test_exactly_six(self):
        assert len(OperatorId) == 6


class TestDistParams:
    def test_defaults(self):
        params = DistParams()
        assert params.k == 2
        assert params.operators == tuple(OperatorId)

    def test_coerces_ints_and_keeps_order(self):
        params = DistParams(k=1, operators=(5, 2, 4))
        assert params.operators == (OperatorId.MEAN_MAX, OperatorId.MEAN_MIN, OperatorId.MIN_MAX)

    @pytest.mark.parametrize("bad", [{"k": 0}, {"operators": ()}, {"operators": (1, 1)},
                                     {"operators": (7,)}])
    def test_rejects_bad_values(self, bad):
        with pytest.raises(ValueError):
            DistParams(**bad)
