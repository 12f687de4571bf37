from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dendrocode.errors import DegenerateInputError, DomainError, NotUltrametricError
from dendrocode.hierarchy import (
    Dendrogram,
    DissimilarityMatrix,
    MergeNode,
    agglomerate,
    pairwise_distances,
    swap_children,
    terminal,
)
from dendrocode.ultrametric import (
    EQUILATERAL,
    ISOSCELES_SMALL_BASE,
    METRIC_ONLY,
    canonical_form,
    check_canonical_form,
    classify_triangle,
    cophenetic_matrix,
    generate_cloud,
    ultrametricity_coefficient,
    verify_ultrametric,
)

from conftest import random_tree
from oracles import (
    brute_ultrametric_ok,
    brute_violating_combinations,
    cophenetic_by_paths,
)
from reference import IRIS7, IRIS_LABELS7, REFERENCE_ULTRAMETRIC_7


def reference_tree_7() -> Dendrogram:
    """The 7-flower reference hierarchy, recovered from its own ultrametric
    table by single linkage (exact for an ultrametric input)."""
    m = DissimilarityMatrix(REFERENCE_ULTRAMETRIC_7, IRIS_LABELS7)
    return agglomerate(m, "single")


class TestCophenetic:
    def test_reference_table_reproduced_from_its_tree(self):
        coph = cophenetic_matrix(reference_tree_7())
        assert np.allclose(coph.values, REFERENCE_ULTRAMETRIC_7, atol=1e-7)
        labels = list(IRIS_LABELS7)
        i3, i4, i1, i5 = labels.index("iris3"), labels.index("iris4"), 0, 4
        assert coph.values[i3, i4] == pytest.approx(0.2449490, abs=1e-7)
        assert coph.values[i1, i5] == pytest.approx(1.1661904, abs=1e-7)

    def test_two_leaf_tree(self):
        tree = Dendrogram(("a", "b"), (MergeNode(1, 3.5, terminal(0), terminal(1)),))
        assert np.array_equal(cophenetic_matrix(tree).values, [[0.0, 3.5], [3.5, 0.0]])

    def test_matches_pairwise_lca_oracle(self, rng):
        for _ in range(5):
            tree = random_tree(rng.randrange(3, 12), rng)
            assert np.array_equal(
                cophenetic_matrix(tree).values, np.array(cophenetic_by_paths(tree))
            )

    def test_monotone_tree_output_is_exactly_ultrametric(self, rng):
        for _ in range(20):
            tree = random_tree(rng.randrange(3, 16), rng, heights="monotone")
            assert verify_ultrametric(cophenetic_matrix(tree), 0.0) == []

    def test_agglomerate_output_is_exactly_ultrametric(self, rng):
        for linkage in ("single", "complete", "ward"):
            data = np.array([[rng.uniform(0, 3) for _ in range(3)] for _ in range(12)])
            tree = agglomerate(pairwise_distances(data), linkage)
            assert verify_ultrametric(cophenetic_matrix(tree), 0.0) == []


class TestVerifyUltrametric:
    def test_reference_table_passes(self):
        m = DissimilarityMatrix(REFERENCE_ULTRAMETRIC_7, IRIS_LABELS7)
        assert verify_ultrametric(m, 0.0) == []

    def test_raw_iris_distances_fail(self):
        m = pairwise_distances(IRIS7)
        violations = verify_ultrametric(m, 1e-9)
        assert violations
        # cross-check the set of violating combinations against brute force
        brute = brute_violating_combinations(m.values.tolist(), 1e-9)
        got = {tuple(sorted((i, j, k))) for i, j, k, _, _ in violations}
        assert got == set(brute)

    def test_small_matrices_trivially_pass(self):
        assert verify_ultrametric(DissimilarityMatrix(np.zeros((1, 1)))) == []
        two = DissimilarityMatrix(np.array([[0.0, 2.0], [2.0, 0.0]]))
        assert verify_ultrametric(two) == []

    def test_violation_reports_lhs_rhs(self):
        values = np.array(
            [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]
        )
        violations = verify_ultrametric(DissimilarityMatrix(values), 0.0)
        assert violations == [(0, 1, 2, 5.0, 1.0)]

    def test_tolerance_suppresses_small_violations(self):
        values = np.array(
            [[0.0, 1.0, 1.0 + 1e-12], [1.0, 0.0, 1.0], [1.0 + 1e-12, 1.0, 0.0]]
        )
        m = DissimilarityMatrix(values)
        assert verify_ultrametric(m, 1e-9) == []
        assert verify_ultrametric(m, 0.0) != []


class TestCanonicalForm:
    def test_reference_table_is_already_canonical(self):
        assert check_canonical_form(REFERENCE_ULTRAMETRIC_7) is None

    def test_shuffle_then_restore(self, rng):
        m = DissimilarityMatrix(REFERENCE_ULTRAMETRIC_7, IRIS_LABELS7)
        _, canon = canonical_form(m)
        assert check_canonical_form(canon.values) is None
        for _ in range(10):
            perm = list(range(7))
            rng.shuffle(perm)
            idx = np.asarray(perm)
            shuffled = DissimilarityMatrix(
                REFERENCE_ULTRAMETRIC_7[np.ix_(idx, idx)],
                tuple(IRIS_LABELS7[i] for i in perm),
            )
            _, restored = canonical_form(shuffled)
            assert check_canonical_form(restored.values) is None
            assert np.array_equal(restored.values, canon.values)

    def test_two_by_two_identity(self):
        m = DissimilarityMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        perm, out = canonical_form(m)
        assert perm == (0, 1)
        assert np.array_equal(out.values, m.values)

    def test_random_cophenetic_matrices_canonicalize(self, rng):
        for _ in range(10):
            tree = random_tree(rng.randrange(3, 14), rng, heights="monotone")
            m = cophenetic_matrix(tree)
            _, canon = canonical_form(m)
            assert check_canonical_form(canon.values) is None

    def test_non_ultrametric_rejected_naming_a_triple(self):
        m = pairwise_distances(IRIS7)
        with pytest.raises(NotUltrametricError, match=r"d\(\d+,\d+\)"):
            canonical_form(m)


class TestClassifyTriangle:
    def test_reference_isosceles(self):
        assert classify_triangle(3.5, 3.5, 1.0) == ISOSCELES_SMALL_BASE

    def test_equilateral(self):
        assert classify_triangle(2, 2, 2) == EQUILATERAL

    def test_scalene(self):
        assert classify_triangle(3, 4, 5) == METRIC_ONLY

    def test_negative_side_rejected(self):
        with pytest.raises(DomainError):
            classify_triangle(-1.0, 1.0, 1.0)

    @given(
        st.permutations([3.5, 3.5, 1.0]),
    )
    def test_invariant_under_argument_order(self, sides):
        assert classify_triangle(*sides) == ISOSCELES_SMALL_BASE

    @given(
        st.tuples(
            st.floats(0.1, 100.0),
            st.floats(0.1, 100.0),
            st.floats(0.1, 100.0),
        ),
        st.permutations([0, 1, 2]),
    )
    def test_permutation_invariance_random(self, sides, order):
        permuted = tuple(sides[i] for i in order)
        assert classify_triangle(*sides) == classify_triangle(*permuted)


class TestUltrametricityCoefficient:
    def test_cophenetic_matrix_scores_one(self, rng):
        tree = random_tree(10, rng, heights="monotone")
        report = ultrametricity_coefficient(cophenetic_matrix(tree), 500, seed=3, tol=0.0)
        assert report.coefficient == 1.0

    def test_dimension_raises_coefficient(self):
        values = []
        for dim in (2, 200):
            cloud = generate_cloud(50, dim, "uniform", seed=1)
            report = ultrametricity_coefficient(
                pairwise_distances(cloud), 2000, seed=1, tol=0.02
            )
            values.append(report.coefficient)
        assert values[1] > values[0]

    def test_oversampling_covers_all_triples_once(self):
        cloud = generate_cloud(10, 3, "uniform", seed=5)
        m = pairwise_distances(cloud)
        report = ultrametricity_coefficient(m, 10**9, seed=0, tol=0.05)
        total = 10 * 9 * 8 // 6
        assert report.sampled == total
        hits = sum(
            1
            for i, j, k in itertools.combinations(range(10), 3)
            if classify_triangle(m.values[i, j], m.values[i, k], m.values[j, k], 0.05)
            != METRIC_ONLY
        )
        assert report.coefficient == hits / total

    def test_deterministic_given_seed(self):
        m = pairwise_distances(generate_cloud(30, 4, "gaussian", seed=9))
        a = ultrametricity_coefficient(m, 200, seed=17, tol=0.02)
        b = ultrametricity_coefficient(m, 200, seed=17, tol=0.02)
        assert a == b

    def test_monotone_in_tolerance(self):
        m = pairwise_distances(generate_cloud(25, 3, "uniform", seed=2))
        coefficients = [
            ultrametricity_coefficient(m, 300, seed=4, tol=t).coefficient
            for t in (0.0, 0.01, 0.05, 0.2, 1.0)
        ]
        assert coefficients == sorted(coefficients)

    def test_degenerate_rejected(self):
        m = DissimilarityMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        with pytest.raises(DegenerateInputError):
            ultrametricity_coefficient(m, 10)


class TestGenerateCloud:
    def test_deterministic(self):
        a = generate_cloud(3, 2, "uniform", seed=1)
        b = generate_cloud(3, 2, "uniform", seed=1)
        assert np.array_equal(a, b)

    def test_gaussian_mean_near_zero(self):
        cloud = generate_cloud(10_000, 1, "gaussian", seed=11)
        assert abs(cloud.mean()) < 0.05

    def test_single_point(self):
        cloud = generate_cloud(1, 1, "uniform", seed=0)
        assert cloud.shape == (1, 1)

    def test_uniform_in_unit_cube(self):
        cloud = generate_cloud(100, 5, "uniform", seed=3)
        assert cloud.min() >= 0.0 and cloud.max() < 1.0

    def test_bad_law_rejected(self):
        with pytest.raises(DomainError):
            generate_cloud(5, 2, "cauchy", seed=0)


class TestWreathInvariance:
    def test_cophenetic_constant_on_swaps(self, rng):
        tree = random_tree(9, rng)
        base = cophenetic_matrix(tree).values
        for r in range(1, 9):
            assert np.array_equal(base, cophenetic_matrix(swap_children(tree, r)).values)

    def test_brute_force_agreement(self, rng):
        tree = random_tree(7, rng, heights="monotone")
        assert brute_ultrametric_ok(cophenetic_matrix(tree).values.tolist(), 0.0)
