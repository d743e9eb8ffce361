"""The concrete structure builders."""

import pytest

from gencliff.scalar import ScalarField
from gencliff.cartan import KForm
from gencliff.gcs import (EndField, bfield_transform, is_almost_gcs,
                          is_almost_real, bind_real_nijenhuis, vanishes)
from gencliff.clifford import check_relations, induce, verify_triple
from gencliff.examples import (QUAT_I, QUAT_J, QUAT_K, build_named,
                               clifford_hermitian, generalized_metric_example,
                               hyperkahler_r4, product_flip)


def _mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


class TestQuaternionConvention:
    def test_ij_equals_k(self):
        assert _mat_mul(QUAT_I, QUAT_J) == QUAT_K

    def test_squares_and_anticommutation(self):
        minus_id = tuple(tuple(-1 if i == j else 0 for j in range(4))
                         for i in range(4))
        for Q in (QUAT_I, QUAT_J, QUAT_K):
            assert _mat_mul(Q, Q) == minus_id
        for A, B in ((QUAT_I, QUAT_J), (QUAT_J, QUAT_K), (QUAT_I, QUAT_K)):
            s = _mat_mul(A, B)
            t = _mat_mul(B, A)
            assert all(s[i][j] + t[i][j] == 0 for i in range(4)
                       for j in range(4))


class TestHyperkahler:
    def test_structural_checks(self):
        T = hyperkahler_r4()
        rel = check_relations(T)
        assert rel.ok
        for E in T.generators:
            assert is_almost_gcs(E)

    def test_induced_metric_is_flat(self):
        T = verify_triple(hyperkahler_r4(), 0)
        ind = induce(T)
        chart = T.chart
        got = ind.G
        assert is_almost_real(got)
        one, zero = ScalarField.one(chart), ScalarField.zero(chart)
        n = 4
        ident = [[one if i == j else zero for j in range(n)]
                 for i in range(n)]
        zeros = [[zero] * n for _ in range(n)]
        want = EndField.from_blocks(chart, zeros, ident, ident, zeros)
        assert got.entries_equal(want)


class TestCliffordHermitian:
    def test_quaternion_triple_valid(self):
        T = clifford_hermitian(QUAT_I, QUAT_J, QUAT_K)
        assert check_relations(T).ok
        for E in T.generators:
            assert is_almost_gcs(E)
        T = verify_triple(T, 1)
        assert T.status.integrable

    def test_precondition_enforced(self):
        bad = tuple(tuple(1 if i == j else 0 for j in range(4))
                    for i in range(4))
        with pytest.raises(ValueError):
            clifford_hermitian(bad, QUAT_J, QUAT_K)
        with pytest.raises(ValueError):
            clifford_hermitian(QUAT_I, QUAT_I, QUAT_K)


class TestProductFlip:
    def test_relations_and_strict_inequality(self):
        P = product_flip()
        assert check_relations(P).ok
        prod = P.I1 @ P.I2
        assert not prod.entries_equal(P.I3)

    def test_bfield_transform_keeps_relations(self):
        P = product_flip()
        chart = P.chart
        B = KForm(chart, 2, {(2, 4): ScalarField.variable(chart, 0)})
        gens = [bfield_transform(E, B) for E in P.generators]
        minus2 = EndField.identity(chart).scale(
            ScalarField.constant(chart, -2))
        for i in range(3):
            for j in range(i, 3):
                anti = (gens[i] @ gens[j]) + (gens[j] @ gens[i])
                if i == j:
                    assert anti.entries_equal(minus2)
                else:
                    assert all(f.is_zero for row in anti.entries for f in row)


class TestGeneralizedMetricExample:
    def test_flat_and_curved_variants(self):
        flat, curved = generalized_metric_example(2)
        assert is_almost_real(flat)
        assert is_almost_real(curved)
        assert not curved.is_constant

    def test_flat_metric_not_integrable(self):
        flat, _ = generalized_metric_example(2)
        rep = vanishes(bind_real_nijenhuis(flat), 1, max_witnesses=1)
        assert not rep.vanished


class TestRegistry:
    def test_builtin_lookup(self):
        T = build_named("hyperkahler_r4")
        assert T.chart.dim == 4
        with pytest.raises(KeyError):
            build_named("nope")
