"""Clifford triples: relations, induced bi-quaternion algebra, projections,
and the simultaneous-integrability suite."""

import pytest

from gencliff.scalar import GaussianRational, ScalarField, standard_chart
from gencliff.courant import Section
from gencliff.gcs import EndField
from gencliff.clifford import (CliffordTriple, check_relations,
                               concomitant_anomaly, conjugate_triple, induce,
                               levi_civita, project, theorem_1_1,
                               verify_triple)
from gencliff.examples import hyperkahler_r4, product_flip

R4 = standard_chart(4)


def flat_metric(chart):
    one, zero = ScalarField.one(chart), ScalarField.zero(chart)
    n = chart.dim
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    zeros = [[zero] * n for _ in range(n)]
    return EndField.from_blocks(chart, zeros, ident, ident, zeros)


class TestLeviCivita:
    def test_values(self):
        assert levi_civita(1, 2, 3) == 1
        assert levi_civita(2, 3, 1) == 1
        assert levi_civita(2, 1, 3) == -1
        assert levi_civita(1, 1, 3) == 0

    def test_total_antisymmetry(self):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                for k in (1, 2, 3):
                    assert levi_civita(i, j, k) == -levi_civita(j, i, k)
                    assert levi_civita(i, j, k) == -levi_civita(i, k, j)


class TestRelations:
    def test_hyperkahler_passes(self):
        rel = check_relations(hyperkahler_r4())
        assert rel.ok and len(rel.checks) == 9

    def test_duplicated_generator_fails(self):
        T = hyperkahler_r4()
        bad = CliffordTriple(T.I1, T.I2, T.I1)
        rel = check_relations(bad)
        assert not rel.ok
        assert "I1 I3 + I3 I1 = 0" in rel.failures

    def test_product_triple(self):
        P = product_flip()
        rel = check_relations(P)
        assert rel.ok
        prod = P.I1 @ P.I2
        assert not prod.entries_equal(P.I3)
        minus_id = EndField.identity(P.chart).scale(
            ScalarField.constant(P.chart, -1))
        assert (prod @ prod).entries_equal(minus_id)


class TestInduce:
    def test_hyperkahler_table(self):
        T = verify_triple(hyperkahler_r4(), 0)
        ind = induce(T)
        assert ind.table_ok
        assert ind.G.entries_equal(flat_metric(R4))
        assert (ind.J1 @ ind.J2).entries_equal(ind.J3)
        assert (ind.G @ ind.G).entries_equal(EndField.identity(R4))

    def test_requires_verified_relations(self):
        # builders hand out relation-checked triples; a hand-assembled one
        # starts unverified and must be rejected
        T = hyperkahler_r4()
        raw = CliffordTriple(T.I1, T.I2, T.I3)
        with pytest.raises(ValueError):
            induce(raw)


class TestProject:
    def test_identities(self):
        T = verify_triple(hyperkahler_r4(), 0)
        ind = induce(T)
        proj = project(ind, T)
        assert proj.identities_ok
        assert (proj.Gp + proj.Gm).entries_equal(EndField.identity(R4))
        assert (proj.Ip[0] @ proj.Ip[1]).entries_equal(proj.Ip[2])
        mixed = proj.Ip[0] @ proj.Im[1]
        assert all(f.is_zero for row in mixed.entries for f in row)

    def test_rank_split_at_origin(self):
        T = verify_triple(hyperkahler_r4(), 0)
        proj = project(induce(T), T)
        origin = (0,) * 4

        def rank_at(E):
            M = [[f.evaluate(origin) for f in row] for row in E.entries]
            rows = [[GaussianRational(v.re, v.im) for v in r] for r in M]
            rank = 0
            col = 0
            size = len(rows)
            for col in range(size):
                piv = next((r for r in range(rank, size)
                            if not rows[r][col].is_zero), None)
                if piv is None:
                    continue
                rows[rank], rows[piv] = rows[piv], rows[rank]
                inv = rows[rank][col].inverse()
                rows[rank] = [x * inv for x in rows[rank]]
                for r in range(size):
                    if r != rank and not rows[r][col].is_zero:
                        f = rows[r][col]
                        rows[r] = [a - f * b
                                   for a, b in zip(rows[r], rows[rank])]
                rank += 1
            return rank

        assert rank_at(proj.Gp) + rank_at(proj.Gm) == 8


class TestTheorem11:
    def test_unverified_is_inconclusive(self):
        rep = theorem_1_1(hyperkahler_r4(), 1)
        assert rep.status == "inconclusive"

    def test_verified_passes_with_anomaly_classification(self):
        T = verify_triple(hyperkahler_r4(), 1)
        rep = theorem_1_1(T, 1)
        assert rep.status == "pass"
        assert len(rep.families) == 21
        assert "N(I1,J1)" in rep.note

    def test_strict_mode_exposes_commuting_families(self):
        # the literal reading fails exactly on the three commuting diagonal
        # concomitants; the witnesses match the closed-form Leibniz defect
        T = verify_triple(hyperkahler_r4(), 1)
        rep = theorem_1_1(T, 1, mode="strict")
        assert rep.status == "fail"
        failing = {f.name for f in rep.families if not f.vanished}
        assert failing == {"N(I1,J1)", "N(I2,J2)", "N(I3,J3)"}

    def test_anomaly_formula_matches_direct_witness(self):
        from gencliff.gcs import concomitant
        from gencliff.scalar import Poly
        T = verify_triple(hyperkahler_r4(), 0)
        ind = induce(T)
        W = T.I1 @ ind.J1
        x4 = ScalarField.variable(R4, 3)
        A = Section.frame(R4, 0).scale(x4)
        B = Section.frame(R4, 0)
        got = concomitant(T.I1, ind.J1, A, B)
        want = concomitant_anomaly(W, Poly.variable(R4, 3), 0,
                                   Poly.one(R4), 0)
        assert got == want
        # the witness itself: N(I1, J1)(x4 d1, d1) = e4
        assert got == Section.frame(R4, 7)


class TestConjugation:
    def _orthogonal_q(self, chart):
        # diag(A, A^-T) preserves the neutral pairing for any invertible A
        A = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 2), (0, 0, 0, 1))
        Ainv_t = ((1, 0, 0, 0), (-1, 1, 0, 0), (0, 0, 1, 0), (0, 0, -2, 1))
        one = lambda v: ScalarField.constant(chart, v)
        zero = [[one(0)] * 4 for _ in range(4)]
        return EndField.from_blocks(
            chart,
            [[one(v) for v in row] for row in A], zero, zero,
            [[one(v) for v in row] for row in Ainv_t])

    def test_relations_invariant_under_conjugation(self):
        T = hyperkahler_r4()
        Q = self._orthogonal_q(R4)
        from gencliff.gcs import is_orthogonal
        assert is_orthogonal(Q)
        Tc = conjugate_triple(T, Q)
        assert check_relations(Tc).ok
        bad = CliffordTriple(T.I1, T.I2, T.I1)
        badc = conjugate_triple(bad, Q)
        assert not check_relations(badc).ok

    def test_induce_commutes_with_conjugation(self):
        T = verify_triple(hyperkahler_r4(), 0)
        Q = self._orthogonal_q(R4)
        Qinv = Q.inverse()
        Tc = verify_triple(conjugate_triple(T, Q), 0)
        ind = induce(T)
        indc = induce(Tc)
        for M, Mc in ((ind.J1, indc.J1), (ind.J2, indc.J2),
                      (ind.J3, indc.J3), (ind.G, indc.G)):
            assert Mc.entries_equal(Q @ M @ Qinv)

    def test_project_commutes_with_conjugation(self):
        T = verify_triple(hyperkahler_r4(), 0)
        Q = self._orthogonal_q(R4)
        Qinv = Q.inverse()
        Tc = verify_triple(conjugate_triple(T, Q), 0)
        proj = project(induce(T), T)
        projc = project(induce(Tc), Tc)
        assert projc.Gp.entries_equal(Q @ proj.Gp @ Qinv)
        for i in range(3):
            assert projc.Ip[i].entries_equal(Q @ proj.Ip[i] @ Qinv)
            assert projc.Im[i].entries_equal(Q @ proj.Im[i] @ Qinv)
