"""Spin(3) rotation family, connection identities, the twistor structure."""

from fractions import Fraction

import pytest

from gencliff.scalar import GaussianRational, ScalarField
from gencliff.courant import Section, dorfman
from gencliff.gcs import bind_nijenhuis, is_almost_gcs, vanishes
from gencliff.clifford import induce, project, theorem_1_1, verify_triple
from gencliff.examples import hyperkahler_r4
from gencliff.twistor import (TwistorPoint, check_cross_commutator,
                              check_dI_commutator, check_flatness,
                              connection_data, rot_T, rot_field,
                              rotate_family, sample_points, sphere_chart,
                              sphere_gcs, stereo_field, stereo_vec,
                              theorem_1_3, twistor_structure)

GR = GaussianRational
I = GR(0, 1)


def verified_triple():
    return verify_triple(hyperkahler_r4(), 0)


class TestStereo:
    def test_values(self):
        assert stereo_vec(GR(0)) == (1, 0, 0)
        assert stereo_vec(GR(1)) == (0, 0, -1)
        assert stereo_vec(I) == (0, 1, 0)

    def test_unit_norm_random(self):
        for p in sample_points(25, seed=3):
            c = stereo_vec(p.zeta1)
            assert sum(x * x for x in c) == 1


class TestRotations:
    def test_frozen_matrices(self):
        assert rot_T(GR(0)).rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert rot_T(GR(1)).rows == ((0, 0, -1), (0, 1, 0), (1, 0, 0))
        assert rot_T(I).rows == ((0, 1, 0), (-1, 0, 0), (0, 0, 1))

    def test_invariants_at_25_points(self):
        # orthogonality, det 1 and the row cross-product identities are
        # checked on construction; first row equals the stereographic vector
        for p in sample_points(25, seed=42):
            for z in (p.zeta1, p.zeta2):
                M = rot_T(z)
                assert M.rows[0] == stereo_vec(z)

    def test_symbolic_field_matches_pointwise(self):
        S4 = sphere_chart()
        rf = rot_field(S4, 0, 1)
        for p in sample_points(6, seed=1):
            z = p.zeta1
            pt = (z.re, z.im, Fraction(0), Fraction(0))
            M = rot_T(z)
            for i in range(3):
                for j in range(3):
                    v = rf[i][j].evaluate(pt)
                    assert v.is_real and v.re == M[i][j]

    def test_symbolic_first_row_is_stereo_field(self):
        S4 = sphere_chart()
        rf = rot_field(S4, 0, 1)
        sf = stereo_field(S4, 0, 1)
        assert all(rf[0][i] == sf[i] for i in range(3))

    def test_two_symbolic_constructions_of_ihat_agree(self):
        # path A: c.I+ + d.I- (the connection data's Ihat); path B: the
        # literal rotation formula K1 = T(I_l + prods)/2 + S(prods - I_l)/2
        # with symbolic matrix rows -- identical as rational-function
        # matrices
        from fractions import Fraction
        from gencliff.twistor import _embed_constant_end
        T = verified_triple()
        conn = connection_data(T)
        S4 = conn.chart
        t = rot_field(S4, 0, 1)
        s = rot_field(S4, 2, 3)
        I = [_embed_constant_end(E, S4) for E in T.generators]
        prods = (I[1] @ I[2], I[2] @ I[0], I[0] @ I[1])
        half = ScalarField.constant(S4, Fraction(1, 2))
        ihat_b = None
        for l in range(3):
            term = (I[l] + prods[l]).scale(half).scale(t[0][l]) + \
                (prods[l] - I[l]).scale(half).scale(s[0][l])
            ihat_b = term if ihat_b is None else ihat_b + term
        assert conn.Ihat.entries_equal(ihat_b)


class TestRotateFamily:
    def test_origin_gives_induced_triple(self):
        T = verified_triple()
        ind = induce(T)
        R = rotate_family(T, TwistorPoint(GR(0), GR(0)))
        assert R.I1.entries_equal(ind.J1)
        assert R.I2.entries_equal(ind.J2)
        assert R.I3.entries_equal(ind.J3)

    def test_sample_point_relations_and_integrability(self):
        T = verified_triple()
        R = rotate_family(T, TwistorPoint(GR(1), I))
        assert R.status.relations_ok
        Rv = verify_triple(R, 1)
        assert Rv.status.integrable
        rep = theorem_1_1(Rv, 0)
        assert rep.status == "pass"

    def test_unverified_triple_rejected(self):
        from gencliff.clifford import CliffordTriple
        T = hyperkahler_r4()
        raw = CliffordTriple(T.I1, T.I2, T.I3)
        with pytest.raises(ValueError):
            rotate_family(raw, TwistorPoint(GR(0), GR(0)))


class TestConnection:
    def test_data_and_identities(self):
        T = verified_triple()
        conn = connection_data(T)   # unit identities asserted inside
        assert check_dI_commutator(conn)
        assert check_flatness(conn)

    def test_plus_sector_has_no_second_factor_dependence(self):
        # the c-dependent half of Ihat is constant along (u2, v2)
        T = verified_triple()
        conn = connection_data(T)
        half = None
        for x, M in zip(conn.c, conn.Ip):
            t = M.scale(x)
            half = t if half is None else half + t
        for w in (2, 3):
            d = [[f.diff(w) for f in row] for row in half.entries]
            assert all(f.is_zero for row in d for f in row)

    def test_cross_commutator(self):
        T = verified_triple()
        proj = project(induce(T), T)
        assert check_cross_commutator((1, 0, 0), (0, 1, 0), proj)
        assert check_cross_commutator((1, 2, 3), (1, 2, 3), proj)
        assert check_cross_commutator((2, 0, 5), (0, 1, 0), proj)
        # [I1+, I2+] = 2 I3+ directly
        lhs = (proj.Ip[0] @ proj.Ip[1]) - (proj.Ip[1] @ proj.Ip[0])
        rhs = proj.Ip[2].scale(ScalarField.constant(proj.Ip[0].chart, 2))
        assert lhs.entries_equal(rhs)


class TestSphereGcs:
    def test_structural(self):
        E = sphere_gcs()
        assert is_almost_gcs(E)
        assert vanishes(bind_nijenhuis(E), 1).vanished

    def test_eigenbundle_orientation(self):
        # +i eigenbundle: d/d_zeta vectors and d_zetabar covectors of the
        # stereographic coordinate (the fiber-holomorphic coordinate is the
        # conjugate of the stereographic one; see sphere_gcs docstring)
        E = sphere_gcs()
        chart = E.chart
        i_unit = ScalarField.constant(chart, GaussianRational(0, 1))
        # vector d_zeta1 ~ d_u1 - i d_v1
        v = [ScalarField.zero(chart)] * 8
        v = list(v)
        v[0] = ScalarField.one(chart)
        v[1] = -i_unit
        sec = Section.from_components(chart, v)
        out = E.apply(sec)
        want = Section.from_components(
            chart, [i_unit * f for f in sec.to_components()])
        assert out == want
        # covector d_zetabar1 ~ e_u1 - i e_v1
        w = [ScalarField.zero(chart)] * 8
        w[4] = ScalarField.one(chart)
        w[5] = -i_unit
        sec2 = Section.from_components(chart, w)
        out2 = E.apply(sec2)
        want2 = Section.from_components(
            chart, [i_unit * f for f in sec2.to_components()])
        assert out2 == want2


class TestTwistorStructure:
    def test_block_at_origin_is_J1(self):
        T = verified_triple()
        E = twistor_structure(T)
        ind = induce(T)
        Z = E.chart
        origin = (0,) * 8
        for i in range(8):
            for j in range(8):
                src = i if i < 4 else 8 + (i - 4)
                dst = j if j < 4 else 8 + (j - 4)
                got = E.entries[src][dst].evaluate(origin)
                want = ind.J1.entries[i][j].constant_value()
                assert got == want

    def test_is_almost_gcs(self):
        T = verified_triple()
        E = twistor_structure(T)
        assert is_almost_gcs(E)

    def test_requires_constant_triple(self):
        from gencliff.cartan import KForm
        from gencliff.gcs import bfield_transform
        T = verified_triple()
        B = KForm(T.chart, 2, {(1, 2): ScalarField.variable(T.chart, 0)})
        gens = [bfield_transform(E, B) for E in T.generators]
        from gencliff.clifford import CliffordTriple, check_relations
        from gencliff.clifford import TripleStatus
        Tb = CliffordTriple(gens[0], gens[1], gens[2], gens[0].flux)
        Tb = Tb.with_status(TripleStatus(check_relations(Tb), ()))
        with pytest.raises(ValueError):
            twistor_structure(Tb)


class TestTheorem13:
    def test_symbolic_sweep(self):
        T = verified_triple()
        rep = theorem_1_3(T, degree_bound=0)
        assert rep.status == "pass"
        assert rep.nijenhuis_checks == 256
        assert rep.mixed_ok
        assert rep.mode == "symbolic"

    def test_sampled_mode(self):
        T = verified_triple()
        rep = theorem_1_3(T, degree_bound=0,
                          samples=sample_points(2, seed=11))
        assert rep.status == "pass"
        assert rep.mode == "sampled"
        assert rep.nijenhuis_checks == 2 * 256

    def test_mixed_bracket_identities_direct(self):
        # Lemma-4.4 style: [alpha, v] = L_{rho(alpha)} v for a sphere vector
        # and a sphere-dependent M-section; zero for a sphere 1-form
        T = verified_triple()
        E = twistor_structure(T)
        Z = E.chart
        v = E.column(0)
        alpha = Section.frame(Z, 4)          # d_u1
        lhs = dorfman(alpha, v)
        rhs = Section.from_components(Z, [f.diff(4)
                                          for f in v.to_components()])
        assert lhs == rhs
        form = Section.frame(Z, 12)          # e_u1 = du1
        assert dorfman(form, v).is_zero


class TestSamplePoints:
    def test_deterministic_and_includes_basics(self):
        a = sample_points(10, seed=5)
        b = sample_points(10, seed=5)
        assert a == b
        assert a[0] == TwistorPoint(GR(0), GR(0))
        assert a[1] == TwistorPoint(GR(1), I)
