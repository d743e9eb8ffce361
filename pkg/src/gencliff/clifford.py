"""Rank-3 generalized Clifford triples: relation checking, the induced
bi-quaternion structures (J_i, G), the projections (G+-, I_i+-), and the
simultaneous-integrability suite.

The model hardcodes three generators (the rank-3 case); general rank-r is an
extension point, not implemented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import ChartMismatchError, ScalarField
from .courant import FluxForm
from .gcs import (EndField, TensorReport, bind_concomitant,
                  bind_nijenhuis, is_orthogonal, vanishes)

_EPS_TABLE = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (3, 2, 1): -1, (1, 3, 2): -1, (2, 1, 3): -1,
}


def levi_civita(i, j, k):
    """Totally antisymmetric symbol with eps_123 = +1 (1-based indices).

    The single source of sign truth shared by the induced-structure algebra
    and the twistor rotation layer.
    """
    return _EPS_TABLE.get((i, j, k), 0)


@dataclass(frozen=True)
class RelationCheck:
    name: str
    ok: bool


@dataclass(frozen=True)
class RelationsReport:
    checks: tuple
    ok: bool

    @property
    def failures(self):
        return [c.name for c in self.checks if not c.ok]


@dataclass(frozen=True)
class TripleStatus:
    relations: RelationsReport | None = None
    integrability: tuple = ()          # TensorReport per generator

    @property
    def relations_ok(self):
        return self.relations is not None and self.relations.ok

    @property
    def integrable(self):
        return bool(self.integrability) and \
            all(r.vanished for r in self.integrability)

    @property
    def verified(self):
        return self.relations_ok and self.integrable


class CliffordTriple:
    """Three anticommuting almost generalized complex structures sharing a
    chart and a flux, with a verification status record."""

    __slots__ = ("chart", "I1", "I2", "I3", "flux", "status")

    def __init__(self, I1: EndField, I2: EndField, I3: EndField,
                 flux: FluxForm | None = None,
                 status: TripleStatus | None = None):
        chart = I1.chart
        if I2.chart != chart or I3.chart != chart:
            raise ChartMismatchError("generators on different charts")
        for E in (I1, I2, I3):
            if E.flux is not None and flux is not None and E.flux != flux:
                raise ValueError("generator flux conflicts with triple flux")
        if flux is None:
            flux = I1.flux
        self.chart = chart
        self.I1 = I1.with_flux(flux) if I1.flux is None and flux is not None else I1
        self.I2 = I2.with_flux(flux) if I2.flux is None and flux is not None else I2
        self.I3 = I3.with_flux(flux) if I3.flux is None and flux is not None else I3
        self.flux = flux
        self.status = status or TripleStatus()

    @property
    def generators(self):
        return (self.I1, self.I2, self.I3)

    def with_status(self, status):
        return CliffordTriple(self.I1, self.I2, self.I3, self.flux, status)

    def __repr__(self):
        return (f"CliffordTriple(dim={self.chart.dim}, "
                f"verified={self.status.verified})")


def check_relations(T: CliffordTriple) -> RelationsReport:
    """Verify I_i I_j + I_j I_i = -2 delta_ij Id for all six unordered pairs,
    plus orthogonality of each generator (every check exact)."""
    chart = T.chart
    gens = T.generators
    checks = []
    minus2 = EndField.identity(chart).scale(ScalarField.constant(chart, -2))
    zero_ok = lambda E: all(f.is_zero for row in E.entries for f in row)
    for i in range(3):
        for j in range(i, 3):
            anti = (gens[i] @ gens[j]) + (gens[j] @ gens[i])
            if i == j:
                ok = anti.entries_equal(minus2)
                checks.append(RelationCheck(f"I{i+1}^2 = -Id", ok))
            else:
                checks.append(RelationCheck(
                    f"I{i+1} I{j+1} + I{j+1} I{i+1} = 0", zero_ok(anti)))
    for i, E in enumerate(gens):
        checks.append(RelationCheck(f"I{i+1} orthogonal", is_orthogonal(E)))
    checks = tuple(checks)
    return RelationsReport(checks, all(c.ok for c in checks))


def verify_triple(T: CliffordTriple, degree_bound: int = 2) -> CliffordTriple:
    """Run relations plus per-generator integrability; returns a new triple
    carrying the verification status."""
    rel = check_relations(T)
    reports = tuple(
        vanishes(bind_nijenhuis(E, f"N(I{i+1},I{i+1})", T.flux), degree_bound)
        for i, E in enumerate(T.generators))
    return T.with_status(TripleStatus(rel, reports))


@dataclass(frozen=True)
class InducedStructures:
    """J_i = eps_ijk I_j I_k / 2 and G = -I1 I2 I3, with the verified
    bi-quaternion multiplication table."""

    J1: EndField
    J2: EndField
    J3: EndField
    G: EndField
    table_ok: bool

    @property
    def J(self):
        return (self.J1, self.J2, self.J3)


def induce(T: CliffordTriple) -> InducedStructures:
    """Build the induced structures and verify the full multiplication table:
    I_i I_j = -d_ij + e_ijk J_k,  J_i J_j = -d_ij + e_ijk J_k,
    I_i J_j = J_i I_j = -d_ij G + e_ijk I_k,  G^2 = Id."""
    if not T.status.relations_ok:
        raise ValueError("relations not verified; run verify_triple first")
    chart = T.chart
    I = (None,) + T.generators
    half = ScalarField.constant(chart, Fraction(1, 2))
    J = [None, None, None, None]
    for i in (1, 2, 3):
        acc = None
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                e = levi_civita(i, j, k)
                if e == 0:
                    continue
                term = (I[j] @ I[k]).scale(half)
                if e < 0:
                    term = -term
                acc = term if acc is None else acc + term
        J[i] = acc
    G = -(I[1] @ I[2] @ I[3])
    ident = EndField.identity(chart)

    def combo(base, i, j, fam):
        out = -base if i == j else None
        for k in (1, 2, 3):
            e = levi_civita(i, j, k)
            if e == 0:
                continue
            t = fam[k] if e > 0 else -fam[k]
            out = t if out is None else out + t
        return out

    ok = (G @ G).entries_equal(ident)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            ok = ok and (I[i] @ I[j]).entries_equal(combo(ident, i, j, J))
            ok = ok and (J[i] @ J[j]).entries_equal(combo(ident, i, j, J))
            ok = ok and (I[i] @ J[j]).entries_equal(combo(G, i, j, I))
            ok = ok and (J[i] @ I[j]).entries_equal(combo(G, i, j, I))
    return InducedStructures(J[1], J[2], J[3], G, ok)


@dataclass(frozen=True)
class Projections:
    """G+- = (Id +- G)/2 and I_i+- = (J_i +- I_i)/2 with the verified
    projection and two-sector quaternion relations."""

    Gp: EndField
    Gm: EndField
    Ip: tuple
    Im: tuple
    identities_ok: bool


def project(ind: InducedStructures, T: CliffordTriple) -> Projections:
    """Split into the two commuting quaternionic sectors and verify:
    (G+-)^2 = G+-, I_i+- I_j+- = -d_ij G+- + e_ijk I_k+-, and every mixed
    +- product vanishes."""
    if not ind.table_ok:
        raise ValueError("induced multiplication table not verified")
    chart = T.chart
    half = ScalarField.constant(chart, Fraction(1, 2))
    ident = EndField.identity(chart)
    Gp = (ident + ind.G).scale(half)
    Gm = (ident - ind.G).scale(half)
    I = (None,) + T.generators
    J = (None,) + ind.J
    Ip = tuple((J[i] + I[i]).scale(half) for i in (1, 2, 3))
    Im = tuple((J[i] - I[i]).scale(half) for i in (1, 2, 3))
    zero_ok = lambda E: all(f.is_zero for row in E.entries for f in row)

    ok = (Gp @ Gp).entries_equal(Gp) and (Gm @ Gm).entries_equal(Gm)
    ok = ok and (Gp + Gm).entries_equal(ident)
    for fam, gsec in ((Ip, Gp), (Im, Gm)):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                want = None
                if i == j:
                    want = -gsec
                for k in (1, 2, 3):
                    e = levi_civita(i, j, k)
                    if e == 0:
                        continue
                    t = fam[k - 1] if e > 0 else -fam[k - 1]
                    want = t if want is None else want + t
                ok = ok and (fam[i - 1] @ fam[j - 1]).entries_equal(want)
    for i in (1, 2, 3):
        ok = ok and zero_ok(Gp @ Im[i - 1]) and zero_ok(Gm @ Ip[i - 1])
        ok = ok and zero_ok(Ip[i - 1] @ Gm) and zero_ok(Im[i - 1] @ Gp)
        for j in (1, 2, 3):
            ok = ok and zero_ok(Ip[i - 1] @ Im[j - 1])
            ok = ok and zero_ok(Im[i - 1] @ Ip[j - 1])
    ok = ok and zero_ok(Gp @ Gm) and zero_ok(Gm @ Gp)
    return Projections(Gp, Gm, Ip, Im, ok)


@dataclass
class SuiteReport:
    """Outcome of a family of tensor-vanishing checks."""

    name: str
    status: str                     # "pass" | "fail" | "inconclusive"
    families: list = field(default_factory=list)   # TensorReport
    note: str = ""

    @property
    def ok(self):
        return self.status == "pass"

    def witnesses(self):
        out = []
        for rep in self.families:
            for w in rep.witnesses:
                out.append((rep.name,) + w)
        return out


def theorem_1_1_families(T: CliffordTriple, ind: InducedStructures):
    """The 21 distinct tensor families N(I_i,I_j), N(J_i,J_j) (i <= j) and
    N(I_i,J_j) (all i, j), bound against the triple's flux."""
    I = T.generators
    J = ind.J
    fams = []
    for i in range(3):
        for j in range(i, 3):
            fams.append(bind_concomitant(I[i], I[j], f"N(I{i+1},I{j+1})",
                                         T.flux))
    for i in range(3):
        for j in range(i, 3):
            fams.append(bind_concomitant(J[i], J[j], f"N(J{i+1},J{j+1})",
                                         T.flux))
    for i in range(3):
        for j in range(3):
            fams.append(bind_concomitant(I[i], J[j], f"N(I{i+1},J{j+1})",
                                         T.flux))
    return fams


def _commute(A: EndField, B: EndField) -> bool:
    return (A @ B).entries_equal(B @ A)


def concomitant_anomaly(W: EndField, m, a: int, mprime, b: int) -> Section:
    """Closed-form Dorfman-Leibniz defect of the mixed concomitant for a
    CONSTANT commuting orthogonal pair (I, J), W = I J, on the generator pair
    (m * e_a, m' * e_b):

        N(I,J)(f u, g v) = 2 g ( <u,v> W(df) - <u, W v> df ).

    Derived by expanding all eight bracket terms with the Leibniz rules
    [fA,B] = f[A,B] - (rho(B)f) A + 2<A,B> df and [A,gB] = g[A,B] +
    (rho(A)g) B; the section-type terms cancel unconditionally and the df
    terms cancel exactly when I and J anticommute, leaving this expression
    in the commuting case.
    """
    from .cartan import KForm, exterior_d
    from .courant import Section as Sec
    chart = W.chart
    u = Sec.frame(chart, a)
    v = Sec.frame(chart, b)
    mp = ScalarField.from_poly(mprime) if not isinstance(mprime, ScalarField) \
        else mprime
    mf = ScalarField.from_poly(m) if not isinstance(m, ScalarField) else m
    df = Sec.from_form(exterior_d(KForm.from_scalar(mf)))
    from .courant import pairing
    puv = pairing(u, v)
    puWv = pairing(u, W.apply(v))
    out = W.apply(df).scale(puv) - df.scale(puWv)
    return out.scale(mp * ScalarField.constant(chart, 2))


def _commuting_family_report(I: EndField, J: EndField, name: str,
                             degree_bound: int, flux,
                             max_witnesses: int = 10) -> TensorReport:
    """Check a commuting constant pair against the anomaly oracle: outputs
    must vanish on frame pairs and equal the closed-form defect on monomial
    pairs.  vanished=True here means 'matched the oracle everywhere'."""
    from ._core import kernel as K
    from .courant import monomials_up_to, section_from_kernel
    from .gcs import _eval_kernel, _kernel_flux, _kernel_mats, generator_labels
    tensor = bind_concomitant(I, J, name, flux)
    chart = I.chart
    n = chart.dim
    W = I @ J
    Wk = W.kernel_const()
    monos = monomials_up_to(chart, degree_bound)
    labels = generator_labels(chart, degree_bound)
    rep = TensorReport(name, True, degree_bound, 0)
    gens = [(a, m) for a in range(2 * n) for m in monos]
    mats = _kernel_mats(tensor)
    kflux = _kernel_flux(tensor.flux)
    # <e_a, e_b> = 1/2 iff the frames pair off; <e_a, W e_b> = W_{(a+n)%2n, b}/2
    zero_n = (0,) * n

    def tri(f):
        return f.num.terms.get(zero_n, K.C_ZERO)

    half = (1, 0, 2)
    for i, (a, m) in enumerate(gens):
        A = [{} for _ in range(2 * n)]
        A[a] = dict(m.terms)
        # dm as a pure-covector kernel section
        dm = [{} for _ in range(2 * n)]
        for t in range(n):
            d = K.p_diff(m.terms, t)
            if d:
                dm[n + t] = d
        W_dm = K.mat_apply_const(Wk, dm)
        for j, (b, mp) in enumerate(gens):
            B = [{} for _ in range(2 * n)]
            B[b] = dict(mp.terms)
            got = _eval_kernel("concomitant", mats, kflux, n, A, B)
            c1 = half if (a + n) % (2 * n) == b else K.C_ZERO
            c2 = K.c_mul(half, tri(W.entries[(a + n) % (2 * n)][b]))
            want = []
            for c in range(2 * n):
                t1 = K.p_scale(W_dm[c], c1)
                t2 = K.p_scale(dm[c], c2)
                want.append(K.p_scale(K.p_mul(mp.terms, K.p_sub(t1, t2)),
                                      (2, 0, 1)))
            rep.sample_count += 1
            diff = K.sec_sub(got, want)
            if not K.sec_is_zero(diff):
                rep.vanished = False
                rep.witnesses.append(
                    (labels[i], labels[j],
                     str(section_from_kernel(chart, diff))))
                if len(rep.witnesses) >= max_witnesses:
                    return rep
    return rep


def theorem_1_1(T: CliffordTriple, degree_bound: int = 2,
                max_witnesses: int = 10, mode: str = "verify") -> SuiteReport:
    """Verify simultaneous integrability of the whole induced family.

    Precondition: each generator's own Nijenhuis tensor already verified zero
    (an unverified triple yields an inconclusive report, not a failure).

    The 18 anticommuting-pair families are tensorial and must vanish
    identically up to the degree bound.  The three commuting diagonal
    families N(I_i, J_i) are NOT tensorial over the Dorfman bracket: with
    mode="verify" (default) their outputs are checked exactly against the
    closed-form Leibniz defect (``concomitant_anomaly``) and classified
    anomaly_matched; mode="strict" demands literal vanishing, which fails on
    monomial layers for any constant triple with nondegenerate induced G.

    Checks the forward direction; the reverse is the containment of the
    generator conditions in the full family, restated in the report note.
    """
    if not T.status.verified:
        return SuiteReport(
            "theorem_1_1", "inconclusive", [],
            "precondition not verified: run verify_triple first "
            "(relations and per-generator integrability)")
    ind = induce(T)
    if not ind.table_ok:
        return SuiteReport("theorem_1_1", "fail", [],
                           "induced multiplication table failed")
    reports = []
    anomaly_families = []
    for fam in theorem_1_1_families(T, ind):
        I = fam.structures[0]
        J = fam.structures[-1]
        if mode == "verify" and fam.kind == "concomitant" \
                and _commute(I, J) and I.is_constant and J.is_constant:
            reports.append(_commuting_family_report(
                I, J, fam.name, degree_bound, T.flux, max_witnesses))
            anomaly_families.append(fam.name)
        else:
            reports.append(vanishes(fam, degree_bound, max_witnesses))
    ok = all(r.vanished for r in reports)
    note = ("forward direction checked; the reverse is the containment of "
            "the generator conditions in the full family")
    if anomaly_families:
        note += ("; commuting families checked against the exact "
                 "Dorfman-Leibniz anomaly (non-tensorial): "
                 + ", ".join(anomaly_families))
    return SuiteReport("theorem_1_1", "pass" if ok else "fail", reports, note)


def conjugate_triple(T: CliffordTriple, Q: EndField,
                     flux: FluxForm | None = None) -> CliffordTriple:
    """Q I_i Q^-1 for an invertible constant Q; used by naturality tests and
    the T-duality layer."""
    Qinv = Q.inverse()
    gens = [EndField(T.chart, (Q @ E @ Qinv).entries, flux)
            for E in T.generators]
    return CliffordTriple(gens[0], gens[1], gens[2], flux)
