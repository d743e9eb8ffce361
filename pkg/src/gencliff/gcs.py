"""Generalized (almost) complex and real structures on TM + T*M, the
generalized metric, B-field transforms, and the Nijenhuis-type tensors with
their vanishing sweeps.

An EndField is a 2n x 2n matrix of ScalarFields acting on sections, carrying
the flux against which its integrability is judged (mixing structures with
different fluxes in one concomitant is an error).  Vanishing of a tensor is
decided on frame sections multiplied by monomials up to a degree bound: frame
evaluation would suffice if the expression is tensorial, and the monomial
layer detects non-tensorial anomalies instead of silently trusting
tensoriality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._core import kernel as K
from .scalar import Chart, ChartMismatchError, ScalarField
from .cartan import KForm
from .courant import (FluxForm, Section, dorfman, dorfman_twisted,
                      frame_sections, monomials_up_to, section_from_kernel)

HALF = (1, 0, 2)


class FluxMismatchError(ValueError):
    pass


def _zero_matrix(chart, size):
    z = ScalarField.zero(chart)
    return [[z] * size for _ in range(size)]


def mat_mul(A, B):
    size = len(A)
    zero = ScalarField.zero(A[0][0].chart)
    out = []
    for i in range(size):
        row = []
        Ai = A[i]
        for j in range(size):
            acc = None
            for k in range(size):
                a = Ai[k]
                if a.is_zero:
                    continue
                b = B[k][j]
                if b.is_zero:
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else zero)
        out.append(row)
    return out


def mat_inv(A, chart):
    """Exact inverse by Gauss-Jordan elimination; raises on singular input."""
    size = len(A)
    M = [list(row) for row in A]
    I = [[ScalarField.one(chart) if i == j else ScalarField.zero(chart)
          for j in range(size)] for i in range(size)]
    for col in range(size):
        piv = next((r for r in range(col, size) if not M[r][col].is_zero), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        I[col], I[piv] = I[piv], I[col]
        inv = ScalarField.one(chart) / M[col][col]
        M[col] = [x * inv for x in M[col]]
        I[col] = [x * inv for x in I[col]]
        for r in range(size):
            if r == col or M[r][col].is_zero:
                continue
            f = M[r][col]
            M[r] = [a - f * b for a, b in zip(M[r], M[col])]
            I[r] = [a - f * b for a, b in zip(I[r], I[col])]
    return I


class EndField:
    """2n x 2n endomorphism field with optional flux."""

    __slots__ = ("chart", "entries", "flux", "_kconst", "_kpoly")

    def __init__(self, chart: Chart, entries, flux: FluxForm | None = None):
        size = 2 * chart.dim
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != size or any(len(r) != size for r in entries):
            raise ValueError("entries must be a 2n x 2n matrix")
        for row in entries:
            for f in row:
                if f.chart != chart:
                    raise ChartMismatchError("entry on wrong chart")
        if flux is not None and flux.chart != chart:
            raise ChartMismatchError("flux on wrong chart")
        self.chart = chart
        self.entries = entries
        self.flux = flux
        self._kconst = -1
        self._kpoly = -1

    @classmethod
    def identity(cls, chart, flux=None):
        size = 2 * chart.dim
        return cls(chart, [[ScalarField.one(chart) if i == j
                            else ScalarField.zero(chart)
                            for j in range(size)] for i in range(size)], flux)

    @classmethod
    def from_blocks(cls, chart, a, b, c, d, flux=None):
        """Assemble from n x n blocks [[a, b], [c, d]]."""
        n = chart.dim
        rows = []
        for i in range(n):
            rows.append(list(a[i]) + list(b[i]))
        for i in range(n):
            rows.append(list(c[i]) + list(d[i]))
        return cls(chart, rows, flux)

    def blocks(self):
        n = self.chart.dim
        a = [row[:n] for row in self.entries[:n]]
        b = [row[n:] for row in self.entries[:n]]
        c = [row[:n] for row in self.entries[n:]]
        d = [row[n:] for row in self.entries[n:]]
        return a, b, c, d

    @property
    def size(self):
        return 2 * self.chart.dim

    def with_flux(self, flux):
        return EndField(self.chart, self.entries, flux)

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatchError("endomorphisms on different charts")

    def __add__(self, other):
        self._check(other)
        return EndField(self.chart,
                        [[a + b for a, b in zip(r1, r2)]
                         for r1, r2 in zip(self.entries, other.entries)],
                        self.flux)

    def __sub__(self, other):
        self._check(other)
        return EndField(self.chart,
                        [[a - b for a, b in zip(r1, r2)]
                         for r1, r2 in zip(self.entries, other.entries)],
                        self.flux)

    def __neg__(self):
        return EndField(self.chart, [[-a for a in r] for r in self.entries],
                        self.flux)

    def scale(self, c):
        return EndField(self.chart, [[a * c for a in r] for r in self.entries],
                        self.flux)

    def __matmul__(self, other):
        self._check(other)
        return EndField(self.chart, mat_mul(self.entries, other.entries),
                        self.flux)

    def transpose(self):
        return EndField(self.chart, tuple(zip(*self.entries)), self.flux)

    def inverse(self):
        return EndField(self.chart, mat_inv(self.entries, self.chart),
                        self.flux)

    def apply(self, A: Section) -> Section:
        if A.chart != self.chart:
            raise ChartMismatchError("section on wrong chart")
        comps = A.to_components()
        out = []
        for row in self.entries:
            acc = None
            for e, c in zip(row, comps):
                if e.is_zero or c.is_zero:
                    continue
                t = e * c
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else ScalarField.zero(self.chart))
        return Section.from_components(self.chart, out)

    def column(self, j) -> Section:
        return Section.from_components(self.chart,
                                       [row[j] for row in self.entries])

    @property
    def is_constant(self):
        return all(f.is_constant for row in self.entries for f in row)

    @property
    def is_polynomial(self):
        return all(f.is_polynomial for row in self.entries for f in row)

    def entries_equal(self, other):
        return self.chart == other.chart and self.entries == other.entries

    def __eq__(self, other):
        if not isinstance(other, EndField):
            return NotImplemented
        return self.entries_equal(other) and _flux_eq(self.flux, other.flux)

    def __hash__(self):
        return hash((self.chart, self.entries))

    def kernel_const(self):
        """Rows of (col, coeff-triple) if constant, else None (cached)."""
        if self._kconst == -1:
            if not self.is_constant:
                self._kconst = None
            else:
                zero = (0,) * self.chart.dim
                rows = []
                for row in self.entries:
                    r = []
                    for j, f in enumerate(row):
                        if not f.is_zero:
                            r.append((j, f.num.terms[zero]))
                    rows.append(r)
                self._kconst = rows
        return self._kconst

    def kernel_poly(self):
        """Rows of (col, poly-terms) if polynomial, else None (cached)."""
        if self._kpoly == -1:
            if not self.is_polynomial:
                self._kpoly = None
            else:
                rows = []
                for row in self.entries:
                    rows.append([(j, f.num.terms) for j, f in enumerate(row)
                                 if not f.is_zero])
                self._kpoly = rows
        return self._kpoly

    def __repr__(self):
        return f"EndField({self.size}x{self.size} on {self.chart!r})"


def _flux_eq(a, b):
    if a is None or (isinstance(a, FluxForm) and a.is_zero):
        return b is None or (isinstance(b, FluxForm) and b.is_zero)
    return a == b


def _pairing_endfield(chart):
    half = ScalarField.constant(chart, Fraction(1, 2))
    zero = ScalarField.zero(chart)
    n = chart.dim
    size = 2 * n
    return [[half if j == (i + n) % size else zero for j in range(size)]
            for i in range(size)]


def is_orthogonal(E: EndField) -> bool:
    """E^T P E = P identically, P the neutral pairing matrix."""
    P = _pairing_endfield(E.chart)
    lhs = mat_mul(mat_mul([list(r) for r in zip(*E.entries)], P), list(map(list, E.entries)))
    return all(a == b for r1, r2 in zip(lhs, P) for a, b in zip(r1, r2))


def is_almost_gcs(E: EndField) -> bool:
    """Orthogonal and E^2 = -Id."""
    sq = E @ E
    return sq.entries_equal(EndField.identity(E.chart).scale(
        ScalarField.constant(E.chart, -1))) and is_orthogonal(E)


def is_almost_real(G: EndField) -> bool:
    """Orthogonal and G^2 = Id."""
    sq = G @ G
    return sq.entries_equal(EndField.identity(G.chart)) and is_orthogonal(G)


# ---------------------------------------------------------------------------
# Nijenhuis-type tensors.

def _bracket(A, B, flux):
    if flux is None or flux.is_zero:
        return dorfman(A, B)
    return dorfman_twisted(A, B, flux, strict=False)


def _common_flux(*structs, override=None):
    fluxes = [s.flux for s in structs]
    base = fluxes[0]
    for f in fluxes[1:]:
        if not _flux_eq(base, f):
            raise FluxMismatchError(
                "structures carry different fluxes; refusing to mix brackets")
    if override is not None:
        if base is not None and not _flux_eq(base, override):
            raise FluxMismatchError("explicit flux conflicts with structure flux")
        return override
    return base


def nijenhuis(J: EndField, A: Section, B: Section,
              H: FluxForm | None = None) -> Section:
    """N_J(A,B) = [JA,JB] - J[JA,B] - J[A,JB] - [A,B] (twisted bracket)."""
    flux = _common_flux(J, override=H)
    if A.chart != J.chart or B.chart != J.chart:
        raise ChartMismatchError("sections on wrong chart")
    JA, JB = J.apply(A), J.apply(B)
    return (_bracket(JA, JB, flux) - J.apply(_bracket(JA, B, flux))
            - J.apply(_bracket(A, JB, flux)) - _bracket(A, B, flux))


def concomitant(I: EndField, J: EndField, A: Section, B: Section,
                H: FluxForm | None = None) -> Section:
    """Symmetrized mixed Nijenhuis tensor N(I,J), the 8-term expression."""
    if I.chart != J.chart:
        raise ChartMismatchError("structures on different charts")
    flux = _common_flux(I, J, override=H)
    IA, IB = I.apply(A), I.apply(B)
    JA, JB = J.apply(A), J.apply(B)
    out = (_bracket(IA, JB, flux) + _bracket(JA, IB, flux)
           - I.apply(_bracket(A, JB, flux)) - I.apply(_bracket(JA, B, flux))
           - J.apply(_bracket(A, IB, flux)) - J.apply(_bracket(IA, B, flux))
           + I.apply(J.apply(_bracket(A, B, flux)))
           + J.apply(I.apply(_bracket(A, B, flux))))
    return out.scale(ScalarField.constant(I.chart, Fraction(1, 2)))


def _is_involution(G):
    return (G @ G).entries_equal(EndField.identity(G.chart))


def real_nijenhuis(G: EndField, A: Section, B: Section,
                   H: FluxForm | None = None) -> Section:
    """N_G(A,B) = [GA,GB] - G[GA,B] - G[A,GB] + [A,B] (note the + sign).

    Requires the involution G^2 = Id (which is all the formula needs); the
    full almost-real condition additionally asks for orthogonality and is
    checked by ``is_almost_real``.
    """
    if not _is_involution(G):
        raise ValueError("structure is not an involution (G^2 != Id)")
    flux = _common_flux(G, override=H)
    GA, GB = G.apply(A), G.apply(B)
    return (_bracket(GA, GB, flux) - G.apply(_bracket(GA, B, flux))
            - G.apply(_bracket(A, GB, flux)) + _bracket(A, B, flux))


# ---------------------------------------------------------------------------
# Bound tensors and the vanishing sweep.

@dataclass(frozen=True)
class BoundTensor:
    """A Nijenhuis-type tensor bound to its structures and flux."""

    kind: str                 # "nijenhuis" | "concomitant" | "real_nijenhuis"
    name: str
    structures: tuple
    flux: FluxForm | None

    @property
    def chart(self):
        return self.structures[0].chart

    def evaluate(self, A: Section, B: Section) -> Section:
        if self.kind == "nijenhuis":
            return nijenhuis(self.structures[0], A, B, self.flux)
        if self.kind == "concomitant":
            return concomitant(self.structures[0], self.structures[1], A, B,
                               self.flux)
        return real_nijenhuis(self.structures[0], A, B, self.flux)


def bind_nijenhuis(J: EndField, name: str = "N(J,J)",
                   flux: FluxForm | None = None) -> BoundTensor:
    return BoundTensor("nijenhuis", name, (J,), _common_flux(J, override=flux))


def bind_concomitant(I: EndField, J: EndField, name: str = "N(I,J)",
                     flux: FluxForm | None = None) -> BoundTensor:
    return BoundTensor("concomitant", name, (I, J),
                       _common_flux(I, J, override=flux))


def bind_real_nijenhuis(G: EndField, name: str = "N_G",
                        flux: FluxForm | None = None) -> BoundTensor:
    if not _is_involution(G):
        raise ValueError("structure is not an involution (G^2 != Id)")
    return BoundTensor("real_nijenhuis", name, (G,),
                       _common_flux(G, override=flux))


@dataclass
class TensorReport:
    name: str
    vanished: bool
    degree_bound: int
    sample_count: int
    witnesses: list = field(default_factory=list)


def generator_labels(chart, degree_bound):
    """Deterministic labels for the frame x monomial generator set."""
    n = chart.dim
    labels = []
    frames = [f"d{i + 1}" for i in range(n)] + [f"e{i + 1}" for i in range(n)]
    monos = monomials_up_to(chart, degree_bound)
    for a, fr in enumerate(frames):
        for m in monos:
            ms = str(m)
            labels.append(fr if ms == "1" else f"{ms}*{fr}")
    return labels


def generator_sections(chart, degree_bound):
    """Sections m * e_a in the same order as generator_labels."""
    out = []
    monos = monomials_up_to(chart, degree_bound)
    for a in range(2 * chart.dim):
        e = Section.frame(chart, a)
        for m in monos:
            out.append(e.scale(ScalarField.from_poly(m)))
    return out


def _kernel_generators(chart, degree_bound):
    """Kernel-layout generator sections (single-monomial components)."""
    out = []
    n = chart.dim
    monos = monomials_up_to(chart, degree_bound)
    for a in range(2 * n):
        for m in monos:
            sec = [{} for _ in range(2 * n)]
            sec[a] = dict(m.terms)
            out.append(sec)
    return out


def _kernel_flux(flux):
    if flux is None or flux.is_zero:
        return None
    return flux.kernel_form()


def _eval_kernel(kind, mats, kflux, n, A, B):
    """Tensor evaluation on kernel sections; mats are pre-extracted."""
    dor = K.sec_dorfman
    app = K.mat_apply_const if mats["const"] else K.mat_apply_poly
    if kind == "nijenhuis":
        J = mats["J"]
        JA, JB = app(J, A), app(J, B)
        t1 = dor(n, JA, JB, kflux)
        t2 = app(J, dor(n, JA, B, kflux))
        t3 = app(J, dor(n, A, JB, kflux))
        t4 = dor(n, A, B, kflux)
        return [K.p_sub(K.p_sub(K.p_sub(a, b), c), d)
                for a, b, c, d in zip(t1, t2, t3, t4)]
    if kind == "real_nijenhuis":
        G = mats["J"]
        GA, GB = app(G, A), app(G, B)
        t1 = dor(n, GA, GB, kflux)
        t2 = app(G, dor(n, GA, B, kflux))
        t3 = app(G, dor(n, A, GB, kflux))
        t4 = dor(n, A, B, kflux)
        return [K.p_add(K.p_sub(K.p_sub(a, b), c), d)
                for a, b, c, d in zip(t1, t2, t3, t4)]
    I, J = mats["I"], mats["J"]
    IJ, JI = mats["IJ"], mats["JI"]
    IA, IB = app(I, A), app(I, B)
    JA, JB = app(J, A), app(J, B)
    t1 = K.sec_add(dor(n, IA, JB, kflux), dor(n, JA, IB, kflux))
    t2 = app(I, K.sec_add(dor(n, A, JB, kflux), dor(n, JA, B, kflux)))
    t3 = app(J, K.sec_add(dor(n, A, IB, kflux), dor(n, IA, B, kflux)))
    ab = dor(n, A, B, kflux)
    t4 = K.sec_add(app(IJ, ab), app(JI, ab))
    out = K.sec_add(K.sec_sub(K.sec_sub(t1, t2), t3), t4)
    return [K.p_scale(p, HALF) for p in out]


def _kernel_mats(tensor: BoundTensor):
    """Kernel matrices for the bound structures, or None for the generic path."""
    structs = tensor.structures
    if all(s.is_constant for s in structs):
        const = True
        get = lambda s: s.kernel_const()
    elif all(s.is_polynomial for s in structs):
        const = False
        get = lambda s: s.kernel_poly()
    else:
        return None
    if tensor.flux is not None and not tensor.flux.is_zero \
            and tensor.flux.kernel_form() is None:
        return None
    mats = {"const": const, "J": get(structs[-1])}
    if tensor.kind == "concomitant":
        I, J = structs
        mats["I"] = get(I)
        mats["IJ"] = get(I @ J)
        mats["JI"] = get(J @ I)
    return mats


def vanishes(tensor: BoundTensor, degree_bound: int = 2,
             max_witnesses: int = 10) -> TensorReport:
    """Evaluate the bound tensor on all pairs (m*e_a, m'*e_b) of frame
    sections times monomials of degree <= degree_bound.

    vanished is True iff every output is exactly zero; otherwise the first
    max_witnesses witnesses (in the fixed generator order) are reported.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    chart = tensor.chart
    n = chart.dim
    labels = generator_labels(chart, degree_bound)
    report = TensorReport(tensor.name, True, degree_bound, 0)
    mats = _kernel_mats(tensor)
    if mats is not None:
        kflux = _kernel_flux(tensor.flux)
        gens = _kernel_generators(chart, degree_bound)
        for i, A in enumerate(gens):
            for j, B in enumerate(gens):
                out = _eval_kernel(tensor.kind, mats, kflux, n, A, B)
                report.sample_count += 1
                if not K.sec_is_zero(out):
                    report.vanished = False
                    report.witnesses.append(
                        (labels[i], labels[j],
                         str(section_from_kernel(chart, out))))
                    if len(report.witnesses) >= max_witnesses:
                        return report
        return report
    gens = generator_sections(chart, degree_bound)
    for i, A in enumerate(gens):
        for j, B in enumerate(gens):
            out = tensor.evaluate(A, B)
            report.sample_count += 1
            if not out.is_zero:
                report.vanished = False
                report.witnesses.append((labels[i], labels[j], str(out)))
                if len(report.witnesses) >= max_witnesses:
                    return report
    return report


# ---------------------------------------------------------------------------
# Constructors and lemma identities.

def generalized_metric(g, b, chart: Chart | None = None) -> EndField:
    """Generalized metric block matrix from (g, b):
    [[-g^-1 b, g^-1], [g - b g^-1 b, b g^-1]].

    g must be symmetric and exactly invertible, b antisymmetric.
    """
    if chart is None:
        chart = g[0][0].chart
    n = chart.dim
    if len(g) != n or len(b) != n:
        raise ValueError("g and b must be n x n")
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise ValueError("g must be symmetric")
            if b[i][j] != -b[j][i]:
                raise ValueError("b must be antisymmetric")
    ginv = mat_inv(g, chart)

    def nmul(A, B):
        return [[_dot(A, B, i, j, chart) for j in range(n)] for i in range(n)]

    def _dot(A, B, i, j, chart):
        acc = ScalarField.zero(chart)
        for k in range(n):
            if not A[i][k].is_zero and not B[k][j].is_zero:
                acc = acc + A[i][k] * B[k][j]
        return acc

    bginv = nmul(b, ginv)
    ginvb = nmul(ginv, b)
    gminus = [[g[i][j] - _dot(bginv, b, i, j, chart) for j in range(n)]
              for i in range(n)]
    G = EndField.from_blocks(chart,
                             [[-x for x in row] for row in ginvb],
                             ginv, gminus, bginv)
    if not is_almost_real(G):
        raise AssertionError("generalized metric failed its structural checks")
    return G


def form_to_matrix(B: KForm):
    """Antisymmetric coefficient matrix B_ij of a 2-form."""
    if B.degree != 2:
        raise ValueError("need a 2-form")
    chart = B.chart
    n = chart.dim
    zero = ScalarField.zero(chart)
    M = [[zero] * n for _ in range(n)]
    for (i, j), f in B.coeffs.items():
        M[i][j] = f
        M[j][i] = -f
    return M


def bfield_transform(E: EndField, B: KForm) -> EndField:
    """e^B E e^-B with e^B = [[Id, 0], [Bm, Id]]; flux gains dB.

    (e^B acts by (X, xi) -> (X, xi + iota_X B); the transform preserves
    orthogonality, squares and all Clifford relations, and is integrable for
    the (flux + dB)-twisted bracket whenever E was for the flux-twisted one.)
    """
    from .cartan import exterior_d
    chart = E.chart
    n = chart.dim
    Bm = form_to_matrix(B)
    # Bmat[j][i] = B_{ij}: row j of the lower-left block
    lower = [[Bm[i][j] for i in range(n)] for j in range(n)]
    zero = [[ScalarField.zero(chart)] * n for _ in range(n)]
    ident = [[ScalarField.one(chart) if i == j else ScalarField.zero(chart)
              for j in range(n)] for i in range(n)]
    eB = EndField.from_blocks(chart, ident, zero, lower, ident)
    eBinv = EndField.from_blocks(chart, ident, zero,
                                 [[-x for x in row] for row in lower], ident)
    out = eB @ E @ eBinv
    dB = exterior_d(B)
    base = E.flux.H if E.flux is not None else KForm.zero(chart, 3)
    newflux = FluxForm(base + dB)
    return EndField(chart, out.entries, newflux)


def eigen_sections(G: EndField, sign: int):
    """{e_a + sign * G e_a} over the frame; each output satisfies
    G(out) = sign * out."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not _is_involution(G):
        raise ValueError("structure is not an involution (G^2 != Id)")
    out = []
    for e in frame_sections(G.chart):
        ge = G.apply(e)
        s = e + ge if sign == 1 else e - ge
        check = G.apply(s)
        want = s if sign == 1 else -s
        if check != want:
            raise AssertionError("eigen section failed its eigenvalue check")
        out.append(s)
    return out


def lemma_identities(I: EndField, J: EndField, A: Section, B: Section):
    """Both sides of the product/mixed Nijenhuis identities for an
    anticommuting pair (I almost complex, I J = -J I).

    Returns [(name, lhs, rhs, equal)] for the three identities:
      product rule for N_{IJ}, the mixed expression for N(I,J), and the
      N(I, IJ) expansion.
    """
    chart = I.chart
    minus_id = EndField.identity(chart).scale(ScalarField.constant(chart, -1))
    if not (I @ I).entries_equal(minus_id):
        raise ValueError("I^2 = -Id required")
    anti = (I @ J) + (J @ I)
    if not all(f.is_zero for row in anti.entries for f in row):
        raise ValueError("I J + J I = 0 required")
    flux = _common_flux(I, J)
    IJ = I @ J
    half = ScalarField.constant(chart, Fraction(1, 2))
    two = ScalarField.constant(chart, 2)

    def N(S, X, Y):
        return nijenhuis(S, X, Y, flux)

    IA, IB = I.apply(A), I.apply(B)
    JA, JB = J.apply(A), J.apply(B)
    out = []

    lhs1 = N(IJ, A, B)
    rhs1 = (N(I, JA, JB) + N(J, IA, IB) + N(I, A, B) + N(J, A, B)
            - I.apply(N(J, IA, B)) - I.apply(N(J, A, IB))
            - J.apply(N(I, JA, B)) - J.apply(N(I, A, JB))).scale(half)
    out.append(("lemma_2_1_product", lhs1, rhs1, lhs1 == rhs1))

    lhs2 = concomitant(I, J, A, B, flux)
    rhs2 = (IJ.apply(N(I, A, B) - N(J, A, B)) - N(IJ, JA, IB)).scale(half)
    out.append(("lemma_2_1_mixed", lhs2, rhs2, lhs2 == rhs2))

    lhs3 = concomitant(I, IJ, A, B, flux).scale(two)
    rhs3 = (N(I, JA, B) + N(I, A, JB)
            + I.apply(concomitant(I, J, A, B, flux)).scale(two))
    out.append(("n_i_ij_expansion", lhs3, rhs3, lhs3 == rhs3))
    return out


def tensoriality_probe(tensor: BoundTensor, f: ScalarField, A: Section,
                       B: Section) -> Section:
    """Defect N(fA, B) - f N(A, B); zero iff the binding is tensorial in its
    first slot at (A, B).  Reported, not asserted, for mixed concomitants."""
    return tensor.evaluate(A.scale(f), B) - tensor.evaluate(A, B).scale(f)
