"""Exterior calculus on a chart: vector fields, k-forms, exterior derivative,
interior product, Lie bracket and Lie derivative.

Forms are stored sparsely over strictly increasing index tuples; every sign
comes from the single helper ``sort_with_sign`` so there is exactly one place
where orientation bookkeeping can go wrong.  Degree-0 forms embed ScalarFields
explicitly via ``KForm.from_scalar`` / ``as_scalar`` (never implicitly).
"""

from __future__ import annotations

from .scalar import ChartMismatchError, ScalarField


def _frame_term(f, frame):
    """Render 'coefficient * frame-symbol' in the CLI naming (d<i>/e<i>)."""
    s = str(f)
    if s == "1":
        return frame
    if s == "-1":
        return f"-{frame}"
    if " " in s or "/" in s:
        return f"({s})*{frame}"
    return f"{s}*{frame}"


def sort_with_sign(indices):
    """Sort an index tuple, returning (sorted_tuple, sign).

    sign is 0 if any index repeats, otherwise the sign of the sorting
    permutation.  Every antisymmetrization in the package routes through here.
    """
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


class VectorField:
    __slots__ = ("chart", "components")

    def __init__(self, chart, components):
        components = tuple(components)
        if len(components) != chart.dim:
            raise ValueError("component count must equal chart dimension")
        for c in components:
            if c.chart != chart:
                raise ChartMismatchError("component on wrong chart")
        self.chart = chart
        self.components = components

    @classmethod
    def zero(cls, chart):
        z = ScalarField.zero(chart)
        return cls(chart, (z,) * chart.dim)

    @classmethod
    def coordinate(cls, chart, i):
        comps = [ScalarField.zero(chart)] * chart.dim
        comps[i] = ScalarField.one(chart)
        return cls(chart, comps)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.components)

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatchError("vector fields on different charts")

    def __add__(self, other):
        self._check(other)
        return VectorField(self.chart,
                           [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return VectorField(self.chart,
                           [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.components])

    def scale(self, f):
        return VectorField(self.chart, [f * a for a in self.components])

    def apply(self, f):
        """Directional derivative X(f)."""
        acc = ScalarField.zero(self.chart)
        for j, xj in enumerate(self.components):
            if not xj.is_zero:
                acc = acc + xj * f.diff(j)
        return acc

    def __eq__(self, other):
        return (isinstance(other, VectorField) and self.chart == other.chart
                and self.components == other.components)

    def __hash__(self):
        return hash((self.chart, self.components))

    def __str__(self):
        parts = [_frame_term(c, f"d{i + 1}")
                 for i, c in enumerate(self.components) if not c.is_zero]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorField({self})"


class KForm:
    """Degree-k differential form with ScalarField coefficients.

    coeffs maps strictly increasing index tuples of length k to nonzero
    ScalarFields; the zero form of any degree has empty coeffs.
    """

    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart, degree, coeffs):
        # degree > dim is permitted only for the identically-zero form, so
        # that d of a top-degree form still has honest degree k+1
        if degree < 0 or (degree > chart.dim and coeffs):
            raise ValueError("degree out of range for chart")
        clean = {}
        for idx, f in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree or any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} not strictly increasing "
                                 f"of length {degree}")
            if f.chart != chart:
                raise ChartMismatchError("coefficient on wrong chart")
            if not f.is_zero:
                clean[idx] = f
        self.chart = chart
        self.degree = degree
        self.coeffs = clean

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    @classmethod
    def from_scalar(cls, f):
        """Explicit embedding of a ScalarField as a degree-0 form."""
        return cls(f.chart, 0, {(): f})

    def as_scalar(self):
        if self.degree != 0:
            raise ValueError("not a degree-0 form")
        return self.coeffs.get((), ScalarField.zero(self.chart))

    @classmethod
    def basis(cls, chart, indices):
        """dx^{i1} ^ ... ^ dx^{ik} for an arbitrary index tuple."""
        idx, sign = sort_with_sign(indices)
        if sign == 0:
            return cls.zero(chart, len(indices))
        return cls(chart, len(indices),
                   {idx: ScalarField.constant(chart, sign)})

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, indices):
        """Coefficient for an arbitrary index tuple (antisymmetric lookup)."""
        idx, sign = sort_with_sign(indices)
        if sign == 0:
            return ScalarField.zero(self.chart)
        f = self.coeffs.get(idx)
        if f is None:
            return ScalarField.zero(self.chart)
        return f if sign == 1 else -f

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatchError("forms on different charts")
        if self.degree != other.degree:
            raise ValueError("forms of different degree")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for idx, f in other.coeffs.items():
            g = out.get(idx)
            s = f if g is None else g + f
            if s.is_zero:
                out.pop(idx, None)
            else:
                out[idx] = s
        return KForm(self.chart, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KForm(self.chart, self.degree,
                     {idx: -f for idx, f in self.coeffs.items()})

    def scale(self, f):
        if f.is_zero:
            return KForm.zero(self.chart, self.degree)
        return KForm(self.chart, self.degree,
                     {idx: f * g for idx, g in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, KForm) and self.chart == other.chart
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.chart, self.degree, tuple(sorted(self.coeffs))))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for idx in sorted(self.coeffs):
            basis = "^".join(f"e{i + 1}" for i in idx)
            if basis:
                parts.append(_frame_term(self.coeffs[idx], basis))
            else:
                parts.append(str(self.coeffs[idx]))
        return " + ".join(parts)

    def __repr__(self):
        return f"KForm({self})"


def exterior_d(omega: KForm) -> KForm:
    """Exterior derivative; d of a degree-k form has degree k+1, and d*d = 0."""
    chart = omega.chart
    out = {}
    for idx, f in omega.coeffs.items():
        for i in range(chart.dim):
            if i in idx:
                continue
            df = f.diff(i)
            if df.is_zero:
                continue
            new, sign = sort_with_sign((i,) + idx)
            term = df if sign == 1 else -df
            g = out.get(new)
            s = term if g is None else g + term
            if s.is_zero:
                out.pop(new, None)
            else:
                out[new] = s
    return KForm(chart, omega.degree + 1, out)


def interior(X: VectorField, omega: KForm) -> KForm:
    """Interior product iota_X omega (degree k-1); requires degree >= 1."""
    if omega.degree == 0:
        raise ValueError("interior product needs a form of degree >= 1")
    if X.chart != omega.chart:
        raise ChartMismatchError("vector field and form on different charts")
    out = {}
    for idx, f in omega.coeffs.items():
        for p, i in enumerate(idx):
            xi = X.components[i]
            if xi.is_zero:
                continue
            term = xi * f if p % 2 == 0 else -(xi * f)
            new = idx[:p] + idx[p + 1:]
            g = out.get(new)
            s = term if g is None else g + term
            if s.is_zero:
                out.pop(new, None)
            else:
                out[new] = s
    return KForm(omega.chart, omega.degree - 1, out)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^i = X^j dY^i/dx_j - Y^j dX^i/dx_j."""
    if X.chart != Y.chart:
        raise ChartMismatchError("vector fields on different charts")
    chart = X.chart
    comps = []
    for i in range(chart.dim):
        acc = ScalarField.zero(chart)
        for j in range(chart.dim):
            if not X.components[j].is_zero:
                acc = acc + X.components[j] * Y.components[i].diff(j)
            if not Y.components[j].is_zero:
                acc = acc - Y.components[j] * X.components[i].diff(j)
        comps.append(acc)
    return VectorField(chart, comps)


def lie_derivative(X: VectorField, omega: KForm) -> KForm:
    """Lie derivative by the direct coordinate formula.

    (L_X w)_I = X^j d w_I/dx_j + sum_p w_{I[p -> j]} d X^j / dx_{I[p]}.
    The Cartan-formula route is ``lie_derivative_cartan``; the two are
    asserted equal in the test suite, not assumed here.
    """
    if X.chart != omega.chart:
        raise ChartMismatchError("vector field and form on different charts")
    chart = X.chart
    if omega.degree == 0:
        return KForm.from_scalar(X.apply(omega.as_scalar()))
    out = KForm.zero(chart, omega.degree)
    for idx, f in omega.coeffs.items():
        # transport term
        term = {}
        acc = ScalarField.zero(chart)
        for j in range(chart.dim):
            if not X.components[j].is_zero:
                acc = acc + X.components[j] * f.diff(j)
        if not acc.is_zero:
            term[idx] = acc
        out = out + KForm(chart, omega.degree, term)
        # index-substitution terms: stored omega_S feeds target S[p -> t]
        # with factor dX^{S_p}/dx_t
        for p in range(len(idx)):
            comp = X.components[idx[p]]
            if comp.is_zero:
                continue
            for t in range(chart.dim):
                dX = comp.diff(t)
                if dX.is_zero:
                    continue
                new, sign = sort_with_sign(idx[:p] + (t,) + idx[p + 1:])
                if sign == 0:
                    continue
                coeff = f * dX if sign == 1 else -(f * dX)
                out = out + KForm(chart, omega.degree, {new: coeff})
    return out


def lie_derivative_cartan(X: VectorField, omega: KForm) -> KForm:
    """Cartan magic formula route: L_X = iota_X d + d iota_X."""
    if omega.degree == 0:
        return KForm.from_scalar(
            interior(X, exterior_d(omega)).as_scalar())
    return interior(X, exterior_d(omega)) + exterior_d(interior(X, omega))


def is_closed(omega: KForm) -> bool:
    return exterior_d(omega).is_zero
