"""Builders for the concrete structures used by the verification suites.

Quaternion convention (fixed so every derived number is reproducible):

    I: (x1, x2, x3, x4) -> (-x2,  x1, -x4,  x3)
    J: (x1, x2, x3, x4) -> (-x3,  x4,  x1, -x2)
    K = I J:            -> (-x4, -x3,  x2,  x1)

so that I J = K and all three anticommute.  The Kahler-form coefficient
matrices are taken as Omega_i = mat(I_i), i.e. omega_i(X, Y) = g(X, I_i Y)
with g = Id; with this pairing the induced G = -I1 I2 I3 of the generalized
triple comes out as the flat generalized metric [[0, Id], [Id, 0]].
"""

from __future__ import annotations

from .scalar import Chart, ScalarField, standard_chart
from .courant import FluxForm
from .gcs import EndField, generalized_metric
from .clifford import CliffordTriple, check_relations


def _checked_triple(T: CliffordTriple) -> CliffordTriple:
    """Builders hand out structurally verified output."""
    rel = check_relations(T)
    if not rel.ok:
        raise AssertionError(f"builder produced a broken triple: "
                             f"{rel.failures}")
    from .clifford import TripleStatus
    return T.with_status(TripleStatus(rel, ()))

QUAT_I = ((0, -1, 0, 0),
          (1, 0, 0, 0),
          (0, 0, 0, -1),
          (0, 0, 1, 0))
QUAT_J = ((0, 0, -1, 0),
          (0, 0, 0, 1),
          (1, 0, 0, 0),
          (0, -1, 0, 0))
QUAT_K = ((0, 0, 0, -1),
          (0, 0, -1, 0),
          (0, 1, 0, 0),
          (1, 0, 0, 0))


def _const_matrix(chart, rows):
    return [[ScalarField.constant(chart, v) for v in row] for row in rows]


def _int_mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


def _int_mat_neg(A):
    return tuple(tuple(-v for v in row) for row in A)


def _int_transpose(A):
    return tuple(zip(*A))


def hyperkahler_r4() -> CliffordTriple:
    """The flat hyperkahler triple on R^4:
    I_i = [[0, -w_i^-1], [w_i, 0]] built from the three Kahler forms of the
    fixed quaternion convention."""
    chart = standard_chart(4)
    zero = [[ScalarField.zero(chart)] * 4 for _ in range(4)]
    gens = []
    for Q in (QUAT_I, QUAT_J, QUAT_K):
        omega = Q                      # Omega_i = mat(I_i); see module docstring
        omega_inv = _int_transpose(omega)   # Q orthogonal: Q^-1 = Q^T
        upper = _const_matrix(chart, _int_mat_neg(omega_inv))
        lower = _const_matrix(chart, omega)
        gens.append(EndField.from_blocks(chart, zero, upper, lower, zero))
    return _checked_triple(CliffordTriple(*gens))


def diag_type(Jmat, chart: Chart, flux: FluxForm | None = None) -> EndField:
    """[[J, 0], [0, -J^T]] from an n x n complex-structure matrix of ints."""
    n = chart.dim
    zero = [[ScalarField.zero(chart)] * n for _ in range(n)]
    upperleft = _const_matrix(chart, Jmat)
    lowerright = _const_matrix(chart, _int_mat_neg(_int_transpose(Jmat)))
    return EndField.from_blocks(chart, upperleft, zero, zero, lowerright, flux)


def clifford_hermitian(I1, I2, I3, chart: Chart | None = None) -> CliffordTriple:
    """Diag-type triple [[I_a, 0], [0, -I_a^T]] from three anticommuting
    complex-structure matrices (integer entries)."""
    n = len(I1)
    if chart is None:
        chart = standard_chart(n)
    for a, A in enumerate((I1, I2, I3)):
        sq = _int_mat_mul(A, A)
        if sq != tuple(tuple(-1 if i == j else 0 for j in range(n))
                       for i in range(n)):
            raise ValueError(f"I{a+1}^2 != -Id")
    for A, B in ((I1, I2), (I1, I3), (I2, I3)):
        s = _int_mat_mul(A, B)
        t = _int_mat_mul(B, A)
        if any(s[i][j] + t[i][j] for i in range(n) for j in range(n)):
            raise ValueError("matrices do not anticommute")
    return _checked_triple(
        CliffordTriple(*(diag_type(A, chart) for A in (I1, I2, I3))))


def _block_direct_sum(A, B):
    n, m = len(A), len(B)
    out = []
    for i in range(n):
        out.append(tuple(A[i]) + (0,) * m)
    for i in range(m):
        out.append((0,) * n + tuple(B[i]))
    return tuple(out)


def product_flip() -> CliffordTriple:
    """The product triple on R^8 = R^4 x R^4:
    I1 = J_I (+) J_I, I2 = J_J (+) J_J, I3 = J_K (+) (-J_K).

    Passes the Clifford relations but I3 != I1 I2 (verified entrywise by the
    tests); the flipped sign on the second factor is exactly what breaks the
    quaternion product identity while keeping anticommutation.
    """
    chart = standard_chart(8)
    m1 = _block_direct_sum(QUAT_I, QUAT_I)
    m2 = _block_direct_sum(QUAT_J, QUAT_J)
    m3 = _block_direct_sum(QUAT_K, _int_mat_neg(QUAT_K))
    return _checked_triple(
        CliffordTriple(*(diag_type(m, chart) for m in (m1, m2, m3))))


def generalized_metric_example(n: int = 2):
    """(g = Id, b = 0) metric on R^n plus a non-flat variant with a
    polynomial b (b = x1 dx1^dx2 for n >= 2)."""
    chart = standard_chart(n)
    one = ScalarField.one(chart)
    zero = ScalarField.zero(chart)
    g = [[one if i == j else zero for j in range(n)] for i in range(n)]
    b0 = [[zero] * n for _ in range(n)]
    flat = generalized_metric(g, b0, chart)
    if n < 2:
        return flat, None
    x1 = ScalarField.variable(chart, 0)
    b = [[zero] * n for _ in range(n)]
    b[0][1] = x1
    b[1][0] = -x1
    curved = generalized_metric(g, b, chart)
    return flat, curved


BUILTIN_TRIPLES = {
    "hyperkahler_r4": hyperkahler_r4,
    "product_flip": product_flip,
}


def build_named(name: str) -> CliffordTriple:
    try:
        return BUILTIN_TRIPLES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; "
                       f"available: {sorted(BUILTIN_TRIPLES)}") from None
