"""Pure-Python arithmetic kernel.

This module is the reference implementation of the hot kernels; the Cython
twin (``_ckernel.pyx``) compiles the same code with typed loop variables.
``gencliff._core`` picks whichever is available at import time.

Data layout (shared by both kernels, never mix layouts between them):

  coefficient  (a, b, d)   the Gaussian rational (a + b*i)/d with d > 0 and
                           gcd(a, b, d) = 1; exact arbitrary-precision ints.
  polynomial   dict mapping dense exponent tuples to coefficients; the zero
               polynomial is the empty dict, zero coefficients are never
               stored.
  section      list of 2n polynomials (n vector components then n covector
               components) over an n-coordinate chart.
  flux         dict mapping strictly increasing index triples (i, j, k) to
               polynomials (the coefficient of dx^i ^ dx^j ^ dx^k).
  matrix       list of 2n rows; constant matrices store rows as lists of
               (column, coefficient) pairs, polynomial matrices as lists of
               (column, polynomial) pairs.  Zero entries are omitted.

All functions are pure: inputs are never mutated.
"""

from math import gcd

C_ZERO = (0, 0, 1)
C_ONE = (1, 0, 1)
C_I = (0, 1, 1)


def c_make(a, b, d):
    """Normalize (a + b*i)/d into canonical triple form (d may be signed)."""
    if a == 0 and b == 0:
        return C_ZERO
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


def c_add(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return c_make(a1 + a2, b1 + b2, d1)
    return c_make(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


def c_sub(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return c_make(a1 - a2, b1 - b2, d1)
    return c_make(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


def c_neg(x):
    a, b, d = x
    return (-a, -b, d)


def c_conj(x):
    a, b, d = x
    return (a, -b, d)


def c_mul(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return c_make(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)


def c_inv(x):
    a, b, d = x
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero Gaussian rational")
    return c_make(a * d, -b * d, n)


def p_add(p, q):
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    out = dict(p)
    for m, c in q.items():
        x = out.get(m)
        if x is None:
            out[m] = c
        else:
            s = c_add(x, c)
            if s[0] == 0 and s[1] == 0:
                del out[m]
            else:
                out[m] = s
    return out


def p_sub(p, q):
    if not q:
        return dict(p)
    out = dict(p)
    for m, c in q.items():
        x = out.get(m)
        if x is None:
            out[m] = (-c[0], -c[1], c[2])
        else:
            s = c_sub(x, c)
            if s[0] == 0 and s[1] == 0:
                del out[m]
            else:
                out[m] = s
    return out


def p_neg(p):
    return {m: (-c[0], -c[1], c[2]) for m, c in p.items()}


def p_scale(p, c):
    if c[0] == 0 and c[1] == 0:
        return {}
    if c == C_ONE:
        return dict(p)
    return {m: c_mul(x, c) for m, x in p.items()}


def p_mul(p, q):
    if not p or not q:
        return {}
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            c = c_mul(c1, c2)
            x = out.get(m)
            if x is None:
                out[m] = c
            else:
                s = c_add(x, c)
                if s[0] == 0 and s[1] == 0:
                    del out[m]
                else:
                    out[m] = s
    return out


def p_diff(p, i):
    out = {}
    for m, c in p.items():
        e = m[i]
        if e == 0:
            continue
        mm = m[:i] + (e - 1,) + m[i + 1:]
        cc = c_make(c[0] * e, c[1] * e, c[2])
        x = out.get(mm)
        if x is None:
            out[mm] = cc
        else:
            # distinct source monomials cannot collide after one decrement
            out[mm] = c_add(x, cc)
    return out


def sec_add(A, B):
    return [p_add(a, b) for a, b in zip(A, B)]


def sec_sub(A, B):
    return [p_sub(a, b) for a, b in zip(A, B)]


def sec_neg(A):
    return [p_neg(a) for a in A]


def sec_is_zero(A):
    for a in A:
        if a:
            return False
    return True


def mat_apply_const(M, A):
    """Apply a constant sparse matrix (rows of (col, coeff)) to a section."""
    out = []
    for row in M:
        acc = {}
        for j, c in row:
            aj = A[j]
            if aj:
                acc = p_add(acc, p_scale(aj, c))
        out.append(acc)
    return out


def mat_apply_poly(M, A):
    """Apply a polynomial sparse matrix (rows of (col, poly)) to a section."""
    out = []
    for row in M:
        acc = {}
        for j, pe in row:
            aj = A[j]
            if aj:
                acc = p_add(acc, p_mul(pe, aj))
        out.append(acc)
    return out


def flux_contract(n, X, Y, H):
    """1-form components of iota_Y iota_X H for stored triples i<j<k."""
    out = [{} for _ in range(n)]
    for (i, j, k), h in H.items():
        xi, xj, xk = X[i], X[j], X[k]
        yi, yj, yk = Y[i], Y[j], Y[k]
        # coeff of dx^k: h*(X^i Y^j - X^j Y^i), of dx^j: h*(X^k Y^i - X^i Y^k),
        # of dx^i: h*(X^j Y^k - X^k Y^j)
        t = p_sub(p_mul(xi, yj), p_mul(xj, yi))
        if t:
            out[k] = p_add(out[k], p_mul(h, t))
        t = p_sub(p_mul(xk, yi), p_mul(xi, yk))
        if t:
            out[j] = p_add(out[j], p_mul(h, t))
        t = p_sub(p_mul(xj, yk), p_mul(xk, yj))
        if t:
            out[i] = p_add(out[i], p_mul(h, t))
    return out


def sec_dorfman(n, A, B, H=None):
    """Dorfman bracket of polynomial sections, optionally H-twisted.

    [X+xi, Y+eta] = [X,Y] + L_X eta - iota_Y d xi - iota_Y iota_X H with
      [X,Y]^i      = sum_j X^j dY^i/dx_j - Y^j dX^i/dx_j
      (L_X eta)_i  = sum_j X^j d eta_i/dx_j + eta_j dX^j/dx_i
      (i_Y dxi)_i  = sum_j Y^j (d xi_i/dx_j - d xi_j/dx_i)
    """
    out = [None] * (2 * n)
    for i in range(n):
        acc = {}
        for j in range(n):
            xj = A[j]
            if xj:
                d = p_diff(B[i], j)
                if d:
                    acc = p_add(acc, p_mul(xj, d))
            yj = B[j]
            if yj:
                d = p_diff(A[i], j)
                if d:
                    acc = p_sub(acc, p_mul(yj, d))
        out[i] = acc
    for i in range(n):
        acc = {}
        for j in range(n):
            xj = A[j]
            if xj:
                d = p_diff(B[n + i], j)
                if d:
                    acc = p_add(acc, p_mul(xj, d))
            ej = B[n + j]
            if ej:
                d = p_diff(A[j], i)
                if d:
                    acc = p_add(acc, p_mul(ej, d))
            yj = B[j]
            if yj:
                d = p_diff(A[n + i], j)
                if d:
                    acc = p_sub(acc, p_mul(yj, d))
                d = p_diff(A[n + j], i)
                if d:
                    acc = p_add(acc, p_mul(yj, d))
        out[n + i] = acc
    if H:
        hpart = flux_contract(n, A, B, H)
        for i in range(n):
            if hpart[i]:
                out[n + i] = p_sub(out[n + i], hpart[i])
    return out


def sec_jacobi_residual(n, A, B, C, H, AB, AC, BC):
    """[A,[B,C]] - [[A,B],C] - [B,[A,C]] given the cached inner brackets."""
    t1 = sec_dorfman(n, A, BC, H)
    t2 = sec_dorfman(n, AB, C, H)
    t3 = sec_dorfman(n, B, AC, H)
    return [p_sub(p_sub(a, b), c) for a, b, c in zip(t1, t2, t3)]
