# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled arithmetic kernel; a typed twin of pykernel with identical
semantics and data layout (see pykernel's module docstring).  Coefficients
stay arbitrary-precision Python ints, so results are bit-identical to the
pure backend."""

from math import gcd

C_ZERO = (0, 0, 1)
C_ONE = (1, 0, 1)
C_I = (0, 1, 1)


cpdef tuple c_make(a, b, d):
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


cpdef tuple c_add(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return c_make(a1 + a2, b1 + b2, d1)
    return c_make(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


cpdef tuple c_sub(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return c_make(a1 - a2, b1 - b2, d1)
    return c_make(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


cpdef tuple c_neg(tuple x):
    return (-x[0], -x[1], x[2])


cpdef tuple c_conj(tuple x):
    return (x[0], -x[1], x[2])


cpdef tuple c_mul(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return c_make(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)


cpdef tuple c_inv(tuple x):
    a, b, d = x
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero Gaussian rational")
    return c_make(a * d, -b * d, n)


cpdef dict p_add(dict p, dict q):
    cdef dict out
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


cpdef dict p_sub(dict p, dict q):
    cdef dict out
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


cpdef dict p_neg(dict p):
    return {m: (-c[0], -c[1], c[2]) for m, c in p.items()}


cpdef dict p_scale(dict p, tuple c):
    if c[0] == 0 and c[1] == 0:
        return {}
    if c == C_ONE:
        return dict(p)
    return {m: c_mul(x, c) for m, x in p.items()}


cpdef dict p_mul(dict p, dict q):
    cdef dict out = {}
    cdef Py_ssize_t i, n
    if not p or not q:
        return out
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            n = len(<tuple>m1)
            mm = [0] * n
            for i in range(n):
                mm[i] = (<tuple>m1)[i] + (<tuple>m2)[i]
            m = tuple(mm)
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


cpdef dict p_diff(dict p, Py_ssize_t i):
    cdef dict out = {}
    for m, c in p.items():
        e = (<tuple>m)[i]
        if e == 0:
            continue
        mm = (<tuple>m)[:i] + (e - 1,) + (<tuple>m)[i + 1:]
        cc = c_make(c[0] * e, c[1] * e, c[2])
        x = out.get(mm)
        if x is None:
            out[mm] = cc
        else:
            out[mm] = c_add(x, cc)
    return out


cpdef list sec_add(list A, list B):
    return [p_add(a, b) for a, b in zip(A, B)]


cpdef list sec_sub(list A, list B):
    return [p_sub(a, b) for a, b in zip(A, B)]


cpdef list sec_neg(list A):
    return [p_neg(a) for a in A]


cpdef bint sec_is_zero(list A):
    for a in A:
        if a:
            return False
    return True


cpdef list mat_apply_const(list M, list A):
    cdef list out = []
    cdef dict acc
    for row in M:
        acc = {}
        for j, c in <list>row:
            aj = A[j]
            if aj:
                acc = p_add(acc, p_scale(<dict>aj, <tuple>c))
        out.append(acc)
    return out


cpdef list mat_apply_poly(list M, list A):
    cdef list out = []
    cdef dict acc
    for row in M:
        acc = {}
        for j, pe in <list>row:
            aj = A[j]
            if aj:
                acc = p_add(acc, p_mul(<dict>pe, <dict>aj))
        out.append(acc)
    return out


cpdef list flux_contract(Py_ssize_t n, list X, list Y, dict H):
    cdef list out = [{} for _ in range(n)]
    cdef Py_ssize_t i, j, k
    for idx, h in H.items():
        i = (<tuple>idx)[0]
        j = (<tuple>idx)[1]
        k = (<tuple>idx)[2]
        xi, xj, xk = X[i], X[j], X[k]
        yi, yj, yk = Y[i], Y[j], Y[k]
        t = p_sub(p_mul(<dict>xi, <dict>yj), p_mul(<dict>xj, <dict>yi))
        if t:
            out[k] = p_add(<dict>out[k], p_mul(<dict>h, t))
        t = p_sub(p_mul(<dict>xk, <dict>yi), p_mul(<dict>xi, <dict>yk))
        if t:
            out[j] = p_add(<dict>out[j], p_mul(<dict>h, t))
        t = p_sub(p_mul(<dict>xj, <dict>yk), p_mul(<dict>xk, <dict>yj))
        if t:
            out[i] = p_add(<dict>out[i], p_mul(<dict>h, t))
    return out


cpdef list sec_dorfman(Py_ssize_t n, list A, list B, H=None):
    cdef list out = [None] * (2 * n)
    cdef list hpart
    cdef Py_ssize_t i, j
    cdef dict acc, d
    for i in range(n):
        acc = {}
        for j in range(n):
            xj = A[j]
            if xj:
                d = p_diff(<dict>B[i], j)
                if d:
                    acc = p_add(acc, p_mul(<dict>xj, d))
            yj = B[j]
            if yj:
                d = p_diff(<dict>A[i], j)
                if d:
                    acc = p_sub(acc, p_mul(<dict>yj, d))
        out[i] = acc
    for i in range(n):
        acc = {}
        for j in range(n):
            xj = A[j]
            if xj:
                d = p_diff(<dict>B[n + i], j)
                if d:
                    acc = p_add(acc, p_mul(<dict>xj, d))
            ej = B[n + j]
            if ej:
                d = p_diff(<dict>A[j], i)
                if d:
                    acc = p_add(acc, p_mul(<dict>ej, d))
            yj = B[j]
            if yj:
                d = p_diff(<dict>A[n + i], j)
                if d:
                    acc = p_sub(acc, p_mul(<dict>yj, d))
                d = p_diff(<dict>A[n + j], i)
                if d:
                    acc = p_add(acc, p_mul(<dict>yj, d))
        out[n + i] = acc
    if H:
        hpart = flux_contract(n, A, B, <dict>H)
        for i in range(n):
            if hpart[i]:
                out[n + i] = p_sub(<dict>out[n + i], <dict>hpart[i])
    return out


cpdef list sec_jacobi_residual(Py_ssize_t n, list A, list B, list C, H,
                               list AB, list AC, list BC):
    cdef list t1 = sec_dorfman(n, A, BC, H)
    cdef list t2 = sec_dorfman(n, AB, C, H)
    cdef list t3 = sec_dorfman(n, B, AC, H)
    return [p_sub(p_sub(a, b), c) for a, b, c in zip(t1, t2, t3)]
