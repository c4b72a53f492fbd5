# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython arithmetic kernel; mirrors pykernel.py operation for operation.

Scalars remain arbitrary-precision Python integer triples (a, b, d); the
speedup comes from compiled loop control, C-level tuple packing and the
removal of interpreter dispatch in the elimination inner loops."""

from math import gcd


T_ZERO = (0, 0, 1)
T_ONE = (1, 0, 1)


cpdef tuple t_norm(a, b, d):
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


cpdef tuple t_add(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return t_norm(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


cpdef tuple t_sub(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return t_norm(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


cpdef tuple t_mul(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return t_norm(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)


cpdef tuple t_neg(tuple x):
    return (-x[0], -x[1], x[2])


cpdef tuple t_inv(tuple x):
    a, b, d = x
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return t_norm(d * a, -d * b, n)


cpdef tuple t_div(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    n = a2 * a2 + b2 * b2
    if n == 0:
        raise ZeroDivisionError("division by zero")
    return t_norm((a1 * a2 + b1 * b2) * d2, (b1 * a2 - a1 * b2) * d2, d1 * n)


cdef inline bint _is_zero(tuple x):
    return x[0] == 0 and x[1] == 0


cpdef tuple mat_det(list rows, Py_ssize_t n):
    cdef Py_ssize_t k, i, j
    cdef int sign = 1
    cdef list m = [list(r) for r in rows]
    cdef list row_i, row_k
    prev = T_ONE
    for k in range(n - 1):
        if _is_zero(<tuple> (<list> m[k])[k]):
            for i in range(k + 1, n):
                if not _is_zero(<tuple> (<list> m[i])[k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return T_ZERO
        pivot = (<list> m[k])[k]
        row_k = <list> m[k]
        for i in range(k + 1, n):
            row_i = <list> m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                num = t_sub(t_mul(pivot, <tuple> row_i[j]), t_mul(lead, <tuple> row_k[j]))
                row_i[j] = t_div(num, prev)
            row_i[k] = T_ZERO
        prev = pivot
    det = (<list> m[n - 1])[n - 1]
    if sign < 0:
        det = t_neg(<tuple> det)
    return det


cpdef Py_ssize_t mat_rank(list rows, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef Py_ssize_t col, i, j, row = 0, pivot_row, rank = 0
    cdef list m = [list(r) for r in rows]
    cdef list row_r, row_i
    prev = T_ONE
    for col in range(ncols):
        pivot_row = -1
        for i in range(row, nrows):
            if not _is_zero(<tuple> (<list> m[i])[col]):
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        row_r = <list> m[row]
        pivot = row_r[col]
        for i in range(row + 1, nrows):
            row_i = <list> m[i]
            lead = row_i[col]
            for j in range(col + 1, ncols):
                num = t_sub(t_mul(pivot, <tuple> row_i[j]), t_mul(lead, <tuple> row_r[j]))
                row_i[j] = t_div(num, prev)
            row_i[col] = T_ZERO
        prev = pivot
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


cpdef tuple mat_rref(list rows, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef Py_ssize_t col, i, j, row = 0, pivot_row
    cdef list m = [list(r) for r in rows]
    cdef list pivots = []
    cdef list row_r, row_i, new_row
    for col in range(ncols):
        pivot_row = -1
        for i in range(row, nrows):
            if not _is_zero(<tuple> (<list> m[i])[col]):
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        row_r = <list> m[row]
        inv = t_inv(<tuple> row_r[col])
        for j in range(ncols):
            row_r[j] = t_mul(inv, <tuple> row_r[j])
        for i in range(nrows):
            if i != row:
                row_i = <list> m[i]
                if not _is_zero(<tuple> row_i[col]):
                    f = row_i[col]
                    for j in range(ncols):
                        row_i[j] = t_sub(<tuple> row_i[j], t_mul(f, <tuple> row_r[j]))
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return m, pivots


cpdef list mat_nullspace(list rows, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef Py_ssize_t free, r, k
    cdef list basis = [], vec
    if nrows == 0:
        for k in range(ncols):
            vec = [T_ZERO] * ncols
            vec[k] = T_ONE
            basis.append(vec)
        return basis
    m, pivots = mat_rref(rows, nrows, ncols)
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [T_ZERO] * ncols
        vec[free] = T_ONE
        for r in range(len(pivots)):
            vec[<Py_ssize_t> pivots[r]] = t_neg(<tuple> (<list> m[r])[free])
        basis.append(vec)
    return basis


cpdef mat_solve_affine(list rows, list rhs, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef Py_ssize_t i, r, free, k
    cdef list aug, particular, basis, vec
    if nrows == 0:
        basis = []
        for k in range(ncols):
            vec = [T_ZERO] * ncols
            vec[k] = T_ONE
            basis.append(vec)
        return [T_ZERO] * ncols, basis
    aug = [list(rows[i]) + [rhs[i]] for i in range(nrows)]
    m, pivots = mat_rref(aug, nrows, ncols + 1)
    if ncols in pivots:
        return None
    particular = [T_ZERO] * ncols
    for r in range(len(pivots)):
        particular[<Py_ssize_t> pivots[r]] = (<list> m[r])[ncols]
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [T_ZERO] * ncols
        vec[free] = T_ONE
        for r in range(len(pivots)):
            vec[<Py_ssize_t> pivots[r]] = t_neg(<tuple> (<list> m[r])[free])
        basis.append(vec)
    return particular, basis
