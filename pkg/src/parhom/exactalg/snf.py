"""Smith normal form over the integers.

Pivot rule: the nonzero entry of smallest absolute value in the active
submatrix, ties broken by (row, col).  Entries are Python ints, so there is
no overflow however large intermediate values get.
"""

from .matrix import Matrix
from .rings import ZZ


def _pick(a, t, m, n):
    best = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x:
                k = (abs(x), i, j)
                if best is None or k < best:
                    best = k
                    if k[0] == 1:
                        return best
    return best


def _smith(a, track):
    """In-place reduction of the list-of-lists ``a``; returns (U, V) if tracking."""
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
    t = 0
    while t < min(m, n):
        best = _pick(a, t, m, n)
        if best is None:
            break
        _, i, j = best
        if i != t:
            a[t], a[i] = a[i], a[t]
            if track:
                U[t], U[i] = U[i], U[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            if track:
                for row in V:
                    row[t], row[j] = row[j], row[t]
        p = a[t][t]
        dirty = False
        rt = a[t]
        for i in range(t + 1, m):
            x = a[i][t]
            if x:
                q = x // p
                ri = a[i]
                for k in range(t, n):
                    if rt[k]:
                        ri[k] -= q * rt[k]
                if track:
                    ui, ut = U[i], U[t]
                    for k in range(m):
                        if ut[k]:
                            ui[k] -= q * ut[k]
                if ri[t]:
                    dirty = True
        for j in range(t + 1, n):
            x = rt[j]
            if x:
                q = x // p
                for row in a:
                    if row[t]:
                        row[j] -= q * row[t]
                if track:
                    for row in V:
                        if row[t]:
                            row[j] -= q * row[t]
                if rt[j]:
                    dirty = True
        if dirty:
            continue
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            ri = a[bad]
            for k in range(t, n):
                rt[k] += ri[k]
            if track:
                ub, ut = U[bad], U[t]
                for k in range(m):
                    ut[k] += ub[k]
            continue
        t += 1
    for i in range(min(m, n)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            if track:
                U[i] = [-x for x in U[i]]
    return U, V


def snf(A: Matrix):
    """Return (U, D, V) with U A V = D, U and V unimodular, D in Smith form."""
    if A.ring != ZZ:
        raise ValueError("snf requires an integer matrix")
    a = A.tolist()
    U, V = _smith(a, track=True)
    return (Matrix._raw(ZZ, tuple(map(tuple, U)), A.nrows),
            Matrix._raw(ZZ, tuple(map(tuple, a)), A.ncols),
            Matrix._raw(ZZ, tuple(map(tuple, V)), A.ncols))


def smith_invariants(rows):
    """Nonzero diagonal of the Smith form of a dense list-of-lists integer matrix."""
    a = [list(r) for r in rows]
    _smith(a, track=False)
    out = []
    for i in range(min(len(a), len(a[0]) if a else 0)):
        if a[i][i]:
            out.append(a[i][i])
    return out


def invariant_factors(A: Matrix):
    """Nonzero invariant factors (including 1s) of an integer matrix."""
    return tuple(smith_invariants(A.tolist())) if A.nrows and A.ncols else ()
