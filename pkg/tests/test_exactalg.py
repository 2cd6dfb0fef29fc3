import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from parhom.errors import ComplexNotExactlyComposable, MatrixTooLarge, ValidationError
from parhom.exactalg import (GF, QQ, ZZ, Matrix, SparseMatrix, homology_of_pair, inverse,
                             kernel_basis, parse_ring, quotient_presentation, rank, snf, solve)


def det(rows):
    """Fraction Gaussian elimination; independent of the library."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def determinantal_invariants(rows):
    """Invariant factors via gcds of k x k minors: d_1...d_k = D_k."""
    m, n = len(rows), len(rows[0])
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, int(det([[rows[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def mod_rank(rows, p):
    a = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] * inv
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


int_matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def diag_of(D):
    return [D[i, i] for i in range(min(D.shape)) if D[i, i]]


def test_ring_parsing():
    assert parse_ring("Z") == ZZ and parse_ring("q") == QQ
    assert parse_ring("GF3") == GF(3) and parse_ring("GF(5)") == GF(5)
    with pytest.raises(ValidationError):
        parse_ring("GF4")
    assert QQ("3/6") == Fraction(1, 2) and QQ("4/2") == 2 and type(QQ("4/2")) is int
    assert GF(5)("1/2") == 3
    with pytest.raises(ValidationError):
        ZZ("1/2")


def test_snf_examples():
    U, D, V = snf(Matrix(ZZ, [[2, 4], [6, 8]]))
    assert diag_of(D) == [2, 4]
    assert determinantal_invariants([[2, 4], [6, 8]]) == [2, 4]
    U, D, V = snf(Matrix.zeros(ZZ, 2, 2))
    assert D.is_zero()
    U, D, V = snf(Matrix.identity(ZZ, 3))
    assert diag_of(D) == [1, 1, 1]


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_snf_properties(rows):
    A = Matrix(ZZ, rows)
    U, D, V = snf(A)
    assert U @ A @ V == D
    assert abs(det(U.tolist())) == 1 and abs(det(V.tolist())) == 1
    for i in range(D.nrows):
        for j in range(D.ncols):
            if i != j:
                assert D[i, j] == 0
    d = diag_of(D)
    assert all(x > 0 for x in d)
    assert all(d[k + 1] % d[k] == 0 for k in range(len(d) - 1))
    if A.nrows <= 4 and A.ncols <= 4:
        assert d == determinantal_invariants(rows)
    # deterministic
    assert snf(A) == (U, D, V)


@settings(max_examples=100, deadline=None)
@given(int_matrices, st.sampled_from([QQ, GF(2), GF(3), ZZ]))
def test_rank_nullity_and_kernel(rows, ring):
    A = Matrix(ring, rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    r = rank(A)
    assert r + K.ncols == A.ncols
    if ring.kind == "GF":
        assert r == mod_rank(rows, ring.p)
    if ring == ZZ and K.ncols:
        _, D, _ = snf(K)
        assert diag_of(D) == [1] * K.ncols


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(QQ, 2)).shape == (2, 0)
    K = kernel_basis(Matrix(QQ, [[1, 1]]))
    assert K.shape == (2, 1) and K[0, 0] == -K[1, 0] != 0
    assert kernel_basis(Matrix(ZZ, [[2, 4], [6, 8]])).shape == (2, 0)
    # saturation: kernel of [2, 4] over Z is spanned by (-2, 1), not (-4, 2)
    K = kernel_basis(Matrix(ZZ, [[2, 4]]))
    assert sorted(abs(x) for x in K.col(0)) == [1, 2]


@settings(max_examples=60, deadline=None)
@given(int_matrices)
def test_sparse_rank_matches_mod_p_and_rational(rows):
    for ring in (GF(2), GF(3)):
        assert SparseMatrix.from_dense(Matrix(ring, rows)).rank() == mod_rank(rows, ring.p)
    r, tors = SparseMatrix.from_dense(Matrix(ZZ, rows)).rank_and_invariants()
    inv = determinantal_invariants(rows) if len(rows) <= 4 and len(rows[0]) <= 4 else None
    if inv is not None:
        assert r == len(inv)
        assert list(tors) == [d for d in inv if d != 1]


def test_homology_of_pair_examples():
    h = homology_of_pair(Matrix(ZZ, [[2]]), Matrix.zeros(ZZ, 0, 1))
    assert (h.betti, h.torsion) == (0, (2,))
    h = homology_of_pair(Matrix.zeros(QQ, 3, 0), Matrix.zeros(QQ, 0, 3))
    assert (h.betti, h.torsion) == (3, ())
    ident = Matrix.identity(QQ, 3)
    h = homology_of_pair(ident, Matrix.zeros(QQ, 0, 3))
    assert (h.betti, h.torsion) == (0, ())
    with pytest.raises(ComplexNotExactlyComposable):
        homology_of_pair(ident, ident)
    with pytest.raises(ComplexNotExactlyComposable):
        homology_of_pair(Matrix.identity(QQ, 2), ident)


def test_quotient_presentation_examples():
    q = quotient_presentation(Matrix.zeros(ZZ, 3, 0))
    assert (q.free_rank, q.torsion) == (3, ())
    q = quotient_presentation(Matrix(ZZ, [[2]]))
    assert (q.free_rank, q.torsion) == (0, (2,))
    q = quotient_presentation(Matrix(ZZ, [[2], [2], [2]]))
    assert (q.free_rank, q.torsion) == (2, (2,))
    # free quotient through a non-unit residual: Z^2 / (2, 3)
    q = quotient_presentation(Matrix(ZZ, [[2], [3]]))
    assert (q.free_rank, q.torsion) == (1, ())
    P = q.projection_matrix()
    assert (P @ Matrix(ZZ, [[2], [3]])).is_zero()
    assert (P @ q.section).is_identity()


@settings(max_examples=80, deadline=None)
@given(int_matrices, st.sampled_from([QQ, GF(3), ZZ]))
def test_quotient_projection_kills_relators(rows, ring):
    R = Matrix(ring, rows)
    q = quotient_presentation(R)
    assert q.free_rank == R.nrows - rank(R) or ring == ZZ and q.torsion
    if q.section is not None:
        P = q.projection_matrix()
        assert (P @ R).is_zero()
        assert (P @ q.section).is_identity()


def test_solve_and_inverse():
    A = Matrix(ZZ, [[2, 1], [1, 1]])
    assert (A @ inverse(A)).is_identity()
    assert solve(Matrix(ZZ, [[2]]), Matrix(ZZ, [[3]])) is None
    assert solve(Matrix(QQ, [[2]]), Matrix(QQ, [[3]])) == Matrix(QQ, [[Fraction(3, 2)]])


def test_guardrail():
    with pytest.raises(MatrixTooLarge):
        Matrix.zeros(QQ, 3000, 2000)
