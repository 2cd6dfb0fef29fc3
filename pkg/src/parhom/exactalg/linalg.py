"""Rank, kernels, solving, homology of a pair and quotient presentations."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from ..errors import ComplexNotExactlyComposable
from .matrix import Matrix, check_size
from .rings import QQ, ZZ
from .snf import snf
from .sparse import SparseMatrix, rref_reduce


@dataclass(frozen=True)
class HomologySummary:
    betti: int
    torsion: tuple = ()
    ring: object = None

    def __str__(self):
        return self.pretty()

    def pretty(self):
        name = "Z" if self.ring is None else ("Z" if self.ring.kind == "Z" else
                                              self.ring.name)
        parts = []
        if self.betti == 1:
            parts.append(name)
        elif self.betti > 1:
            parts.append(f"{name}^{self.betti}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def as_dict(self):
        return {"betti": self.betti, "torsion": list(self.torsion)}


def _sparse(A):
    return A if isinstance(A, SparseMatrix) else SparseMatrix.from_dense(A)


def rank(A) -> int:
    """Rank over the fraction field of the ring."""
    return _sparse(A).rank()


def rref(A: Matrix):
    """Reduced row echelon form over a field: (R, pivot columns)."""
    if not A.ring.is_field:
        A = A.change_ring(QQ)
    pivots, residual = rref_reduce(A.ring, A.sparse_rows(), range(A.ncols))
    assert not residual
    cols = sorted(pivots)
    rows = [[pivots[c].get(j, 0) for j in range(A.ncols)] for c in cols]
    rows += [[0] * A.ncols for _ in range(A.nrows - len(cols))]
    return Matrix(A.ring, rows, A.ncols), cols


def _primitive(vec):
    """Clear denominators, divide by the content, make the first nonzero entry positive."""
    den = 1
    for x in vec:
        if type(x) is Fraction:
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def _saturate(ring, cols, n):
    """Z-basis of (Q-span of cols) intersected with Z^n."""
    if not cols:
        return cols
    K = Matrix.from_columns(ZZ, cols, n)
    U, D, V = snf(K)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i, i])
    if all(D[i, i] == 1 for i in range(r)):
        return cols
    Uinv = inverse(U)
    return [Uinv.col(j) for j in range(r)]


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of ker A; over Z the saturated integer kernel."""
    ring = A.ring
    work = QQ if ring == ZZ else ring
    pivots, residual = rref_reduce(work, A.change_ring(work).sparse_rows() if ring == ZZ
                                   else A.sparse_rows(), range(A.ncols))
    assert not residual
    free = [j for j in range(A.ncols) if j not in pivots]
    cols = []
    for f in free:
        v = [0] * A.ncols
        v[f] = 1
        for c, row in pivots.items():
            x = row.get(f)
            if x:
                v[c] = work.norm(-x)
        cols.append(v)
    if ring == ZZ:
        cols = [_primitive(v) for v in cols]
        if any(not all(type(x) is int for x in v) for v in cols):
            raise AssertionError("non-integer kernel vector")
        cols = _saturate(ring, cols, A.ncols)
    return Matrix.from_columns(ring, cols, A.ncols) if cols else Matrix.zeros(ring, A.ncols, 0)


def column_basis(A: Matrix) -> Matrix:
    """A basis of the column span (over Z: of the lattice generated by the columns)."""
    if A.ring.is_field:
        _, piv = rref(A)
        return A.submatrix(cols=piv)
    U, D, V = snf(A)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i, i])
    AV = A @ V
    return AV.submatrix(cols=range(r))


def inverse(A: Matrix) -> Matrix:
    n = A.nrows
    if A.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    X = solve(A, Matrix.identity(A.ring, n))
    if X is None:
        raise ZeroDivisionError("matrix is not invertible over its ring")
    return X


def solve(A: Matrix, B: Matrix):
    """Some X with A X = B, or None if no solution exists over the ring."""
    ring = A.ring
    if ring == ZZ:
        U, D, V = snf(A)
        UB = U @ B
        r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i, i])
        Y = [[0] * B.ncols for _ in range(A.ncols)]
        for i in range(A.nrows):
            for j in range(B.ncols):
                x = UB[i, j]
                if i < r:
                    d = D[i, i]
                    if x % d:
                        return None
                    Y[i][j] = x // d
                elif x:
                    return None
        return V @ Matrix(ZZ, Y, B.ncols)
    aug = A.hstack(B)
    pivots, residual = rref_reduce(ring, aug.sparse_rows(), range(A.ncols))
    for row in residual:
        if row:
            return None
    X = [[0] * B.ncols for _ in range(A.ncols)]
    for c, row in pivots.items():
        for j in range(B.ncols):
            X[c][j] = row.get(A.ncols + j, 0)
    return Matrix(ring, X, B.ncols)


def in_span(A: Matrix, B: Matrix) -> bool:
    """Whether every column of B lies in the span (lattice over Z) of A's columns."""
    if B.ncols == 0:
        return True
    if A.ncols == 0:
        return B.is_zero()
    return solve(A, B) is not None


def same_span(A: Matrix, B: Matrix) -> bool:
    return in_span(A, B) and in_span(B, A)


def intersect_spans(A: Matrix, B: Matrix) -> Matrix:
    """Basis of span(A) ∩ span(B) for column bases A, B (lattice intersection over Z)."""
    n = A.nrows
    if A.ncols == 0 or B.ncols == 0:
        return Matrix.zeros(A.ring, n, 0)
    K = kernel_basis(A.hstack(-B))
    X = K.submatrix(rows=range(A.ncols))
    return column_basis(A @ X) if K.ncols else Matrix.zeros(A.ring, n, 0)


def homology_of_pair(d_in, d_out) -> HomologySummary:
    """ker(d_out) / im(d_in) for d_in: C' -> C and d_out: C -> C''."""
    d_in, d_out = _sparse(d_in), _sparse(d_out)
    if d_in.nrows != d_out.ncols:
        raise ComplexNotExactlyComposable(
            f"d_in has {d_in.nrows} rows but d_out has {d_out.ncols} columns")
    if d_in.ring != d_out.ring:
        raise ComplexNotExactlyComposable("rings differ")
    if not (d_out @ d_in).is_zero():
        raise ComplexNotExactlyComposable("d_out * d_in is not zero")
    dim = d_in.nrows
    r_out = d_out.rank()
    r_in, torsion = d_in.rank_and_invariants()
    return HomologySummary(dim - r_out - r_in, tuple(torsion), d_in.ring)


@dataclass
class QuotientPresentation:
    """coker(relators) with a section/projection pair when it is free.

    ``basis`` lists ambient coordinates whose classes form the quotient basis
    when the residual is empty (always over a field); ``projection`` maps an
    ambient vector to quotient coordinates.
    """
    ring: object
    ambient: int
    free_rank: int
    torsion: tuple
    section: Matrix = None
    basis: list = None
    _pivots: dict = None
    _residual_map: Matrix = None

    def project_sparse(self, vec):
        """Quotient coordinates of an ambient vector given as a dict."""
        if self._pivots is None:
            raise ValueError("quotient has torsion; no projection available")
        ring = self.ring
        acc = {}
        for c, x in vec.items():
            row = self._pivots.get(c)
            if row is None:
                acc[c] = acc.get(c, 0) + x
            else:
                for k, y in row.items():
                    if k != c:
                        acc[k] = acc.get(k, 0) - x * y
        if self._residual_map is None:
            pos = self._npos
            return {pos[k]: ring.norm(v) for k, v in acc.items() if ring.norm(v)}
        full = [0] * len(self._nonpivot)
        for k, v in acc.items():
            full[self._npos[k]] += v
        out = self._residual_map.apply(full)
        return {i: x for i, x in enumerate(out) if x}

    def project(self, vec):
        d = self.project_sparse({i: x for i, x in enumerate(vec) if x})
        return tuple(d.get(i, 0) for i in range(self.free_rank))

    def projection_matrix(self):
        cols = [self.project_sparse({j: 1}) for j in range(self.ambient)]
        return Matrix.from_sparse_columns(self.ring, cols, self.free_rank)


def quotient_from_rows(ring, ambient, relators):
    """Quotient presentation from relator vectors given as dicts."""
    order = range(ambient - 1, -1, -1)   # eliminate late coordinates first
    pivots, residual = rref_reduce(ring, relators, order)
    nonpivot = [j for j in range(ambient) if j not in pivots]
    q = QuotientPresentation(ring, ambient, 0, ())
    q._nonpivot = nonpivot
    q._npos = {c: i for i, c in enumerate(nonpivot)}
    if not residual:
        q.free_rank = len(nonpivot)
        q.basis = nonpivot
        q._pivots = pivots
        q.section = Matrix.from_sparse_columns(ring, [{c: 1} for c in nonpivot], ambient)
        return q
    # only reachable over Z: finish the non-unit part with a Smith form
    check_size(len(residual), len(nonpivot), "residual relator block")
    R = Matrix.from_sparse_columns(ZZ, [{q._npos[c]: v for c, v in r.items()}
                                        for r in residual], len(nonpivot))
    U, D, V = snf(R)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i, i])
    q.torsion = tuple(D[i, i] for i in range(r) if D[i, i] != 1)
    q.free_rank = len(nonpivot) - r
    if not q.torsion:
        q._pivots = pivots
        q._residual_map = U.submatrix(rows=range(r, len(nonpivot)))
        Uinv = inverse(U)
        cols = []
        for j in range(r, len(nonpivot)):
            cols.append({nonpivot[i]: x for i, x in enumerate(Uinv.col(j)) if x})
        q.section = Matrix.from_sparse_columns(ZZ, cols, ambient)
    return q


def quotient_presentation(relators: Matrix) -> QuotientPresentation:
    """Presentation of coker(relators); relator vectors are the columns."""
    return quotient_from_rows(relators.ring, relators.nrows, relators.sparse_columns())
