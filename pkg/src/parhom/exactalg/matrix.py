"""Dense exact matrices."""

from ..errors import MatrixTooLarge, RingMismatch

MAX_ENTRIES = 5_000_000


def check_size(nrows: int, ncols: int, what: str = "matrix"):
    if nrows * ncols > MAX_ENTRIES:
        raise MatrixTooLarge(
            f"{what} of shape {nrows}x{ncols} exceeds {MAX_ENTRIES} entries")


class Matrix:
    """Immutable dense matrix over a Ring, stored row-major as tuples."""

    __slots__ = ("ring", "nrows", "ncols", "_rows")

    def __init__(self, ring, rows, ncols=None):
        rows = tuple(tuple(ring.norm(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        check_size(len(rows), ncols)
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols
        self._rows = rows

    @classmethod
    def _raw(cls, ring, rows, ncols):
        # trusted constructor: rows already canonical tuples
        m = object.__new__(cls)
        m.ring, m.nrows, m.ncols, m._rows = ring, len(rows), ncols, rows
        return m

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        check_size(nrows, ncols)
        return cls._raw(ring, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, ring, n):
        check_size(n, n)
        return cls._raw(ring, tuple(tuple(1 if i == j else 0 for j in range(n))
                                    for i in range(n)), n)

    @classmethod
    def from_columns(cls, ring, cols, nrows):
        cols = [list(c) for c in cols]
        return cls(ring, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def from_sparse_columns(cls, ring, cols, nrows):
        """Columns given as dicts {row: value}."""
        check_size(nrows, len(cols))
        rows = [[0] * len(cols) for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, v in col.items():
                rows[i][j] = v
        return cls(ring, rows, len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        return [x for r in self._rows for x in r]

    def rows(self):
        return self._rows

    def row(self, i):
        return self._rows[i]

    def col(self, j):
        return tuple(r[j] for r in self._rows)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def sparse_columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cols

    def sparse_rows(self):
        return [{j: x for j, x in enumerate(r) if x} for r in self._rows]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def tolist(self):
        return [list(r) for r in self._rows]

    def _same(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return True

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.ring, self.nrows, self.ncols, self._rows))

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        n = self.ring.norm
        return Matrix._raw(self.ring, tuple(
            tuple(n(a + b) for a, b in zip(r, s))
            for r, s in zip(self._rows, other._rows)), self.ncols)

    def __neg__(self):
        n = self.ring.norm
        return Matrix._raw(self.ring, tuple(tuple(n(-a) for a in r) for r in self._rows),
                           self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring(c)
        n = self.ring.norm
        return Matrix._raw(self.ring, tuple(tuple(n(c * a) for a in r) for r in self._rows),
                           self.ncols)

    def __matmul__(self, other):
        self._same(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        check_size(self.nrows, other.ncols)
        n = self.ring.norm
        orows = [[(j, x) for j, x in enumerate(r) if x] for r in other._rows]
        out = []
        for r in self._rows:
            acc = [0] * other.ncols
            for k, a in enumerate(r):
                if a:
                    for j, x in orows[k]:
                        acc[j] += a * x
            out.append(tuple(n(x) for x in acc))
        return Matrix._raw(self.ring, tuple(out), other.ncols)

    def apply(self, vec):
        """Matrix times a vector given as a sequence."""
        n = self.ring.norm
        return tuple(n(sum(a * b for a, b in zip(r, vec) if a)) for r in self._rows)

    @property
    def T(self):
        return Matrix._raw(self.ring, tuple(zip(*self._rows)) if self.nrows else
                           tuple(() for _ in range(self.ncols)), self.nrows)

    def is_zero(self):
        return not any(any(r) for r in self._rows)

    def is_identity(self):
        return self.nrows == self.ncols and all(
            x == (1 if i == j else 0) for i, r in enumerate(self._rows) for j, x in enumerate(r))

    def submatrix(self, rows=None, cols=None):
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        return Matrix._raw(self.ring, tuple(tuple(self._rows[i][j] for j in cols) for i in rows),
                           len(cols))

    def hstack(self, *others):
        mats = (self,) + others
        for m in others:
            self._same(m)
            if m.nrows != self.nrows:
                raise ValueError("row count mismatch in hstack")
        ncols = sum(m.ncols for m in mats)
        check_size(self.nrows, ncols)
        return Matrix._raw(self.ring, tuple(
            sum((m._rows[i] for m in mats), ()) for i in range(self.nrows)), ncols)

    def vstack(self, *others):
        for m in others:
            self._same(m)
            if m.ncols != self.ncols:
                raise ValueError("column count mismatch in vstack")
        rows = self._rows + sum((m._rows for m in others), ())
        check_size(len(rows), self.ncols)
        return Matrix._raw(self.ring, rows, self.ncols)

    def change_ring(self, ring):
        return Matrix(ring, self._rows, self.ncols)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix<{self.ring}>({self.nrows}x{self.ncols}: [{body}])"


def block_diag(ring, blocks):
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = [[0] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows()):
            rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(ring, rows, m)


def kron(a, b):
    """Kronecker product a (x) b, row index (i, k) -> i * b.nrows + k."""
    ring = a.ring
    rows = []
    for ra in a.rows():
        for rb in b.rows():
            rows.append([x * y for x in ra for y in rb])
    return Matrix(ring, rows, a.ncols * b.ncols)
