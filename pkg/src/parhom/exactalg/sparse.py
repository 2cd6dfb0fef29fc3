"""Sparse exact elimination.

Bar-complex differentials and globalization relators are very sparse (a few
nonzeros per column, mostly +-1), so everything that only needs ranks,
invariant factors or a reduced echelon form goes through the row-dict
eliminator below.  Pivots are always units of the ring; over Z whatever
cannot be reduced by unit pivots is returned as a small dense residual for the
Smith normal form.
"""

import heapq
from fractions import Fraction

from .matrix import Matrix, check_size


def _axpy(ring, target, f, src):
    """target += f * src, in place, dropping zeros.  Returns (added, removed) column sets."""
    added, removed = [], []
    p = ring.modulus
    for c, v in src.items():
        old = target.get(c)
        if old is None:
            x = f * v
            if p is not None:
                x %= p
            elif type(x) is Fraction and x.denominator == 1:
                x = x.numerator
            if x:
                target[c] = x
                added.append(c)
        else:
            x = old + f * v
            if p is not None:
                x %= p
            elif type(x) is Fraction and x.denominator == 1:
                x = x.numerator
            if x:
                target[c] = x
            else:
                del target[c]
                removed.append(c)
    return added, removed


def _build_index(rows):
    colidx = {}
    for rid, row in enumerate(rows):
        for c in row:
            s = colidx.get(c)
            if s is None:
                colidx[c] = {rid}
            else:
                s.add(rid)
    return colidx


def rank_reduce(ring, rows):
    """Eliminate unit pivots with a Markowitz-style rule.

    ``rows`` is an iterable of dicts {col: value}; they are copied.  Returns
    (number of pivots, residual rows).  The residual contains no unit entries,
    so it is empty over a field.  Rank and invariant factors are unchanged
    by the unimodular operations used.
    """
    rows = [dict(r) for r in rows if r]
    colidx = _build_index(rows)
    alive = [True] * len(rows)
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    is_unit = ring.is_unit
    npiv = 0
    while heap:
        ln, rid = heapq.heappop(heap)
        if not alive[rid]:
            continue
        row = rows[rid]
        if len(row) != ln:
            continue
        if not row:
            alive[rid] = False
            continue
        best = None
        for c, v in row.items():
            if is_unit(v):
                key = (len(colidx[c]), c)
                if best is None or key < best[0]:
                    best = (key, c, v)
        if best is None:
            continue  # revisited if a later update changes this row
        _, c, v = best
        alive[rid] = False
        for c2 in row:
            colidx[c2].discard(rid)
        inv = ring.inv(v)
        for other in sorted(colidx.pop(c)):
            orow = rows[other]
            f = -orow[c] * inv
            added, removed = _axpy(ring, orow, f, row)
            for c2 in added:
                s = colidx.get(c2)
                if s is None:
                    colidx[c2] = {other}
                else:
                    s.add(other)
            for c2 in removed:
                if c2 != c:
                    colidx[c2].discard(other)
            heapq.heappush(heap, (len(orow), other))
        npiv += 1
    residual = [rows[i] for i in range(len(rows)) if alive[i] and rows[i]]
    return npiv, residual


def rref_reduce(ring, rows, col_order):
    """Gauss-Jordan elimination with unit pivots taken in ``col_order``.

    Returns (pivots, residual) where pivots maps a pivot column to its row
    (pivot entry 1, zero in every other pivot column) and residual rows have
    no entries in pivot columns.  Passes over the columns repeat until no new
    unit pivot appears, which only matters over Z.
    """
    rows = [dict(r) for r in rows if r]
    colidx = _build_index(rows)
    is_pivot_row = [False] * len(rows)
    pivots = {}
    order = [c for c in col_order]
    while True:
        progress = False
        remaining = []
        for c in order:
            cand = colidx.get(c)
            best = None
            if cand:
                for rid in cand:
                    if is_pivot_row[rid]:
                        continue
                    v = rows[rid][c]
                    if ring.is_unit(v):
                        key = (len(rows[rid]), rid)
                        if best is None or key < best:
                            best = key
            if best is None:
                remaining.append(c)
                continue
            rid = best[1]
            row = rows[rid]
            inv = ring.inv(row[c])
            if inv != 1:
                for k in row:
                    row[k] = ring.norm(row[k] * inv)
            for other in sorted(colidx[c]):
                if other == rid:
                    continue
                orow = rows[other]
                added, removed = _axpy(ring, orow, -orow[c], row)
                for c2 in added:
                    s = colidx.get(c2)
                    if s is None:
                        colidx[c2] = {other}
                    else:
                        s.add(other)
                for c2 in removed:
                    colidx[c2].discard(other)
            is_pivot_row[rid] = True
            pivots[c] = row
            progress = True
        order = remaining
        if not progress or not order:
            break
    residual = [rows[i] for i in range(len(rows)) if not is_pivot_row[i] and rows[i]]
    return pivots, residual


class SparseMatrix:
    """Matrix stored as a list of sparse columns {row: value}."""

    __slots__ = ("ring", "nrows", "ncols", "cols")

    def __init__(self, ring, nrows, cols):
        self.ring = ring
        self.nrows = nrows
        self.cols = cols
        self.ncols = len(cols)

    @classmethod
    def from_dense(cls, m):
        return cls(m.ring, m.nrows, m.sparse_columns())

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def to_dense(self):
        check_size(self.nrows, self.ncols)
        return Matrix.from_sparse_columns(self.ring, self.cols, self.nrows)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        p = self.ring.modulus
        for col in other.cols:
            acc = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            if p is not None:
                acc = {i: x % p for i, x in acc.items() if x % p}
            else:
                acc = {i: self.ring.norm(x) for i, x in acc.items() if x}
            out.append(acc)
        return SparseMatrix(self.ring, self.nrows, out)

    def is_zero(self):
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.cols == other.cols)

    def rank(self):
        """Rank over the ring's fraction field."""
        from .rings import QQ
        if self.ring.is_field:
            npiv, residual = rank_reduce(self.ring, self.cols)
            return npiv
        npiv, residual = rank_reduce(self.ring, self.cols)
        if not residual:
            return npiv
        npiv2, _ = rank_reduce(QQ, residual)
        return npiv + npiv2

    def rank_and_invariants(self):
        """(rank, torsion invariant factors >= 2); torsion is empty over a field."""
        npiv, residual = rank_reduce(self.ring, self.cols)
        if self.ring.is_field or not residual:
            return npiv, ()
        from .snf import smith_invariants
        cols = sorted({c for r in residual for c in r})
        pos = {c: i for i, c in enumerate(cols)}
        check_size(len(residual), len(cols), "SNF residual")
        dense = [[0] * len(cols) for _ in residual]
        for i, r in enumerate(residual):
            for c, v in r.items():
                dense[i][pos[c]] = v
        inv = smith_invariants(dense)
        return npiv + len(inv), tuple(d for d in inv if d != 1)
