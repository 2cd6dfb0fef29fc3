"""Bar complexes for global and partial (co)homology and the comparison drivers.

Chains of the partial complex live in K_par G^{⊗_B n} ⊗_B M.  Because
[g]⊗_B m = [g]⊗_B e_{g^-1}m, the summand indexed by a word (g_1, …, g_n) is
ε_w·M with ε_w = ε([g_1]…[g_n]), not all of M.  Faces are evaluated
symbolically in S(G) and the result is pushed back into normal form by moving
idempotents rightwards across ⊗_B.  For a global module every ε_w acts as the
identity and the complex coincides with the usual bar complex.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import MatrixTooLarge, TheoremViolation, ValidationError
from .exactalg import HomologySummary, SparseMatrix
from .glob import globalize, hom_intertwiners, induce_from_subgroup
from .parmod import ParRepModule
from .parsemigroup import semigroup

MAX_CHAIN_DIM = 300_000
MAX_NNZ = 5_000_000


@dataclass
class ChainComplex:
    """C_top -> … -> C_1 -> C_0 with ``diffs[n]``: C_n -> C_{n-1} as sparse matrices."""
    ring: object
    dims: list
    diffs: list
    labels: list = field(default_factory=list)
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def top(self):
        return len(self.dims) - 1

    def check(self):
        for n in range(2, len(self.diffs)):
            if not (self.diffs[n - 1] @ self.diffs[n]).is_zero():
                raise ValidationError(f"d_{n - 1} d_{n} is not zero")
        return self

    def _reduce(self, n):
        out = self._ranks.get(n)
        if out is None:
            if n <= 0 or n > self.top:
                out = (0, ())
            else:
                out = self.diffs[n].rank_and_invariants()
            self._ranks[n] = out
        return out

    def homology(self, n) -> HomologySummary:
        if n >= self.top:
            raise ValidationError(f"H_{n} needs the complex up to degree {n + 1}")
        r_out, _ = self._reduce(n)
        r_in, tors = self._reduce(n + 1)
        return HomologySummary(self.dims[n] - r_out - r_in, tors, self.ring)

    def homology_list(self, n_max):
        return [self.homology(n) for n in range(n_max + 1)]


@dataclass
class CochainComplex:
    """C^0 -> C^1 -> … with ``diffs[n]``: C^n -> C^{n+1}."""
    ring: object
    dims: list
    diffs: list
    labels: list = field(default_factory=list)
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def top(self):
        return len(self.dims) - 1

    def check(self):
        for n in range(1, len(self.diffs)):
            if not (self.diffs[n] @ self.diffs[n - 1]).is_zero():
                raise ValidationError(f"δ^{n} δ^{n - 1} is not zero")
        return self

    def _reduce(self, n):
        out = self._ranks.get(n)
        if out is None:
            out = self.diffs[n].rank_and_invariants() if 0 <= n < len(self.diffs) else (0, ())
            self._ranks[n] = out
        return out

    def cohomology(self, n) -> HomologySummary:
        if n >= self.top:
            raise ValidationError(f"H^{n} needs the complex up to degree {n + 1}")
        r_out, _ = self._reduce(n)
        r_in, tors = self._reduce(n - 1)
        return HomologySummary(self.dims[n] - r_out - r_in, tors, self.ring)

    def cohomology_list(self, n_max):
        return [self.cohomology(n) for n in range(n_max + 1)]


# --- assembly helpers -----------------------------------------------------------------

def _words(G, n):
    return list(itertools.product(G.elements, repeat=n))


def _guard_dim(n, dim):
    """Chain spaces are bounded by |G|^n · rank; refuse before building anything."""
    if dim > MAX_CHAIN_DIM:
        raise MatrixTooLarge(f"chain space in degree {n} has dimension {dim} "
                             f"(limit {MAX_CHAIN_DIM}); lower the maximal degree")


def _assemble(ring, nrows, blocks, n):
    """Sparse matrix from per-source-column lists of (row offset, sparse column, sign)."""
    cols = []
    nnz = 0
    neg = ring.norm
    for entries in blocks:
        acc = {}
        for off, col, sign in entries:
            for i, x in col.items():
                k = off + i
                acc[k] = acc.get(k, 0) + sign * x
        col = {k: neg(v) for k, v in acc.items() if neg(v)}
        nnz += len(col)
        cols.append(col)
    if nnz > MAX_NNZ:
        raise MatrixTooLarge(f"differential in degree {n} has {nnz} nonzeros (limit {MAX_NNZ})")
    return SparseMatrix(ring, nrows, cols)


# --- global bar complexes -------------------------------------------------------------

def global_bar_complex(N, n_max) -> ChainComplex:
    """Unnormalized bar complex computing H_•(G, N) for a left G-module N, degrees 0..n_max."""
    if N.side != "left":
        raise ValidationError("homology needs a left module")
    G, ring, r = N.G, N.ring, N.rank
    mul = G.mul
    _guard_dim(n_max, G.order ** n_max * r)
    dims, diffs, labels = [], [SparseMatrix(ring, 0, [{} for _ in range(r)])], []
    index = {}
    for n in range(n_max + 1):
        dim = G.order ** n * r
        dims.append(dim)
        words = _words(G, n)
        index[n] = {w: i * r for i, w in enumerate(words)}
        labels.append([(w, j) for w in words for j in range(r)])
        if n == 0:
            continue
        prev = index[n - 1]
        blocks = []
        for w in words:
            faces = [(1, w[1:], None)]
            for i in range(1, n):
                faces.append(((-1) ** i, w[:i - 1] + (mul(w[i - 1], w[i]),) + w[i + 1:], None))
            faces.append(((-1) ** n, w[:-1], w[-1]))
            for j in range(r):
                entries = []
                for sign, w2, g in faces:
                    col = {j: 1} if g is None else N.sparse(g).cols[j]
                    entries.append((prev[w2], col, sign))
                blocks.append(entries)
        diffs.append(_assemble(ring, dims[n - 1], blocks, n))
    return ChainComplex(ring, dims, diffs, labels).check()


def global_cochain_complex(M, n_max) -> CochainComplex:
    """Unnormalized cochains computing H^•(G, M) for a right G-module M (m·g = π(g)m)."""
    if M.side != "right":
        raise ValidationError("cohomology needs a right module")
    G, ring, r = M.G, M.ring, M.rank
    mul = G.mul
    _guard_dim(n_max, G.order ** n_max * r)
    dims, diffs, labels = [], [], []
    for n in range(n_max + 1):
        dim = G.order ** n * r
        dims.append(dim)
        labels.append([(w, j) for w in _words(G, n) for j in range(r)])
    for n in range(n_max):
        src = {w: i * r for i, w in enumerate(_words(G, n))}
        # row-wise: (δf)(w) for w of length n+1; build transposed, then flip
        rows = []
        for w in _words(G, n + 1):
            faces = [(1, w[1:], None)]
            for i in range(1, n + 1):
                faces.append(((-1) ** i, w[:i - 1] + (mul(w[i - 1], w[i]),) + w[i + 1:], None))
            faces.append(((-1) ** (n + 1), w[:-1], w[-1]))
            for j in range(r):
                entries = []
                for sign, w2, g in faces:
                    if g is None:
                        entries.append((src[w2], {j: 1}, sign))
                    else:
                        row = M.pi[g].row(j)
                        entries.append((src[w2], {k: x for k, x in enumerate(row) if x}, sign))
                rows.append(entries)
        T = _assemble(ring, dims[n], rows, n + 1)
        diffs.append(_transpose(T))
    return CochainComplex(ring, dims, diffs, labels).check()


def _transpose(S: SparseMatrix) -> SparseMatrix:
    cols = [{} for _ in range(S.nrows)]
    for j, col in enumerate(S.cols):
        for i, x in col.items():
            cols[i][j] = x
    return SparseMatrix(S.ring, S.ncols, cols)


# --- partial bar complexes ------------------------------------------------------------

@lru_cache(maxsize=None)
def _partial_faces(G, w):
    """Faces of [g_1]⊗_B…⊗_B[g_n]⊗_B 1 as (sign, word, trailing element of S(G))."""
    sg = semigroup(G)
    n = len(w)
    z = [sg.bracket(g) for g in w] + [sg.one]
    out = []
    for i in range(n + 1):
        if i == 0:
            f = [sg.mul(sg.epsilon(z[0]), z[1])] + z[2:]
        else:
            f = z[:i - 1] + [sg.mul(z[i - 1], z[i])] + z[i + 1:]
        word = []
        carry = sg.one
        for t in f[:-1]:
            h, carry = sg.split(sg.mul(carry, t))
            word.append(h)
        out.append(((-1) ** i, tuple(word), sg.mul(carry, f[-1])))
    return tuple(out)


def _eps_word(sg, w):
    return sg.epsilon(sg.normalize(w))


class _Pieces:
    """Per-word bases of ε_w·M (left) or M·ε_w (right), cached on the module."""

    def __init__(self, M):
        self.M = M
        self.sg = semigroup(M.G)
        self.cache = {}

    def get(self, w):
        out = self.cache.get(w)
        if out is None:
            B, L = self.M.image(_eps_word(self.sg, w))
            out = self.cache[w] = (SparseMatrix.from_dense(B), SparseMatrix.from_dense(L))
        return out

    def layout(self, n):
        offs, total = {}, 0
        for w in _words(self.M.G, n):
            offs[w] = total
            total += self.get(w)[0].ncols
        return offs, total


def partial_bar_complex(M: ParRepModule, n_max) -> ChainComplex:
    """Complex computing H_•^par(G, M) for a left partial representation, degrees 0..n_max."""
    if M.side != "left":
        raise ValidationError("partial homology needs a left module")
    G, ring = M.G, M.ring
    pieces = _Pieces(M)
    dims, labels, layouts = [], [], []
    _guard_dim(n_max, G.order ** n_max * M.rank)
    for n in range(n_max + 1):
        offs, total = pieces.layout(n)
        dims.append(total)
        layouts.append(offs)
        labels.append([(w, j) for w in offs for j in range(pieces.get(w)[0].ncols)])
    diffs = [SparseMatrix(ring, 0, [{} for _ in range(dims[0])])]
    for n in range(1, n_max + 1):
        prev = layouts[n - 1]
        blocks = []
        for w in layouts[n]:
            Bw, _ = pieces.get(w)
            if not Bw.ncols:
                continue
            faces = []
            for sign, w2, s in _partial_faces(G, w):
                _, L2 = pieces.get(w2)
                faces.append((prev[w2], sign, L2 @ (M.act(s) @ Bw)))
            for j in range(Bw.ncols):
                blocks.append([(off, mat.cols[j], sign) for off, sign, mat in faces])
        diffs.append(_assemble(ring, dims[n - 1], blocks, n))
    return ChainComplex(ring, dims, diffs, labels).check()


def partial_cochain_complex(M: ParRepModule, n_max) -> CochainComplex:
    """Cochains computing H^•_par(G, M) for a right partial representation.

    A cochain on words of length n is a family f(w) ∈ M·ε_w; for a word w of
    length n+1 each face gives ±[w']⊗s and contributes ±f(w')·s, read back in
    the coordinates of M·ε_w.
    """
    if M.side != "right":
        raise ValidationError("partial cohomology needs a right module")
    G, ring = M.G, M.ring
    pieces = _Pieces(M)
    dims, labels, layouts = [], [], []
    _guard_dim(n_max, G.order ** n_max * M.rank)
    for n in range(n_max + 1):
        offs, total = pieces.layout(n)
        dims.append(total)
        layouts.append(offs)
        labels.append([(w, j) for w in offs for j in range(pieces.get(w)[0].ncols)])
    diffs = []
    for n in range(n_max):
        src = layouts[n]
        rows = []
        for w in layouts[n + 1]:
            _, Lw = pieces.get(w)
            if not Lw.nrows:
                continue
            faces = []
            for sign, w2, s in _partial_faces(G, w):
                B2, _ = pieces.get(w2)
                block = Lw @ (M.act(s) @ B2)       # rows: M·ε_w coords, cols: M·ε_{w'} coords
                faces.append((src[w2], sign, _transpose(block)))
            for i in range(Lw.nrows):
                rows.append([(off, mat.cols[i], sign) for off, sign, mat in faces])
        T = _assemble(ring, dims[n], rows, n + 1)
        diffs.append(_transpose(T))
    return CochainComplex(ring, dims, diffs, labels).check()


# --- comparison drivers ---------------------------------------------------------------

@dataclass
class ComparisonReport:
    kind: str
    left: list             # HomologySummary per degree
    right: list
    labels: tuple = ("partial", "global")

    @property
    def ok(self):
        return all(a.betti == b.betti and a.torsion == b.torsion
                   for a, b in zip(self.left, self.right))

    def __bool__(self):
        return self.ok

    def rows(self):
        out = []
        for n, (a, b) in enumerate(zip(self.left, self.right)):
            for side, s in zip(self.labels, (a, b)):
                out.append({"degree": n, "betti": s.betti, "torsion": list(s.torsion),
                            "side": side})
        return out

    def mismatches(self):
        return [n for n, (a, b) in enumerate(zip(self.left, self.right))
                if (a.betti, a.torsion) != (b.betti, b.torsion)]


def _finish(report, what):
    if not report.ok:
        raise TheoremViolation(f"{what}: the two sides differ in degree(s) "
                               f"{report.mismatches()}", report)
    return report


def partial_homology(M, n_max):
    return partial_bar_complex(M, n_max + 1).homology_list(n_max)


def partial_cohomology(M, n_max):
    return partial_cochain_complex(M, n_max + 1).cohomology_list(n_max)


def global_homology(N, n_max):
    return global_bar_complex(N, n_max + 1).homology_list(n_max)


def global_cohomology(N, n_max):
    return global_cochain_complex(N, n_max + 1).cohomology_list(n_max)


def compare_homology(M: ParRepModule, n_max=3) -> ComparisonReport:
    """H_•^par(G, M) against H_•(G, Λ(M)), degreewise."""
    Lam = globalize(M).module
    rep = ComparisonReport("homology", partial_homology(M, n_max), global_homology(Lam, n_max))
    return _finish(rep, f"homology of {M.label}")


def compare_cohomology(M: ParRepModule, n_max=3) -> ComparisonReport:
    """H^•_par(G, M) against H^•(G, Hom(Λ(K_par G), M)), degreewise."""
    H = hom_intertwiners(M).as_module()
    rep = ComparisonReport("cohomology", partial_cohomology(M, n_max),
                           global_cohomology(H, n_max))
    return _finish(rep, f"cohomology of {M.label}")


def shapiro_check(G, S, M: ParRepModule, n_max=2) -> ComparisonReport:
    """H_•^par(S, M) against H_•(G, KG ⊗_{S_par} M)."""
    Ind = induce_from_subgroup(G, S, M)
    rep = ComparisonReport("shapiro", partial_homology(M, n_max), global_homology(Ind, n_max),
                           ("subgroup-partial", "induced-global"))
    return _finish(rep, f"Shapiro for {M.label}")
