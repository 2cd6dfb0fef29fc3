"""Partial tensor products, the globalization Λ(M) = KG ⊗_{G_par} M and its checks.

Ambient tensor products X ⊗ Y use the basis (a, c) -> a * rank(Y) + c.  For
KG ⊗ M that means (k, i) -> k * rank(M) + i, so ⌊1, m_i⌋ is coordinate i.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (ConstructionFailed, NonFreeGlobalization, NonSaturatedDomain,
                     RingMismatch, ValidationError)
from .exactalg import (ZZ, Matrix, check_size, column_basis, in_span, intersect_spans,
                       inverse, kernel_basis, quotient_from_rows, quotient_presentation,
                       rank, same_span, solve)
from .exactalg.snf import invariant_factors
from .parmod import ParRepModule, PartialActionModule, induced_partial_action
from .parsemigroup import SElem, semigroup


class GlobalModule(ParRepModule):
    """A genuine representation of G; ``provenance`` keeps the quotient it came from."""

    def __init__(self, G, ring, action, side="left", label="", provenance=None):
        super().__init__(G, ring, action, side, label)
        self.provenance = provenance

    @property
    def action(self):
        return self.pi

    def check_group_law(self):
        G = self.G
        P = self.sparse
        for g in G.elements:
            for h in G.elements:
                lhs = P(g) @ P(h)
                gh = G.mul(g, h) if self.side == "left" else G.mul(h, g)
                if lhs != P(gh):
                    raise ValidationError(f"not a group action at ({G.name(g)}, {G.name(h)})")
        if not self.pi[0].is_identity():
            raise ValidationError("identity does not act as the identity")
        return self


def as_global(M: ParRepModule) -> GlobalModule:
    """View a module whose partial representation is a genuine one as a GlobalModule."""
    if isinstance(M, GlobalModule):
        return M
    return GlobalModule(M.G, M.ring, M.pi, M.side, M.label).check_group_law()


# --- relator families -----------------------------------------------------------------

def _cols(m: Matrix):
    return m.sparse_columns()


def _kron_cols(A, C, nc):
    """Sparse columns of kron(A, C) from sparse column lists; nc = rows of C."""
    out = []
    for a in A:
        for c in C:
            col = {}
            for i, x in a.items():
                base = i * nc
                for k, y in c.items():
                    col[base + k] = x * y
            out.append(col)
    return out


def _sub(ring, u, v):
    out = dict(u)
    for k, y in v.items():
        x = ring.norm(out.get(k, 0) - y)
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def _check_saturated(mod):
    if mod.ring == ZZ and isinstance(mod, PartialActionModule):
        for g, D in enumerate(mod.domains):
            if D.ncols and any(d != 1 for d in invariant_factors(D)):
                raise NonSaturatedDomain(f"domain of {mod.G.name(g)} is not a direct summand; "
                                         f"use field coefficients")


def _right_factors(X, g):
    """(A, B): relator x-part is A's column for (x)β_g and B's for x, over a common index."""
    if isinstance(X, ParRepModule):
        return _cols(X.pi[g]), X.idem(g).cols
    D = X.domains
    return _cols(D[g] @ X.maps[g]), _cols(D[X.G.inv[g]])


def _left_factors(Y, g):
    """(C, D): relator y-part is C's column for y and D's for α_g(y)."""
    if isinstance(Y, ParRepModule):
        return Y.idem(Y.G.inv[g]).cols, _cols(Y.pi[g])
    D = Y.domains
    return _cols(D[Y.G.inv[g]]), _cols(D[g] @ Y.maps[g])


def tensor_relators(X, Y):
    """Generators of K_{β,α} in X ⊗ Y, zero columns dropped."""
    ring = X.ring
    ny = Y.rank
    rels = []
    seen = set()
    for g in X.G.elements:
        A, B = _right_factors(X, g)
        C, D = _left_factors(Y, g)
        for col in map(lambda p: _sub(ring, *p), zip(_kron_cols(A, C, ny), _kron_cols(B, D, ny))):
            if col:
                key = tuple(sorted(col.items()))
                if key not in seen:
                    seen.add(key)
                    rels.append(col)
    return rels


@dataclass
class TensorPresentation:
    ambient_rank: int
    relators: list          # sparse columns in the ambient
    result: object          # QuotientPresentation

    @property
    def rank(self):
        return self.result.free_rank

    @property
    def torsion(self):
        return self.result.torsion

    def relator_matrix(self):
        return Matrix.from_sparse_columns(self.result.ring, self.relators, self.ambient_rank)


def partial_tensor(X, Y) -> TensorPresentation:
    """X ⊗_{G_par} Y for X a right and Y a left partial module (actions or representations)."""
    if X.ring != Y.ring:
        raise RingMismatch(f"{X.ring} vs {Y.ring}")
    if X.G.order != Y.G.order:
        raise ValidationError("modules over different groups")
    if X.side != "right" or Y.side != "left":
        raise ValidationError("partial tensor needs a right module on the left and a left "
                              "module on the right")
    _check_saturated(X)
    _check_saturated(Y)
    n = X.rank * Y.rank
    rels = tensor_relators(X, Y)
    return TensorPresentation(n, rels, quotient_from_rows(X.ring, n, rels))


def group_algebra_right(G, ring):
    """KG as a right G-module by right translation."""
    from .parmod import global_regular_module
    return global_regular_module(G, ring, "right")


# --- globalization --------------------------------------------------------------------

class Globalization(NamedTuple):
    module: GlobalModule
    iota: Matrix
    tau: object        # Matrix or None


def _translate(G, r, col, h):
    out = {}
    for c, x in col.items():
        k, i = divmod(c, r)
        out[G.mul(h, k) * r + i] = x
    return out


def _global_quotient(G, ring, r, rels, label):
    n = G.order * r
    check_size(n, n, "globalization ambient")
    q = quotient_from_rows(ring, n, rels)
    if q.torsion:
        raise NonFreeGlobalization(
            f"the globalization over Z has torsion {q.torsion}; use Q or GF(p) coefficients")
    sec = q.section.sparse_columns()
    action = []
    for h in G.elements:
        cols = [q.project_sparse(_translate(G, r, s, h)) for s in sec]
        action.append(Matrix.from_sparse_columns(ring, cols, q.free_rank))
    Lam = GlobalModule(G, ring, action, "left", label, provenance=q)
    return Lam, q


def globalize(M) -> Globalization:
    """Λ(M) = KG ⊗_{G_par} M with ι(m) = ⌊1, m⌋ and, for representations, τ⌊g, x⌋ = [g]x."""
    if M.side != "left":
        raise ValidationError("globalize expects a left module")
    _check_saturated(M)
    G, ring, r = M.G, M.ring, M.rank
    rels = tensor_relators(group_algebra_right(G, ring), M)
    Lam, q = _global_quotient(G, ring, r, rels, f"Λ({M.label})")
    Lam.check_group_law()
    iota = Matrix.from_sparse_columns(ring, [q.project_sparse({i: 1}) for i in range(r)],
                                      q.free_rank)
    tau = None
    if isinstance(M, ParRepModule):
        T = _tau_ambient(M)
        R = Matrix.from_sparse_columns(ring, rels, G.order * r)
        if not (T @ R).is_zero():
            raise ConstructionFailed("τ does not vanish on the relators")
        tau = T @ q.section
        if not (tau @ iota).is_identity():
            raise ConstructionFailed("τ∘ι is not the identity")
    return Globalization(Lam, iota, tau)


def _tau_ambient(M):
    """KG ⊗ M -> M, (k, i) -> π(k) e_i."""
    cols = []
    for k in M.G.elements:
        cols.extend(_cols(M.pi[k]))
    return Matrix.from_sparse_columns(M.ring, cols, M.rank)


def iota_kernel(glob: Globalization) -> Matrix:
    return kernel_basis(glob.iota)


def induce_from_subgroup(G, S, M: ParRepModule) -> GlobalModule:
    """KG ⊗_{S_par} M for an S-partial representation M (S given as a Subgroup)."""
    H = S.as_group()
    if M.G.order != H.order:
        raise ValidationError("module is not over the subgroup")
    ring, r = M.ring, M.rank
    sg = semigroup(H)
    rels, seen = [], set()
    for sl in H.elements:
        s = S.embed(sl)
        Einv = M.act(sg.e(H.inv[sl])).cols
        P = _cols(M.pi[sl])
        for g in G.elements:
            gs = G.mul(g, s)
            for i in range(r):
                col = {gs * r + k: x for k, x in Einv[i].items()}
                col = _sub(ring, col, {g * r + k: x for k, x in P[i].items()})
                if col:
                    key = tuple(sorted(col.items()))
                    if key not in seen:
                        seen.add(key)
                        rels.append(col)
    Lam, _ = _global_quotient(G, ring, r, rels, f"Ind({M.label})")
    return Lam.check_group_law()


# --- verification ---------------------------------------------------------------------

@dataclass
class GlobalizationReport:
    injective: bool
    restriction: bool
    spans: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.injective and self.restriction and self.spans

    def __bool__(self):
        return self.ok


def verify_globalization(M, action, iota: Matrix, relators: Matrix = None) -> GlobalizationReport:
    """Check that (W, ι) globalizes M, where W is the ambient lattice modulo ``relators``.

    ``action`` lists one matrix per group element on the ambient (or is a
    GlobalModule).  Conditions: ι injective; ι(M_g) = ι(M) ∩ Θ_g ι(M) with
    Θ_g ι = ι α_g on M_{g^-1}; and the translates Θ_g ι(M) span W.
    """
    if isinstance(M, ParRepModule):
        M = induced_partial_action(M)
    mats = list(action.pi if isinstance(action, ParRepModule) else action)
    G, ring = M.G, M.ring
    n = iota.nrows
    R = relators if relators is not None else Matrix.zeros(ring, n, 0)
    fails = []

    # (1) ι(m) ∈ N forces m = 0
    K = kernel_basis(iota.hstack(R))
    injective = K.submatrix(rows=range(iota.ncols)).is_zero()
    if not injective:
        fails.append("ι is not injective")

    # (2) restriction
    image = iota.hstack(R)
    restriction = True
    for g in G.elements:
        gi = G.inv[g]
        moved = (mats[g] @ iota).hstack(R)
        both = intersect_spans(image, moved)
        dom = (iota @ M.domains[g]).hstack(R)
        if not same_span(both, dom):
            restriction = False
            fails.append(f"ι(M_{G.name(g)}) differs from ι(M) ∩ Θ_g ι(M)")
            continue
        src = M.domains[gi]
        if src.ncols:
            lhs = mats[g] @ iota @ src
            rhs = iota @ M.domains[g] @ M.maps[g]
            diff = lhs - rhs
            agrees = in_span(R, diff) if R.ncols else diff.is_zero()
            if not agrees:
                restriction = False
                fails.append(f"Θ_{G.name(g)} ι ≠ ι α_{G.name(g)}")

    # (3) W is spanned by the translates
    allcols = [mats[g] @ iota for g in G.elements] + [R]
    span = allcols[0].hstack(*allcols[1:])
    spans = in_span(span, Matrix.identity(ring, n))
    if not spans:
        fails.append("the translates of ι(M) do not span W")
    return GlobalizationReport(injective, restriction, spans, fails)


# --- exactness ------------------------------------------------------------------------

@dataclass
class ShortExactSequence:
    A: ParRepModule
    B: ParRepModule
    C: ParRepModule
    f: Matrix       # A -> B
    g: Matrix       # B -> C


def _is_module_map(X, Y, f):
    return all(f @ X.pi[k] == Y.pi[k] @ f for k in X.G.elements)


def _exact_at(f, g):
    """im f = ker g, f injective, g surjective (lattice statements over Z)."""
    ring = f.ring
    if not (g @ f).is_zero():
        return False
    if f.ncols and not kernel_basis(f).ncols == 0:
        return False
    if g.nrows and not in_span(g, Matrix.identity(ring, g.nrows)):
        return False
    K = kernel_basis(g)
    if f.ncols == 0:
        return K.ncols == 0
    return same_span(K, f)


def invariant_span(M: ParRepModule, cols: Matrix) -> Matrix:
    """Basis of the submodule generated by the given columns."""
    sg = semigroup(M.G)
    gens = []
    for z in sg.elements():
        gens.append(M.act(z).to_dense() @ cols)
    return column_basis(gens[0].hstack(*gens[1:]))


def submodule_sequence(B: ParRepModule, cols: Matrix) -> ShortExactSequence:
    """0 -> A -> B -> B/A -> 0 for the submodule A generated by ``cols``."""
    S = invariant_span(B, cols)
    ring = B.ring
    piA = [solve(S, p @ S) for p in B.pi]
    A = ParRepModule(B.G, ring, piA, B.side, f"sub({B.label})")
    q = quotient_presentation(S)
    if q.torsion:
        raise ValidationError("quotient has torsion")
    P = q.projection_matrix()
    piC = [P @ p @ q.section for p in B.pi]
    C = ParRepModule(B.G, ring, piC, B.side, f"quot({B.label})")
    return ShortExactSequence(A, B, C, S, P)


def split_sequence(A: ParRepModule, C: ParRepModule, Q: Matrix) -> ShortExactSequence:
    """0 -> A -> Q(A ⊕ C)Q^-1 -> C -> 0."""
    from .parmod import conjugate, direct_sum
    B = conjugate(direct_sum(A, C), Q)
    Qi = inverse(Q)
    a = A.rank
    f = Q.submatrix(cols=range(a))
    g = Qi.submatrix(rows=range(a, Q.nrows))
    return ShortExactSequence(A, B, C, f, g)


def globalize_map(G, fmat: Matrix, src: Globalization, dst: Globalization) -> Matrix:
    """Λ(f) in the quotient bases."""
    qs, qd = src.module.provenance, dst.module.provenance
    r_src, r_dst = fmat.ncols, fmat.nrows
    fcols = fmat.sparse_columns()
    out = []
    for s in qs.section.sparse_columns():
        amb = {}
        for c, x in s.items():
            k, i = divmod(c, r_src)
            for j, y in fcols[i].items():
                key = k * r_dst + j
                amb[key] = amb.get(key, 0) + x * y
        out.append(qd.project_sparse({k: v for k, v in amb.items() if v}))
    return Matrix.from_sparse_columns(fmat.ring, out, qd.free_rank)


@dataclass
class ExactnessReport:
    input_exact: bool
    maps_equivariant: bool
    image_exact: bool
    ranks: tuple

    @property
    def ok(self):
        return self.input_exact and self.maps_equivariant and self.image_exact

    def __bool__(self):
        return self.ok


def check_exactness(seq: ShortExactSequence) -> ExactnessReport:
    """Apply Λ to a short exact sequence and check the result is exact."""
    G = seq.B.G
    input_exact = _exact_at(seq.f, seq.g)
    equivariant = _is_module_map(seq.A, seq.B, seq.f) and _is_module_map(seq.B, seq.C, seq.g)
    LA, LB, LC = globalize(seq.A), globalize(seq.B), globalize(seq.C)
    Lf = globalize_map(G, seq.f, LA, LB)
    Lg = globalize_map(G, seq.g, LB, LC)
    image_exact = _exact_at(Lf, Lg)
    image_exact = image_exact and _is_module_map(LA.module, LB.module, Lf) \
        and _is_module_map(LB.module, LC.module, Lg)
    ranks = (LA.module.rank, LB.module.rank, LC.module.rank)
    return ExactnessReport(input_exact, equivariant, image_exact, ranks)


# --- KG ⊗ B, the complement N and the splitting φ -------------------------------------

class KGB:
    """KG ⊗ B with left translation and the right K_par G action (g⊗w)·z = g·h ⊗ (w ◁ z)."""

    def __init__(self, G):
        self.G = G
        self.sg = semigroup(G)
        self.idem = self.sg.idempotents()
        self.basis = [(g, u) for g in G.elements for u in self.idem]
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.dim = len(self.basis)

    def cod(self, w: SElem, z: SElem) -> SElem:
        """w ◁ z = z* w z for monomials."""
        sg = self.sg
        return sg.mul(sg.mul(sg.star(z), w), z)

    def right(self, b, z: SElem):
        g, w = b
        return (self.G.mul(g, z.grp), self.cod(w, z))

    def right_vec(self, vec: dict, z: SElem) -> dict:
        out = {}
        for b, c in vec.items():
            k = self.right(b, z)
            out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}

    def right_matrix(self, ring, z: SElem) -> Matrix:
        cols = [{self.index[self.right(b, z)]: 1} for b in self.basis]
        return Matrix.from_sparse_columns(ring, cols, self.dim)

    def left_matrix(self, ring, k) -> Matrix:
        cols = [{self.index[(self.G.mul(k, g), u)]: 1} for g, u in self.basis]
        return Matrix.from_sparse_columns(ring, cols, self.dim)

    def nu_gen(self, g) -> dict:
        """g ⊗ ν_{g^-1} as a vector {(g, u): c}."""
        e = self.sg.e(self.G.inv[g])
        if e == self.sg.one:
            return {}
        return {(g, self.sg.one): 1, (g, e): -1}

    def vector(self, ring, vec: dict):
        return Matrix.from_sparse_columns(ring, [{self.index[b]: c for b, c in vec.items()}],
                                          self.dim)


@dataclass
class NDelta:
    kgb: KGB
    ring: object
    n_basis: list          # vectors {(g, u): c}, one per basis element of N
    n_matrix: Matrix       # columns = n_basis in KG⊗B coordinates
    psi0: Matrix           # KG⊗B -> K_par G
    phi0: Matrix           # K_par G -> KG⊗B
    delta: Matrix          # KG⊗K_par G -> KG⊗B, lands in N
    free_basis: list       # (g, z) labels of KG⊗K_par G

    def n_coords(self, vec: dict):
        """Coordinates of a vector of N in n_basis (read off the leading entries)."""
        coords = []
        for b in self.n_basis:
            lead = next(k for k, c in b.items() if c == 1)
            coords.append(vec.get(lead, 0))
        rebuilt = {}
        for c, b in zip(coords, self.n_basis):
            for k, x in b.items():
                rebuilt[k] = rebuilt.get(k, 0) + c * x
        rebuilt = {k: self.ring.norm(v) for k, v in rebuilt.items() if self.ring.norm(v)}
        clean = {k: self.ring.norm(v) for k, v in vec.items() if self.ring.norm(v)}
        if rebuilt != clean:
            raise ConstructionFailed("vector does not lie in N")
        return coords


def build_N_delta(G, ring) -> NDelta:
    """KG ⊗ B = im φ0 ⊕ N and δ: KG ⊗ K_par G -> N, all certified."""
    kgb = KGB(G)
    sg = kgb.sg
    S = sg.elements()
    sidx = {z: i for i, z in enumerate(S)}
    inv = G.inv

    n_basis = []
    for g in G.elements:
        if g == 0:
            continue
        e = sg.e(inv[g])
        for u in kgb.idem:
            if inv[g] in u.idem:
                continue
            n_basis.append({(g, u): 1, (g, sg.mul(e, u)): -1})
    Nmat = Matrix.from_sparse_columns(
        ring, [{kgb.index[b]: c for b, c in v.items()} for v in n_basis], kgb.dim)

    # N is the right submodule generated by the g ⊗ ν_{g^-1}
    gens = []
    for g in G.elements:
        v = kgb.nu_gen(g)
        if not v:
            continue
        for z in S:
            w = kgb.right_vec(v, z)
            if w:
                gens.append({kgb.index[b]: c for b, c in w.items()})
    generated = Matrix.from_sparse_columns(ring, gens, kgb.dim)
    if not same_span(generated, Nmat) or rank(Nmat) != len(n_basis):
        raise ConstructionFailed("the listed basis does not span the generated submodule N")

    psi_cols = [{sidx[sg.mul(sg.bracket(g), u)]: 1} for g, u in kgb.basis]
    psi0 = Matrix.from_sparse_columns(ring, psi_cols, len(S))
    phi_cols = []
    for z in S:
        h, u = sg.split(z)
        phi_cols.append({kgb.index[(h, sg.mul(sg.e(inv[h]), u))]: 1})
    phi0 = Matrix.from_sparse_columns(ring, phi_cols, kgb.dim)
    if not (psi0 @ phi0).is_identity():
        raise ConstructionFailed("ψ0 φ0 is not the identity")
    if rank(phi0.hstack(Nmat)) != kgb.dim or rank(phi0) + Nmat.ncols != kgb.dim:
        raise ConstructionFailed("KG⊗B is not im φ0 ⊕ N")
    for h in G.elements:
        z = sg.bracket(h)
        Rh = Matrix.from_sparse_columns(ring, [{sidx[sg.mul(x, z)]: 1} for x in S], len(S))
        Kh = kgb.right_matrix(ring, z)
        if psi0 @ Kh != Rh @ psi0 or phi0 @ Rh != Kh @ phi0:
            raise ConstructionFailed(f"ψ0 or φ0 is not right linear at [{G.name(h)}]")

    free_basis = [(g, z) for g in G.elements for z in S]
    dcols = []
    for g, z in free_basis:
        w = kgb.right_vec(kgb.nu_gen(g), z)
        dcols.append({kgb.index[b]: c for b, c in w.items()})
    delta = Matrix.from_sparse_columns(ring, dcols, kgb.dim)
    if not in_span(Nmat, delta):
        raise ConstructionFailed("δ does not land in N")
    return NDelta(kgb, ring, n_basis, Nmat, psi0, phi0, delta, free_basis)


class _Free:
    """Arithmetic in KG ⊗ K_par G (free right module), vectors {(g, z): c}."""

    def __init__(self, G, ring):
        self.G, self.ring, self.sg = G, ring, semigroup(G)

    def add(self, *terms):
        out = {}
        for c, v in terms:
            for k, x in v.items():
                out[k] = out.get(k, 0) + c * x
        n = self.ring.norm
        return {k: n(x) for k, x in out.items() if n(x)}

    def times(self, v, alg: dict):
        """v · a for a = {z: c} in K_par G."""
        out = {}
        for (g, z), c in v.items():
            for w, d in alg.items():
                k = (g, self.sg.mul(z, w))
                out[k] = out.get(k, 0) + c * d
        n = self.ring.norm
        return {k: n(x) for k, x in out.items() if n(x)}

    def br(self, g):
        return {self.sg.bracket(g): 1}

    def e(self, g):
        return {self.sg.e(g): 1}

    def nu(self, g):
        e = self.sg.e(g)
        return {} if e == self.sg.one else {self.sg.one: 1, e: -1}

    def gen(self, g):
        """g ⊗ ν_{g^-1}."""
        return {(g, z): c for z, c in self.nu(self.G.inv[g]).items()}


@dataclass
class PhiCertificate:
    x: dict                # n -> vector x_n
    phi: Matrix            # N -> KG⊗K_par G, columns over the n_basis
    nd: NDelta
    delta_phi_identity: bool
    right_linear: bool

    @property
    def ok(self):
        return self.delta_phi_identity and self.right_linear


def construct_phi(G, ring, nd: NDelta = None) -> PhiCertificate:
    """Run the recursion for x_1, …, x_{|G|-1} and certify δφ = 1_N and right linearity."""
    nd = nd or build_N_delta(G, ring)
    F = _Free(G, ring)
    sg = F.sg
    inv, mul = G.inv, G.mul
    gs = list(G.elements)
    x = {}
    if G.order > 1:
        x[1] = F.gen(gs[1])
    for n in range(2, G.order):
        gn = gs[n]
        cur = F.add((1, F.gen(gn)),
                    (1, F.times(x[1], F.br(mul(inv[gs[1]], gn)))),
                    (-1, F.times(F.gen(gn), F.e(mul(inv[gn], gs[1])))))
        for r in range(2, n):
            cur = F.add((1, F.times(x[r], F.br(mul(inv[gs[r]], gn)))),
                        (1, F.times(cur, F.nu(mul(inv[gn], gs[r])))))
        x[n] = cur

    fidx = {b: i for i, b in enumerate(nd.free_basis)}
    kgb = nd.kgb

    def delta_vec(v):
        out = {}
        for (g, z), c in v.items():
            for b, d in kgb.right_vec(kgb.nu_gen(g), z).items():
                out[b] = out.get(b, 0) + c * d
        n = ring.norm
        return {k: n(y) for k, y in out.items() if n(y)}

    for n in range(1, G.order):
        gn = gs[n]
        target = {b: ring.norm(c) for b, c in kgb.nu_gen(gn).items() if ring.norm(c)}
        if delta_vec(x[n]) != target:
            raise ConstructionFailed(f"condition (i) fails: δ(x_{n}) ≠ g_{n} ⊗ ν")
        for r in range(1, n + 1):
            lhs = F.times(x[n], F.br(mul(inv[gn], gs[r])))
            rhs = F.times(x[r], F.e(mul(inv[gs[r]], gn)))
            if lhs != rhs:
                raise ConstructionFailed(f"condition (ii) fails for n={n}, r={r}")

    def phi_of(b):
        # b = g_n ⊗ ν_{g_n^-1} u, with u the leading idempotent
        (g, u), = [k for k, c in b.items() if c == 1]
        return F.times(F.times(x[g], F.nu(inv[g])), {u: 1})

    cols = []
    for b in nd.n_basis:
        cols.append({fidx[k]: c for k, c in phi_of(b).items()})
    phi = Matrix.from_sparse_columns(ring, cols, len(nd.free_basis))
    dphi = (nd.delta @ phi) == nd.n_matrix
    if not dphi:
        raise ConstructionFailed("δ∘φ is not the identity on N")

    for j, b in enumerate(nd.n_basis):
        for t in G.elements:
            moved = kgb.right_vec(b, sg.bracket(t))
            coords = nd.n_coords(moved)
            lhs = {}
            for c, col in zip(coords, cols):
                for k, y in col.items():
                    lhs[k] = lhs.get(k, 0) + c * y
            lhs = {k: ring.norm(y) for k, y in lhs.items() if ring.norm(y)}
            img = {nd.free_basis[k]: y for k, y in cols[j].items()}
            rhs = F.times(img, F.br(t))
            rhs = {fidx[k]: y for k, y in rhs.items()}
            if lhs != rhs:
                raise ConstructionFailed(f"φ is not right linear at basis {j}, t={G.name(t)}")
    return PhiCertificate(x, phi, nd, dphi, True)


# --- Hom_{K_par G}(Λ(K_par G), M) -----------------------------------------------------

@dataclass
class Intertwiner:
    target: ParRepModule
    basis: list            # matrices F: KG⊗B -> M
    g_action: tuple        # right G-action on Hom in solution coordinates
    kgb: KGB

    @property
    def dim(self):
        return len(self.basis)

    def as_module(self) -> GlobalModule:
        M = self.target
        return GlobalModule(M.G, M.ring, self.g_action, "right",
                            f"Hom(Λ(KparG), {M.label})").check_group_law()


def hom_intertwiners(M: ParRepModule) -> Intertwiner:
    """Solve F·R_h = ρ(h)·F on KG⊗B, with right G-action (f·k)(x) = f(k·x)."""
    if M.side != "right":
        raise ValidationError("the target of hom_intertwiners must be a right module")
    G, ring, m = M.G, M.ring, M.rank
    kgb = KGB(G)
    D = kgb.dim
    nvar = m * D
    check_size(G.order * nvar, nvar, "intertwiner system")
    sg = kgb.sg
    eqs = []
    for h in G.elements:
        z = sg.bracket(h)
        tgt = [kgb.index[kgb.right(b, z)] for b in kgb.basis]
        rho = M.pi[h].rows()
        for c in range(D):
            for i in range(m):
                row = {}
                k = tgt[c] * m + i
                row[k] = row.get(k, 0) + 1
                for ip in range(m):
                    a = rho[i][ip]
                    if a:
                        k = c * m + ip
                        row[k] = row.get(k, 0) - a
                row = {k: ring.norm(v) for k, v in row.items() if ring.norm(v)}
                if row:
                    eqs.append(row)
    A = Matrix.from_sparse_columns(ring, eqs, nvar).T
    K = kernel_basis(A)
    basis = []
    for j in range(K.ncols):
        v = K.col(j)
        basis.append(Matrix(ring, [[v[c * m + i] for c in range(D)] for i in range(m)], D))
    action = []
    for k in G.elements:
        perm = [kgb.index[(G.mul(k, g), u)] for g, u in kgb.basis]
        moved = []
        for j in range(K.ncols):
            v = K.col(j)
            moved.append([v[perm[c] * m + i] for c in range(D) for i in range(m)])
        if K.ncols:
            X = solve(K, Matrix.from_columns(ring, moved, nvar))
            if X is None:
                raise ConstructionFailed("Hom is not closed under the G-action")
        else:
            X = Matrix.zeros(ring, 0, 0)
        action.append(X)
    return Intertwiner(M, basis, tuple(action), kgb)


def balanced_tensor_rank(M: ParRepModule):
    """Rank of (KG ⊗ B) ⊗_{K_par G} M, with KG ⊗ B standing for Λ(K_par G)."""
    G, ring, r = M.G, M.ring, M.rank
    kgb = KGB(G)
    sg = kgb.sg
    rels = []
    for h in G.elements:
        z = sg.bracket(h)
        P = _cols(M.pi[h])
        for b in kgb.basis:
            src = kgb.index[b]
            dst = kgb.index[kgb.right(b, z)]
            for i in range(r):
                col = {dst * r + i: 1}
                col = _sub(ring, col, {src * r + k: x for k, x in P[i].items()})
                if col:
                    rels.append(col)
    q = quotient_from_rows(ring, kgb.dim * r, rels)
    return q.free_rank, q.torsion
