"""Partial representations, partial actions on free modules, coinvariants.

Matrices act on column vectors.  For a left module, [g]·m = π(g)m.  For a
right module, m·[g] = π(g)m as well, so π(gh) relates to π(h)π(g) there; the
``side`` attribute records which convention a module follows.
"""

import random
from dataclasses import dataclass, field

from .errors import (InvalidSetAction, NonSaturatedDomain, PartialRepAxiomViolation,
                     RingMismatch, ValidationError)
from .exactalg import (Matrix, SparseMatrix, ZZ, in_span, intersect_spans, inverse,
                       kernel_basis, quotient_from_rows, rank, solve)
from .exactalg.snf import invariant_factors
from .group import FiniteGroup
from .parsemigroup import ParAlgElt, SElem, semigroup


def _sparse(m: Matrix) -> SparseMatrix:
    return SparseMatrix.from_dense(m)


def _ident_sparse(ring, n):
    return SparseMatrix(ring, n, [{i: 1} for i in range(n)])


def opposite(G):
    """G^op with the same element ids; right actions of G are left actions of G^op."""
    table = tuple(tuple(G.table[y][x] for y in G.elements) for x in G.elements)
    return FiniteGroup(table, G.names, G.label + "^op")


class ParRepModule:
    """A partial representation stored with one matrix per group element."""

    def __init__(self, G, ring, pi, side="left", label=""):
        if side not in ("left", "right"):
            raise ValidationError(f"side must be 'left' or 'right', not {side!r}")
        self.G = G
        self.ring = ring
        self.pi = tuple(pi)
        self.side = side
        self.label = label
        self.rank = self.pi[0].nrows if self.pi else 0
        self._sp = [None] * G.order
        self._act = {}
        self._images = {}

    def __repr__(self):
        return f"ParRepModule({self.label or '?'}, {self.side}, rank={self.rank}, {self.ring})"

    def sparse(self, g):
        s = self._sp[g]
        if s is None:
            s = self._sp[g] = _sparse(self.pi[g])
        return s

    def idem(self, g):
        """Matrix of e_g acting on the module's side."""
        return self.act(semigroup(self.G).e(g))

    def act(self, z: SElem) -> SparseMatrix:
        """Sparse matrix of a monomial of S(G)."""
        out = self._act.get(z)
        if out is not None:
            return out
        E, h = z
        G = self.G
        mat = self.sparse(h)
        for a in E:
            if self.side == "left":
                # e_a = [a][a^-1] applied after [h]: left factors multiply on the left
                mat = self.sparse(a) @ (self.sparse(G.inv[a]) @ mat)
            else:
                mat = mat @ (self.sparse(G.inv[a]) @ self.sparse(a))
        if not E and h == 0:
            mat = _ident_sparse(self.ring, self.rank)
        self._act[z] = mat
        return mat

    def act_alg(self, z: ParAlgElt) -> Matrix:
        return act_alg(self, z)

    def image(self, u: SElem):
        """(B, L) for the idempotent u: columns of B span u·M, and L x = coordinates of u·x."""
        out = self._images.get(u)
        if out is None:
            out = self._images[u] = image_basis(self.act(u).to_dense())
        return out

    def matrices(self):
        return list(self.pi)


def image_basis(E: Matrix):
    """Basis of the image of an idempotent matrix and the matching coordinate map.

    Standard basis vectors fixed by E are used when they already span the
    image, which keeps 0/1 modules in 0/1 coordinates.
    """
    n = E.nrows
    ring = E.ring
    cols = E.sparse_columns()
    fixed = [j for j in range(n) if cols[j] == {j: 1}]
    r = rank(E)
    if len(fixed) == r:
        B = Matrix.from_sparse_columns(ring, [{j: 1} for j in fixed], n)
        L = E.submatrix(rows=fixed)
        return B, L
    ident = Matrix.identity(ring, n)
    B = kernel_basis(ident - E)
    L = solve(B, E)
    return B, L


def validate_partial_rep(G, ring, pi, side="left", label="") -> ParRepModule:
    """Build a module after checking the three partial-representation axioms exhaustively.

    Raises PartialRepAxiomViolation listing every failing (s, t, axiom).
    """
    if len(pi) != G.order:
        raise ValidationError(f"π required for every group element: got {len(pi)} "
                              f"matrices for a group of order {G.order}")
    mats = []
    n = None
    for g, m in enumerate(pi):
        if not isinstance(m, Matrix):
            m = Matrix(ring, m)
        if m.ring != ring:
            raise RingMismatch(f"π({G.name(g)}) is over {m.ring}, expected {ring}")
        if m.nrows != m.ncols or (n is not None and m.nrows != n):
            raise ValidationError(f"π({G.name(g)}) has shape {m.shape}; expected square "
                                  f"matrices of one size")
        n = m.nrows
        mats.append(m)
    M = ParRepModule(G, ring, mats, side, label)
    violations = []
    first = None
    if not mats[0].is_identity():
        violations.append((0, 0, "c"))
    P = M.sparse
    inv = G.inv
    for s in G.elements:
        for t in G.elements:
            st = G.mul(s, t)
            ti, si = inv[t], inv[s]
            if side == "left":
                lhs_a, rhs_a = P(s) @ (P(t) @ P(ti)), P(st) @ P(ti)
                lhs_b, rhs_b = P(si) @ (P(s) @ P(t)), P(si) @ P(st)
            else:
                lhs_a, rhs_a = P(ti) @ (P(t) @ P(s)), P(ti) @ P(st)
                lhs_b, rhs_b = P(t) @ (P(s) @ P(si)), P(st) @ P(si)
            if lhs_a != rhs_a:
                violations.append((s, t, "a"))
                first = first or (lhs_a, rhs_a)
            if lhs_b != rhs_b:
                violations.append((s, t, "b"))
                first = first or (lhs_b, rhs_b)
    if violations:
        s, t, ax = violations[0]
        if first is None:
            residual = mats[0] - Matrix.identity(ring, n)
        else:
            residual = first[0].to_dense() - first[1].to_dense()
        raise PartialRepAxiomViolation(
            violations, f"{len(violations)} partial representation axiom violation(s); "
                        f"first: axiom ({ax}) at s={G.name(s)}, t={G.name(t)}, "
                        f"residual {[list(r) for r in residual.rows()]}")
    return M


def act_alg(M: ParRepModule, z: ParAlgElt) -> Matrix:
    """Matrix of an element of K_par G acting on M (linear, multiplicative on M's side)."""
    if z.ring != M.ring:
        raise RingMismatch(f"element over {z.ring} acting on a module over {M.ring}")
    acc = {}
    ring = M.ring
    for w, c in z.terms.items():
        for j, col in enumerate(M.act(w).cols):
            for i, x in col.items():
                acc[(i, j)] = acc.get((i, j), 0) + c * x
    rows = [[0] * M.rank for _ in range(M.rank)]
    for (i, j), x in acc.items():
        rows[i][j] = ring.norm(x)
    return Matrix(ring, rows, M.rank)


# --- set-theoretic partial actions ----------------------------------------------------

@dataclass
class SetPartialAction:
    """θ_g: X_{g^-1} -> X_g on a finite set of points (given as labels)."""
    G: object
    points: tuple
    domains: dict       # g -> frozenset of point labels (X_g)
    maps: dict          # g -> {x: θ_g(x)} defined on X_{g^-1}

    def validate(self):
        G = self.G
        pts = set(self.points)
        if len(pts) != len(self.points):
            raise InvalidSetAction("point labels must be distinct")
        for g in G.elements:
            if g not in self.domains or g not in self.maps:
                raise InvalidSetAction(f"missing domain or map for {G.name(g)}")
            if not set(self.domains[g]) <= pts:
                raise InvalidSetAction(f"domain of {G.name(g)} has unknown points")
        if set(self.domains[0]) != pts or any(self.maps[0].get(x) != x for x in pts):
            raise InvalidSetAction("X_1 must be X and θ_1 the identity (axiom (i))")
        for g in G.elements:
            src, dst = set(self.domains[G.inv[g]]), set(self.domains[g])
            th = self.maps[g]
            if set(th) != src:
                raise InvalidSetAction(f"θ_{G.name(g)} is not defined exactly on X_{{g^-1}}")
            if set(th.values()) != dst or len(set(th.values())) != len(th):
                raise InvalidSetAction(f"θ_{G.name(g)} is not a bijection onto X_g")
        for g in G.elements:
            gi = G.inv[g]
            for h in G.elements:
                part = set(self.domains[gi]) & set(self.domains[G.mul(gi, h)])
                target = set(self.domains[g]) & set(self.domains[h])
                for x in part:
                    if self.maps[g][x] not in target:
                        raise InvalidSetAction(
                            f"axiom (ii) fails for g={G.name(g)}, h={G.name(h)} at {x!r}")
                hi = G.inv[h]
                common = set(self.domains[hi]) & set(self.domains[G.mul(hi, gi)])
                gh = G.mul(g, h)
                for x in common:
                    y = self.maps[h][x]
                    if y not in self.maps[g] or self.maps[g][y] != self.maps[gh][x]:
                        raise InvalidSetAction(
                            f"axiom (iii) fails for g={G.name(g)}, h={G.name(h)} at {x!r}")
        return self


def restricted_action(G, subset):
    """Left translation on G restricted to a subset A: X_g = A ∩ gA."""
    A = frozenset(subset)
    domains, maps = {}, {}
    for g in G.elements:
        domains[g] = frozenset(a for a in A if G.mul(G.inv[g], a) in A)
    for g in G.elements:
        maps[g] = {x: G.mul(g, x) for x in domains[G.inv[g]]}
    return SetPartialAction(G, tuple(sorted(A)), domains, maps).validate()


def two_point_action(G):
    """X = {x, y}, X_g = {x} and θ_g = id for g != 1."""
    pts = ("x", "y")
    domains = {g: frozenset(pts if g == 0 else ("x",)) for g in G.elements}
    maps = {g: {p: p for p in domains[g]} for g in G.elements}
    return SetPartialAction(G, pts, domains, maps).validate()


def linearize_set_action(theta: SetPartialAction, ring, label="") -> ParRepModule:
    theta.validate()
    G = theta.G
    pos = {p: i for i, p in enumerate(theta.points)}
    n = len(pos)
    pi = []
    for g in G.elements:
        cols = [{} for _ in range(n)]
        for x, y in theta.maps[g].items():
            cols[pos[x]] = {pos[y]: 1}
        pi.append(Matrix.from_sparse_columns(ring, cols, n))
    return validate_partial_rep(G, ring, pi, "left", label or "set action")


# --- partial actions on modules -------------------------------------------------------

class PartialActionModule:
    """Domains M_g as column bases and θ_g: M_{g^-1} -> M_g in those bases."""

    def __init__(self, G, ring, rank_, domains, maps, side="left", label=""):
        self.G = G
        self.ring = ring
        self.rank = rank_
        self.domains = tuple(domains)
        self.maps = tuple(maps)
        self.side = side
        self.label = label

    def __repr__(self):
        return f"PartialActionModule({self.label or '?'}, rank={self.rank}, {self.ring})"

    def dom(self, g):
        return self.domains[g]

    def apply(self, g, X: Matrix):
        """θ_g applied to ambient columns lying in M_{g^-1}; None if they do not."""
        D = self.domains[self.G.inv[g]]
        if X.ncols == 0:
            return Matrix.zeros(self.ring, self.rank, 0)
        if D.ncols == 0:
            return None if not X.is_zero() else Matrix.zeros(self.ring, self.rank, X.ncols)
        c = solve(D, X)
        if c is None:
            return None
        return self.domains[g] @ (self.maps[g] @ c)


def induced_partial_action(M: ParRepModule) -> PartialActionModule:
    """M_g = e_g·M (left) or M·e_{g^-1} (right), θ_g the restriction of [g]."""
    G = M.G
    sg = semigroup(G)
    doms, coords = [], []
    for g in G.elements:
        u = sg.e(g) if M.side == "left" else sg.e(G.inv[g])
        B, L = M.image(u)
        if M.ring == ZZ and B.ncols and any(d != 1 for d in invariant_factors(B)):
            raise NonSaturatedDomain(f"domain of {G.name(g)} is not a direct summand")
        doms.append(B)
        coords.append(L)
    maps = []
    for g in G.elements:
        src = doms[G.inv[g]]
        maps.append(coords[g] @ (M.pi[g] @ src))
    return PartialActionModule(G, M.ring, M.rank, doms, maps, M.side,
                               f"induced({M.label})")


@dataclass
class ActionReport:
    ok: bool
    violations: list = field(default_factory=list)   # (axiom, g, h, detail)

    def __bool__(self):
        return self.ok


def validate_partial_action(theta: PartialActionModule) -> ActionReport:
    """Check the partial action axioms with exact linear algebra; never raises."""
    G = theta.G if theta.side == "left" else opposite(theta.G)
    ring = theta.ring
    n = theta.rank
    out = []
    D = theta.domains
    if ring == ZZ:
        for g in G.elements:
            if D[g].ncols and any(d != 1 for d in invariant_factors(D[g])):
                out.append(("saturation", G.name(g), None, "domain is not a direct summand"))
    for g in G.elements:
        gi = G.inv[g]
        T = theta.maps[g]
        if T.shape != (D[g].ncols, D[gi].ncols):
            out.append(("iso", G.name(g), None, f"map shape {T.shape} does not match domains"))
    if out:
        return ActionReport(False, out)
    full = D[0].ncols == n and in_span(D[0], Matrix.identity(ring, n))
    if not full or D[0] @ theta.maps[0] != D[0]:
        out.append(("i", G.name(0), None, "M_1 must be M and θ_1 the identity"))
    for g in G.elements:
        gi = G.inv[g]
        for h in G.elements:
            part = intersect_spans(D[gi], D[G.mul(gi, h)])
            img = theta.apply(g, part)
            if img is None or not in_span(D[h], img):
                out.append(("ii", G.name(g), G.name(h), "θ_g(M_{g^-1} ∩ M_{g^-1}h) ⊄ M_h"))
                continue
            hi = G.inv[h]
            common = intersect_spans(D[hi], D[G.mul(hi, gi)])
            step = theta.apply(h, common)
            two = theta.apply(g, step) if step is not None else None
            one = theta.apply(G.mul(g, h), common)
            if two is None or one is None or two != one:
                out.append(("iii", G.name(g), G.name(h), "θ_gθ_h ≠ θ_gh on the common domain"))
    return ActionReport(not out, out)


def action_from_spans(G, ring, rank_, spans, maps, side="left", label=""):
    """Partial action from per-element spanning columns and ambient maps.

    ``spans[g]`` lists ambient vectors spanning M_g; ``maps[g]`` gives θ_g
    as a dict {ambient vector of M_{g^-1}: image}.  Missing elements get
    M_g = 0.
    """
    doms, mats = [], []
    for g in G.elements:
        vecs = spans.get(g, [])
        doms.append(Matrix.from_columns(ring, vecs, rank_) if vecs
                    else Matrix.zeros(ring, rank_, 0))
    for g in G.elements:
        src, dst = doms[G.inv[g]], doms[g]
        pairs = maps.get(g, {})
        if src.ncols == 0:
            mats.append(Matrix.zeros(ring, dst.ncols, 0))
            continue
        X = Matrix.from_columns(ring, [list(k) for k in pairs], rank_)
        Y = Matrix.from_columns(ring, [list(v) for v in pairs.values()], rank_)
        # θ D_src = D_dst T; X = D_src a, Y = D_dst b, so T a = b
        a = solve(src, X)
        b = solve(dst, Y)
        if a is None or b is None:
            raise ValidationError(f"map data for {G.name(g)} does not lie in the domains")
        T = solve(a.T, b.T)
        if T is None:
            raise ValidationError(f"map data for {G.name(g)} does not determine θ_g")
        mats.append(T.T)
    return PartialActionModule(G, ring, rank_, doms, mats, side, label)


# --- coinvariants ---------------------------------------------------------------------

def coinvariants(M):
    """M_G = M / DM as a quotient presentation (left modules and left partial actions)."""
    if M.side != "left":
        raise ValidationError("coinvariants are defined here for left modules")
    G = M.G
    rels = []
    if isinstance(M, ParRepModule):
        sg = semigroup(G)
        for g in G.elements:
            R = M.pi[g] - M.act(sg.e(G.inv[g])).to_dense()
            rels.extend(c for c in R.sparse_columns() if c)
    else:
        for g in G.elements:
            src = M.domains[G.inv[g]]
            if not src.ncols:
                continue
            R = M.domains[g] @ M.maps[g] - src
            rels.extend(c for c in R.sparse_columns() if c)
    return quotient_from_rows(M.ring, M.rank, rels)


# --- standard modules -----------------------------------------------------------------

def trivial_module(G, ring, side="left"):
    one = Matrix.identity(ring, 1)
    return validate_partial_rep(G, ring, [one] * G.order, side, "trivial")


def _monomial_module(G, ring, basis, fn, side, label):
    idx = {z: i for i, z in enumerate(basis)}
    n = len(basis)
    pi = []
    for g in G.elements:
        pi.append(Matrix.from_sparse_columns(ring, [{idx[fn(g, z)]: 1} for z in basis], n))
    return validate_partial_rep(G, ring, pi, side, label)


def regular_module(G, ring, side="left"):
    """K_par G on the basis enumerate_S(G), by left or right multiplication."""
    sg = semigroup(G)
    if side == "left":
        fn = lambda g, z: sg.mul(sg.bracket(g), z)
    else:
        fn = lambda g, z: sg.mul(z, sg.bracket(g))
    return _monomial_module(G, ring, sg.elements(), fn, side, f"regular-{side}")


def b_module(G, ring, side="left"):
    """B with [g] ▷ u = [g]u[g^-1] (left) or u ◁ [g] = [g^-1]u[g] (right)."""
    sg = semigroup(G)
    inv = G.inv
    if side == "left":
        fn = lambda g, u: sg.mul(sg.mul(sg.bracket(g), u), sg.bracket(inv[g]))
    else:
        fn = lambda g, u: sg.mul(sg.mul(sg.bracket(inv[g]), u), sg.bracket(g))
    return _monomial_module(G, ring, sg.idempotents(), fn, side, f"B-{side}")


def diag_module(G, ring):
    """Rank 2 with π(g) = diag(1, 0) for g != 1: the linearized two-point action."""
    return linearize_set_action(two_point_action(G), ring, "diag")


def global_regular_module(G, ring, side="left"):
    """KG with translation; a genuine representation."""
    n = G.order
    pi = []
    for g in G.elements:
        if side == "left":
            cols = [{G.mul(g, k): 1} for k in G.elements]
        else:
            cols = [{G.mul(k, g): 1} for k in G.elements]
        pi.append(Matrix.from_sparse_columns(ring, cols, n))
    return validate_partial_rep(G, ring, pi, side, f"KG-{side}")


def direct_sum(*mods, label=""):
    from .exactalg import block_diag
    M0 = mods[0]
    pi = [block_diag(M0.ring, [m.pi[g] for m in mods]) for g in M0.G.elements]
    return ParRepModule(M0.G, M0.ring, pi, M0.side, label or "+".join(m.label for m in mods))


def conjugate(M: ParRepModule, Q: Matrix, label=""):
    """The isomorphic module with π'(g) = Q π(g) Q^-1."""
    Qi = inverse(Q)
    pi = [Q @ p @ Qi for p in M.pi]
    return ParRepModule(M.G, M.ring, pi, M.side, label or f"Q·{M.label}")


def random_unimodular(ring, n, rng, steps=None):
    """Product of random elementary matrices; invertible over any ring."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return Matrix(ring, rows, n)


def random_partial_rep(G, ring, rng=None, pieces=2):
    """Direct sum of linearized restricted translations, in random coordinates."""
    rng = rng or random.Random(0)
    mods = []
    for _ in range(pieces):
        A = {0} | {g for g in G.elements if rng.random() < 0.5}
        mods.append(linearize_set_action(restricted_action(G, A), ring))
    M = direct_sum(*mods, label="random")
    return conjugate(M, random_unimodular(ring, M.rank, rng), "random")
