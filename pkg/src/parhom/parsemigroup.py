"""Exel's semigroup S(G), the partial group algebra K_par G and its subalgebra B.

A normal form (E, h) stands for the product of the idempotents e_a (a in E)
followed by [h]; E never contains the identity or h.  With that convention
the product is

    (E, g)(F, h) = (E ∪ gF ∪ {g}, gh)   then drop 1 and gh from the set,

which is all that [g][h] = e_g[gh] and [g]e_f = e_{gf}[g] amount to.
"""

from functools import lru_cache
from typing import NamedTuple

from .errors import GroupTooLarge, NotInB, RingMismatch
from .group import MAX_ORDER

MAX_SEMIGROUP = 1 << 20


class SElem(NamedTuple):
    idem: tuple     # sorted element ids
    grp: int

    def key(self):
        return (self.grp, self.idem)

    def is_idempotent(self):
        return self.grp == 0


def _canon(G, ids, h):
    return SElem(tuple(sorted(set(ids) - {0, h})), h)


class ExelSemigroup:
    """S(G) for a fixed group, with memoised products."""

    def __init__(self, G):
        self.G = G
        self.one = SElem((), 0)
        self._mul = {}
        self._elements = None

    def bracket(self, g):
        return SElem((), g)

    def e(self, g):
        return _canon(self.G, (g,), 0)

    def mul(self, x, y):
        k = (x, y)
        out = self._mul.get(k)
        if out is None:
            E, g = x
            F, h = y
            row = self.G.table[g]
            ids = set(E)
            ids.update(row[f] for f in F)
            ids.add(g)
            out = _canon(self.G, ids, row[h])
            self._mul[k] = out
        return out

    def star(self, z):
        E, h = z
        hi = self.G.inv[h]
        row = self.G.table[hi]
        return _canon(self.G, [row[a] for a in E] + [hi], hi)

    def normalize(self, word):
        z = self.one
        for g in word:
            z = self.mul(z, SElem((), g))
        return z

    def epsilon(self, z):
        return self.mul(self.star(z), z)

    def translate_idem(self, g, idem):
        """The idempotent g·E g^{-1} as an element (gE, 1)."""
        row = self.G.table[g]
        return _canon(self.G, [row[a] for a in idem], 0)

    def split(self, z):
        """Write z = [h]·u with u = h^{-1}E idempotent; returns (h, u)."""
        E, h = z
        return h, self.translate_idem(self.G.inv[h], E)

    def count(self):
        n = self.G.order
        return 2 ** (n - 1) + (n - 1) * 2 ** (n - 2) if n > 1 else 1

    def elements(self):
        if self._elements is None:
            if self.G.order > MAX_ORDER or self.count() > MAX_SEMIGROUP:
                raise GroupTooLarge(f"S(G) has {self.count()} elements; too many to list")
            out = []
            for h in self.G.elements:
                rest = [a for a in self.G.elements if a not in (0, h)]
                subsets = []
                for mask in range(1 << len(rest)):
                    subsets.append(tuple(rest[i] for i in range(len(rest)) if mask >> i & 1))
                out.extend(SElem(s, h) for s in sorted(subsets))
            self._elements = out
            self._index = {z: i for i, z in enumerate(out)}
        return self._elements

    def index(self, z):
        self.elements()
        return self._index[z]

    def idempotents(self):
        return [z for z in self.elements() if z.grp == 0]


@lru_cache(maxsize=None)
def semigroup(G):
    return ExelSemigroup(G)


def sg_normalize(G, word):
    return semigroup(G).normalize(word)


def sg_mul(G, x, y):
    return semigroup(G).mul(x, y)


def sg_star(G, z):
    return semigroup(G).star(z)


def enumerate_S(G):
    """All normal forms ordered by (grp, idem)."""
    return list(semigroup(G).elements())


class ParAlgElt:
    """Finitely supported K-combination of elements of S(G)."""

    __slots__ = ("G", "ring", "terms")

    def __init__(self, G, ring, terms=None):
        self.G = G
        self.ring = ring
        self.terms = {}
        if terms:
            for z, c in terms.items():
                c = ring(c)
                if c:
                    self.terms[z] = c

    @classmethod
    def _raw(cls, G, ring, terms):
        x = object.__new__(cls)
        x.G, x.ring, x.terms = G, ring, terms
        return x

    def _check(self, other):
        if not isinstance(other, ParAlgElt):
            raise TypeError("expected a ParAlgElt")
        if other.ring != self.ring or other.G is not self.G:
            raise RingMismatch(f"cannot combine elements over {self.ring} and {other.ring}")

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].key())

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        n = self.ring.norm
        for z, c in other.terms.items():
            v = n(out.get(z, 0) + c)
            if v:
                out[z] = v
            else:
                out.pop(z, None)
        return ParAlgElt._raw(self.G, self.ring, out)

    def __neg__(self):
        n = self.ring.norm
        return ParAlgElt._raw(self.G, self.ring, {z: n(-c) for z, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring(c)
        n = self.ring.norm
        return ParAlgElt._raw(self.G, self.ring, {z: n(c * v) for z, v in self.terms.items()
                                                   if n(c * v)})

    def __mul__(self, other):
        if not isinstance(other, ParAlgElt):
            return self.scale(other)
        self._check(other)
        sg = semigroup(self.G)
        n = self.ring.norm
        out = {}
        for z, a in self.terms.items():
            for w, b in other.terms.items():
                zw = sg.mul(z, w)
                out[zw] = out.get(zw, 0) + a * b
        return ParAlgElt._raw(self.G, self.ring, {z: n(c) for z, c in out.items() if n(c)})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, ParAlgElt):
            return NotImplemented
        return self.ring == other.ring and self.G is other.G and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def is_zero(self):
        return not self.terms

    def in_B(self):
        return all(z.grp == 0 for z in self.terms)

    def star(self):
        sg = semigroup(self.G)
        out = {}
        for z, c in self.terms.items():
            out[sg.star(z)] = c
        return ParAlgElt._raw(self.G, self.ring, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for z, c in self.items():
            mono = "".join(f"e[{self.G.name(a)}]" for a in z.idem)
            if z.grp:
                mono += f"[{self.G.name(z.grp)}]"
            parts.append(f"{c}*{mono or '1'}")
        return " + ".join(parts)


class ParAlg:
    """Element factory for K_par G over a ring."""

    def __init__(self, G, ring):
        self.G = G
        self.ring = ring
        self.sg = semigroup(G)

    def mono(self, z, c=1):
        return ParAlgElt(self.G, self.ring, {z: c})

    def zero(self):
        return ParAlgElt(self.G, self.ring)

    def one(self):
        return self.mono(self.sg.one)

    def br(self, g):
        return self.mono(self.sg.bracket(g))

    def e(self, g):
        return self.mono(self.sg.e(g))

    def nu(self, g):
        return self.one() - self.e(g)

    def word(self, word):
        return self.mono(self.sg.normalize(word))


def alg_add(x, y):
    return x + y


def alg_mul(x, y):
    return x * y


def alg_scale(x, c):
    return x.scale(c)


def epsilon(x):
    """Linear extension of z -> z* z; lands in B."""
    sg = semigroup(x.G)
    n = x.ring.norm
    out = {}
    for z, c in x.terms.items():
        w = sg.epsilon(z)
        out[w] = out.get(w, 0) + c
    return ParAlgElt._raw(x.G, x.ring, {z: n(c) for z, c in out.items() if n(c)})


def _require_B(u):
    if not u.in_B():
        raise NotInB("argument has a component with non-trivial group part")


def dom_act(g, u):
    """[g] ▷ u = [g] u [g^{-1}]."""
    _require_B(u)
    A = ParAlg(u.G, u.ring)
    return A.br(g) * u * A.br(u.G.inv[g])


def cod_act(u, z):
    """u ◁ z = z* u z, for z a group element id, an SElem or a ParAlgElt monomial."""
    _require_B(u)
    A = ParAlg(u.G, u.ring)
    if isinstance(z, int):
        z = A.br(z)
    elif isinstance(z, SElem):
        z = A.mono(z)
    else:
        # linear in z
        out = A.zero()
        for w, c in z.terms.items():
            out = out + cod_act(u, w).scale(c)
        return out
    return z.star() * u * z


def nu(G, ring, g):
    return ParAlg(G, ring).nu(g)
