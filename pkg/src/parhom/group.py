"""Finite groups given by multiplication tables with canonical enumerations."""

import itertools
from dataclasses import dataclass, field

from .errors import GroupTooLarge, InvalidCayleyTable, NotASubgroup, ValidationError

MAX_ORDER = 24


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Elements are ids 0..order-1 with 0 the identity."""
    table: tuple
    names: tuple
    label: str = "G"
    inv: tuple = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        inv = []
        for x in range(n):
            inv.append(next(y for y in range(n) if self.table[x][y] == 0))
        object.__setattr__(self, "inv", tuple(inv))

    @property
    def order(self):
        return len(self.table)

    @property
    def elements(self):
        return range(len(self.table))

    def mul(self, x, y):
        return self.table[x][y]

    def prod(self, *xs):
        out = 0
        for x in xs:
            out = self.table[out][x]
        return out

    def name(self, x):
        return self.names[x]

    def index_of(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown group element {name!r}; known: "
                                  f"{', '.join(self.names)}") from None

    def is_abelian(self):
        t = self.table
        return all(t[x][y] == t[y][x] for x in self.elements for y in self.elements)

    def element_order(self, x):
        k, y = 1, x
        while y != 0:
            y = self.table[y][x]
            k += 1
        return k

    def exponent(self):
        from math import lcm
        out = 1
        for x in self.elements:
            out = lcm(out, self.element_order(x))
        return out

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"


def _check_table(table):
    n = len(table)
    if n == 0:
        raise InvalidCayleyTable("empty table")
    if n > MAX_ORDER:
        raise GroupTooLarge(f"group order {n} exceeds the cap {MAX_ORDER}")
    for i, row in enumerate(table):
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise InvalidCayleyTable(f"row {i} is not a row of a Cayley table on {n} elements")
    for x in range(n):
        if table[0][x] != x or table[x][0] != x:
            raise InvalidCayleyTable(f"element 0 is not a two-sided identity (fails at x={x})")
    for x in range(n):
        if 0 not in table[x]:
            raise InvalidCayleyTable(f"element {x} has no right inverse")
        y = table[x].index(0)
        if table[y][x] != 0:
            raise InvalidCayleyTable(f"inverse of {x} is not two-sided")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise InvalidCayleyTable(f"associativity fails for ({a}, {b}, {c})")


def from_table(table, names=None, label="G", check=True):
    table = tuple(tuple(int(x) for x in row) for row in table)
    if check:
        _check_table(table)
    if names is None:
        names = tuple(["1"] + [f"x{i}" for i in range(1, len(table))])
    if len(set(names)) != len(names) or len(names) != len(table):
        raise ValidationError("element names must be distinct, one per element")
    return FiniteGroup(table, tuple(names), label)


def _power_name(base, k):
    return "1" if k == 0 else (base if k == 1 else f"{base}^{k}")


def cyclic(n, gen="g"):
    if n < 1:
        raise ValidationError("cyclic(n) needs n >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return from_table(table, [_power_name(gen, k) for k in range(n)], f"C{n}")


def dihedral(n):
    """Order 2n: r^i (i < n) then r^i s, with s r s = r^{-1}."""
    if n < 1:
        raise ValidationError("dihedral(n) needs n >= 1")
    els = [(i, 0) for i in range(n)] + [(i, 1) for i in range(n)]
    idx = {e: k for k, e in enumerate(els)}
    table = []
    for (i, a) in els:
        row = []
        for (j, b) in els:
            row.append(idx[((i + (j if a == 0 else -j)) % n, (a + b) % 2)])
        table.append(row)
    names = []
    for (i, a) in els:
        r = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        names.append((r + ("s" if a else "")) or "1")
    return from_table(table, names, f"D{n}")


def symmetric(n):
    """Permutations of 1..n in lexicographic one-line order; (xy)(i) = x(y(i))."""
    if not 1 <= n <= 4:
        raise ValidationError("symmetric(n) is supported for 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    idx = {p: k for k, p in enumerate(perms)}
    table = [[idx[tuple(x[y[i]] for i in range(n))] for y in perms] for x in perms]
    names = ["".join(str(i + 1) for i in p) for p in perms]
    return from_table(table, names, f"S{n}")


def product(*groups):
    """Direct product with elements in lexicographic tuple order."""
    order = 1
    for g in groups:
        order *= g.order
    if order > MAX_ORDER:
        raise GroupTooLarge(f"group order {order} exceeds the cap {MAX_ORDER}")
    tuples = list(itertools.product(*[range(g.order) for g in groups]))
    idx = {t: k for k, t in enumerate(tuples)}
    table = [[idx[tuple(g.mul(a, b) for g, a, b in zip(groups, s, t))] for t in tuples]
             for s in tuples]
    names = ["(" + ",".join(g.name(a) for g, a in zip(groups, t)) + ")" for t in tuples]
    return from_table(table, names, "x".join(g.label for g in groups), check=False)


def make_group(spec):
    """Build a group from a description.

    Accepts tuples like ("cyclic", 3), ("dihedral", 3), ("symmetric", 3),
    ("product", spec, spec, ...), ("table", rows) or the equivalent dicts used
    in configuration files: {"kind": "cyclic", "n": 3}, {"kind": "product",
    "factors": [...]}, {"kind": "table", "table": [[...]], "names": [...]}.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind in ("cyclic", "dihedral", "symmetric"):
            if "n" not in spec:
                raise ValidationError(f"group kind {kind!r} needs an integer n")
            return make_group((kind, spec["n"]))
        if kind == "product":
            factors = spec.get("factors")
            if not factors:
                raise ValidationError("product group needs a nonempty 'factors' list")
            return product(*[make_group(f) for f in factors])
        if kind == "table":
            if "table" not in spec:
                raise ValidationError("table group needs a 'table'")
            return from_table(spec["table"], spec.get("names"), spec.get("label", "G"))
        raise ValidationError(f"unknown group kind {kind!r}")
    kind, *args = spec
    if kind == "cyclic":
        return cyclic(int(args[0]))
    if kind == "dihedral":
        return dihedral(int(args[0]))
    if kind == "symmetric":
        return symmetric(int(args[0]))
    if kind == "product":
        return product(*[make_group(a) for a in args])
    if kind == "table":
        return from_table(*args)
    raise ValidationError(f"unknown group kind {kind!r}")


class Subgroup:
    """A subgroup with its own re-indexed group structure.

    ``members`` is the sorted list of parent ids; the subgroup as a group in
    its own right (``as_group``) numbers them 0..|S|-1 in that order.
    """

    def __init__(self, parent, members):
        self.parent = parent
        self.members = tuple(members)
        self._pos = {x: i for i, x in enumerate(self.members)}
        t = [[self._pos[parent.mul(a, b)] for b in self.members] for a in self.members]
        self.group = FiniteGroup(tuple(tuple(r) for r in t),
                                 tuple(parent.name(x) for x in self.members),
                                 f"{parent.label}>S")

    @property
    def order(self):
        return len(self.members)

    @property
    def index(self):
        return self.parent.order // self.order

    def as_group(self):
        return self.group

    def embed(self, i):
        return self.members[i]

    def local(self, x):
        return self._pos[x]

    def left_cosets(self):
        """Left cosets gS, each listed with its minimal id first."""
        seen = set()
        out = []
        for g in self.parent.elements:
            if g in seen:
                continue
            coset = sorted(self.parent.mul(g, s) for s in self.members)
            seen.update(coset)
            out.append(coset)
        return out

    def coset_representatives(self):
        return [c[0] for c in self.left_cosets()]


def check_subgroup(G, ids):
    ids = sorted(set(int(i) for i in ids))
    if not ids:
        raise NotASubgroup("empty subset")
    for x in ids:
        if not 0 <= x < G.order:
            raise NotASubgroup(f"{x} is not an element id")
    members = set(ids)
    if 0 not in members:
        raise NotASubgroup("subset does not contain the identity 0")
    for a in ids:
        if G.inv[a] not in members:
            raise NotASubgroup(f"inverse of {a} is missing (pair ({a}, {a}))")
        for b in ids:
            if G.mul(a, b) not in members:
                raise NotASubgroup(f"product of {a} and {b} is {G.mul(a, b)}, not in the subset")
    return Subgroup(G, ids)
