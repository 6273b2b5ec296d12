"""Arithmetic in finite abelian groups given as products of cyclic factors.

A group is a tuple of moduli (n_1, ..., n_k); elements are plain coordinate
tuples. The bilinear pairing <x, y> = sum_i (M/n_i) x_i y_i  (mod M), where M
is the group exponent, identifies the group with its dual, so spectra and
zero sets are reported as subsets of the group itself.

Elements double as mixed-radix indices 0..order-1 (row major, leftmost
coordinate most significant); index order equals lexicographic coordinate
order, which fixes every "canonical"/"least" choice in this package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Iterator, Mapping

from .errors import (
    GroupMismatch,
    InvalidArgument,
    InvalidModulus,
    NotADivisor,
    Overflow,
)

Element = tuple[int, ...]

_INT64 = 2**63 - 1


@dataclass(frozen=True)
class Group:
    """Direct product Z_{n_1} x ... x Z_{n_k}, immutable and hashable.

    Construct through :func:`make_group` for public use; the constructor
    itself also admits modulus 1 so projection codomains (e.g. Z_1 for the
    zero direction) stay representable.
    """

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))
        if not self.moduli or any(n < 1 for n in self.moduli):
            raise InvalidModulus(f"moduli must be positive, got {self.moduli!r}")
        order = 1
        for n in self.moduli:
            order *= n
            if order > _INT64:
                raise Overflow("group order exceeds 64-bit range")

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    @cached_property
    def identity(self) -> Element:
        return (0,) * len(self.moduli)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements in index (= lexicographic) order."""
        return tuple(itertools.product(*(range(n) for n in self.moduli)))

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def contains(self, x: Element) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.moduli)
            and all(isinstance(c, int) and 0 <= c < n for c, n in zip(x, self.moduli))
        )

    def check(self, x: Element) -> None:
        if not self.contains(x):
            raise GroupMismatch(f"{x!r} is not an element of {self!r}")

    def index_of(self, x: Element) -> int:
        idx = 0
        for c, n in zip(x, self.moduli):
            idx = idx * n + c
        return idx

    def coords_of(self, idx: int) -> Element:
        coords = []
        for n in reversed(self.moduli):
            idx, c = divmod(idx, n)
            coords.append(c)
        return tuple(reversed(coords))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.moduli))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.moduli))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.moduli))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % n for a, n in zip(x, self.moduli))

    def __repr__(self) -> str:
        return f"Group{self.moduli!r}"


def make_group(moduli: Iterable[int]) -> Group:
    """Build a group from cyclic factor orders, each at least 2.

    Raises InvalidModulus for factors below 2 and Overflow when the order
    would not fit in 64 bits.
    """
    mods = tuple(int(n) for n in moduli)
    if not mods:
        raise InvalidModulus("at least one modulus is required")
    for n in mods:
        if n < 2:
            raise InvalidModulus(f"modulus {n} < 2")
    return Group(mods)


class Multiset:
    """Finite map from group elements to positive multiplicities.

    Sets are the 0/1 special case. Instances are immutable once built and
    hash/compare by (group, contents).
    """

    __slots__ = ("group", "mult", "mass", "_hash")

    def __init__(self, group: Group, mult: Mapping[Element, int]):
        items: dict[Element, int] = {}
        for x, m in mult.items():
            if not isinstance(m, int) or m < 1:
                raise InvalidArgument(f"multiplicity of {x!r} must be a positive int, got {m!r}")
            group.check(x)
            items[x] = m
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "mult", items)
        object.__setattr__(self, "mass", sum(items.values()))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Multiset is immutable")

    @classmethod
    def from_elements(cls, group: Group, elems: Iterable[Element]) -> "Multiset":
        """Count occurrences; repeated inputs become multiplicities."""
        counts: dict[Element, int] = {}
        for x in elems:
            x = tuple(x)
            counts[x] = counts.get(x, 0) + 1
        return cls(group, counts)

    @classmethod
    def set_of(cls, group: Group, elems: Iterable[Element]) -> "Multiset":
        """A 0/1 multiset; duplicated inputs collapse to multiplicity 1."""
        return cls(group, dict.fromkeys((tuple(x) for x in elems), 1))

    @property
    def support(self) -> tuple[Element, ...]:
        return tuple(sorted(self.mult))

    @property
    def is_set(self) -> bool:
        return all(m == 1 for m in self.mult.values())

    def __call__(self, x: Element) -> int:
        return self.mult.get(x, 0)

    def items(self):
        return self.mult.items()

    def translate(self, g: Element) -> "Multiset":
        self.group.check(g)
        return Multiset(self.group, {self.group.add(x, g): m for x, m in self.mult.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multiset)
            and self.group == other.group
            and self.mult == other.mult
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.group.moduli, frozenset(self.mult.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        if self.is_set:
            return f"Multiset.set_of({self.group!r}, {sorted(self.mult)!r})"
        return f"Multiset({self.group!r}, {dict(sorted(self.mult.items()))!r})"


@dataclass(frozen=True, order=True)
class Direction:
    """Canonical representative of a cyclic-generator class [v].

    rep is the lexicographically least generator of <v>; order = |<v>|.
    """

    rep: Element
    order: int


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as its sorted element tuple; validated on construction."""

    group: Group
    elements: tuple[Element, ...]

    def __post_init__(self) -> None:
        elems = tuple(sorted(tuple(x) for x in self.elements))
        object.__setattr__(self, "elements", elems)
        member = set(elems)
        G = self.group
        if G.identity not in member:
            raise InvalidArgument("subgroup must contain the identity")
        for x in elems:
            G.check(x)
            if G.neg(x) not in member:
                raise InvalidArgument(f"not closed under negation at {x!r}")
        for x in elems:
            for y in elems:
                if G.add(x, y) not in member:
                    raise InvalidArgument(f"not closed under addition at {x!r}+{y!r}")
        if G.order % len(elems):
            raise InvalidArgument("subgroup order must divide the group order")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in set(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def as_set(self) -> Multiset:
        return Multiset.set_of(self.group, self.elements)


# ---------------------------------------------------------------------------
# element-level operations


def dot(G: Group, x: Element, y: Element) -> int:
    """The duality pairing sum_i (M/n_i) x_i y_i mod M."""
    G.check(x)
    G.check(y)
    M = G.exponent
    total = 0
    for xi, yi, n in zip(x, y, G.moduli):
        total += (M // n) * xi * yi
    return total % M


def element_order(G: Group, x: Element) -> int:
    """Least n >= 1 with n*x = 0: lcm_i n_i / gcd(n_i, x_i)."""
    G.check(x)
    return reduce(math.lcm, (n // math.gcd(n, c) for c, n in zip(x, G.moduli)), 1)


def cyclic_subgroup(G: Group, x: Element) -> tuple[Element, ...]:
    """Elements of <x> in the order 0, x, 2x, ..."""
    G.check(x)
    out = [G.identity]
    cur = x
    while cur != G.identity:
        out.append(cur)
        cur = G.add(cur, x)
    return tuple(out)


def direction_rep(G: Group, x: Element) -> Direction:
    """Canonical direction of x: the least generator of <x>."""
    elems = cyclic_subgroup(G, x)
    d = len(elems)
    gens = [elems[k] for k in range(1, d) if math.gcd(k, d) == 1]
    rep = min(gens) if gens else G.identity
    return Direction(rep=rep, order=d)


def annihilator(G: Group, S: Multiset) -> Subgroup:
    """All g with <s, g> = 0 mod M for every s in the support of S."""
    if S.group != G:
        raise GroupMismatch("multiset lives on a different group")
    M = G.exponent
    support = S.support
    members = [g for g in G.elements if all(dot(G, s, g) % M == 0 for s in support)]
    return Subgroup(G, tuple(members))


@lru_cache(maxsize=None)
def _all_subgroups(G: Group) -> tuple[Subgroup, ...]:
    """Every subgroup, via closure of cyclic subgroups under pairwise join."""
    add = G.add
    cyclic: set[frozenset[Element]] = set()
    for x in G.elements:
        cyclic.add(frozenset(cyclic_subgroup(G, x)))
    subs: set[frozenset[Element]] = set(cyclic)
    queue = list(cyclic)
    while queue:
        H = queue.pop()
        for C in cyclic:
            if C <= H:
                continue
            J = frozenset(add(h, c) for h in H for c in C)
            if J not in subs:
                subs.add(J)
                queue.append(J)
    out = [Subgroup(G, tuple(H)) for H in subs]
    out.sort(key=lambda s: (s.order, s.elements))
    return tuple(out)


def subgroups_of_order(G: Group, m: int) -> tuple[Subgroup, ...]:
    """All subgroups of order m, canonically sorted, no duplicates."""
    if m < 1 or G.order % m:
        raise NotADivisor(f"{m} does not divide |G| = {G.order}")
    return tuple(H for H in _all_subgroups(G) if H.order == m)


@lru_cache(maxsize=None)
def coset_id_table(H: Subgroup) -> tuple[int, ...]:
    """Coset id of every group element (by element index), ids 0..|G:H|-1.

    Ids are assigned in increasing order of the least element of each coset,
    so the table is canonical.
    """
    G = H.group
    table = [-1] * G.order
    next_id = 0
    for i, x in enumerate(G.elements):
        if table[i] == -1:
            for h in H.elements:
                table[G.index_of(G.add(x, h))] = next_id
            next_id += 1
    return tuple(table)


def sylow_projection(G: Group, A: Multiset, r: int) -> Multiset:
    """Project a multiset onto the Sylow r-part, preserving total mass.

    The target group keeps one coordinate per factor whose order is
    divisible by r, reduced to its r-power part.
    """
    if A.group != G:
        raise GroupMismatch("multiset lives on a different group")
    if r < 2 or G.order % r:
        raise NotADivisor(f"{r} does not divide |G| = {G.order}")
    powers = []
    positions = []
    for i, n in enumerate(G.moduli):
        e = 1
        while n % (e * r) == 0:
            e *= r
        if e > 1:
            powers.append(e)
            positions.append(i)
    target = Group(tuple(powers))
    counts: dict[Element, int] = {}
    for x, m in A.items():
        y = tuple(x[i] % e for i, e in zip(positions, powers))
        counts[y] = counts.get(y, 0) + m
    return Multiset(target, counts)


def project_along(G: Group, A: Multiset, alpha: Element) -> Multiset:
    """Push a multiset forward along the character alpha onto Z_d.

    d is the order of alpha; x lands at <x, alpha> * d / M mod d. Mass is
    preserved. alpha = 0 sends everything to index 0 of the trivial group.
    """
    if A.group != G:
        raise GroupMismatch("multiset lives on a different group")
    G.check(alpha)
    d = element_order(G, alpha)
    step = G.exponent // d
    target = Group((d,))
    counts: dict[Element, int] = {}
    for x, m in A.items():
        k = (dot(G, x, alpha) // step) % d
        counts[(k,)] = counts.get((k,), 0) + m
    return Multiset(target, counts)


def determined_directions(S: Multiset) -> frozenset[Direction]:
    """Directions of the nonzero differences of the support of S."""
    G = S.group
    pts = S.support
    seen_elems: set[Element] = set()
    out: set[Direction] = set()
    for i, a in enumerate(pts):
        for b in pts[:i]:
            for d in (G.sub(a, b), G.sub(b, a)):
                if d not in seen_elems:
                    seen_elems.add(d)
                    out.add(direction_rep(G, d))
    return frozenset(out)


def all_directions(G: Group) -> frozenset[Direction]:
    """Every nonzero direction of the group."""
    out = set()
    for x in G.elements:
        if x != G.identity:
            out.add(direction_rep(G, x))
    return frozenset(out)
