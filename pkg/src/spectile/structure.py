"""Structure detectors for groups of shape Z_p^2 x Z_q^2.

The main tiling/spectral equivalence proof on these groups splits on the
gcd of the set size with the group order and leans on the fiber ("leaf")
structure of a set over the q-square factor. This module implements those
detectors: gcd classification, leaf decomposition, the constant-mod-q
Sylow projection shape, the aligned-leaf condition along a direction, the
two-factor constancy law, and the coset-collision trichotomy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

from .cyclotomic import char_sum_vanishes
from .errors import (
    InvalidArgument,
    InvalidDirection,
    NotPQShape,
    TooSmall,
    WrongShape,
)
from .groups import (
    Direction,
    Element,
    Group,
    Multiset,
    Subgroup,
    cyclic_subgroup,
    direction_rep,
    sylow_projection,
)
from .tiling import ComplementMethod, ComplementWitness, is_tiling_pair


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PQShape:
    """Orientation data for a group with moduli {p, p, q, q}, p < q primes."""

    group: Group
    p: int
    q: int
    p_positions: tuple[int, int]
    q_positions: tuple[int, int]

    @cached_property
    def p_group(self) -> Group:
        return Group((self.p, self.p))

    @cached_property
    def q_group(self) -> Group:
        return Group((self.q, self.q))

    def split(self, x: Element) -> tuple[Element, Element]:
        """x -> (a, b) with a in Z_p^2, b in Z_q^2."""
        return (
            tuple(x[i] for i in self.p_positions),
            tuple(x[i] for i in self.q_positions),
        )

    def join(self, a: Element, b: Element) -> Element:
        out = [0] * 4
        for i, c in zip(self.p_positions, a):
            out[i] = c
        for i, c in zip(self.q_positions, b):
            out[i] = c
        return tuple(out)

    @cached_property
    def p_torsion(self) -> Subgroup:
        """The subgroup of elements with zero q-part (order p^2)."""
        elems = [self.join(a, (0, 0)) for a in self.p_group.elements]
        return Subgroup(self.group, tuple(elems))

    @cached_property
    def q_torsion(self) -> Subgroup:
        elems = [self.join((0, 0), b) for b in self.q_group.elements]
        return Subgroup(self.group, tuple(elems))


def pq_shape(G: Group) -> PQShape:
    """Identify a Z_p^2 x Z_q^2 group and fix the p < q orientation."""
    if len(G.moduli) != 4:
        raise NotPQShape(f"need four cyclic factors, got {G.moduli!r}")
    primes = sorted(set(G.moduli))
    if len(primes) != 2 or not all(_is_prime(r) for r in primes):
        raise NotPQShape(f"moduli {G.moduli!r} are not two distinct primes")
    p, q = primes
    p_pos = tuple(i for i, n in enumerate(G.moduli) if n == p)
    q_pos = tuple(i for i, n in enumerate(G.moduli) if n == q)
    if len(p_pos) != 2 or len(q_pos) != 2:
        raise NotPQShape(f"moduli {G.moduli!r} must contain each prime twice")
    return PQShape(group=G, p=p, q=q, p_positions=p_pos, q_positions=q_pos)


def divisibility_class(G: Group, S: Multiset) -> int:
    """gcd(|S|, |G|), the case classifier for the structure analysis."""
    return math.gcd(S.mass, G.order)


class CaseKind(str, enum.Enum):
    SQUARE_TIMES_PRIME = "square-times-prime"  # gcd = r^2 s
    PRIME_SQUARE = "prime-square"  # gcd = r^2
    TRIVIAL = "trivial"  # gcd = 1
    PRIME = "prime"  # gcd = r
    COPRIME_PRODUCT = "coprime-product"  # gcd = pq


@dataclass(frozen=True)
class CaseTag:
    """Which divisibility case a set falls in, with the prime orientation.

    square_prime is the prime whose square divides the gcd (when one does);
    linear_prime the prime appearing to the first power.
    """

    kind: CaseKind
    n: int
    square_prime: Optional[int] = None
    linear_prime: Optional[int] = None


def classify_case(shape: PQShape, S: Multiset) -> CaseTag:
    """Classify gcd(|S|, |G|) into the five structure cases."""
    if S.group != shape.group:
        raise NotPQShape("set lives on a different group")
    n = divisibility_class(shape.group, S)
    p, q = shape.p, shape.q
    if n == 1:
        return CaseTag(CaseKind.TRIVIAL, n)
    if n == p or n == q:
        return CaseTag(CaseKind.PRIME, n, linear_prime=n)
    if n == p * q:
        return CaseTag(CaseKind.COPRIME_PRODUCT, n)
    if n == p * p:
        return CaseTag(CaseKind.PRIME_SQUARE, n, square_prime=p)
    if n == q * q:
        return CaseTag(CaseKind.PRIME_SQUARE, n, square_prime=q)
    if n == p * p * q:
        return CaseTag(CaseKind.SQUARE_TIMES_PRIME, n, square_prime=p, linear_prime=q)
    if n == p * q * q:
        return CaseTag(CaseKind.SQUARE_TIMES_PRIME, n, square_prime=q, linear_prime=p)
    raise InvalidArgument(
        f"gcd {n} equals the group order; only proper set sizes are classified"
    )


@dataclass(frozen=True)
class LeafDecomposition:
    """The fibers K_a = (S intersect (a + Z_q^2)) - a, for every a in Z_p^2."""

    shape: PQShape
    leaves: dict[Element, frozenset[Element]]

    def mass(self) -> int:
        return sum(len(K) for K in self.leaves.values())

    def reassemble(self) -> Multiset:
        shape = self.shape
        elems = [
            shape.join(a, b) for a, K in self.leaves.items() for b in K
        ]
        return Multiset.set_of(shape.group, elems)


def leaf_decomposition(shape: PQShape, S: Multiset) -> LeafDecomposition:
    """Split a set into its fibers over the p-square coordinates."""
    if S.group != shape.group:
        raise NotPQShape("set lives on a different group")
    if not S.is_set:
        raise InvalidArgument("leaf decomposition expects a set")
    buckets: dict[Element, set[Element]] = {a: set() for a in shape.p_group.elements}
    for x in S.mult:
        a, b = shape.split(x)
        buckets[a].add(b)
    return LeafDecomposition(
        shape=shape, leaves={a: frozenset(K) for a, K in buckets.items()}
    )


@dataclass(frozen=True)
class LeafConstancy:
    """S_p = c * (all of Z_p^2) + q * D with c the pointwise minimum."""

    c: int
    d: Multiset


def leaf_constancy(shape: PQShape, S: Multiset) -> Optional[LeafConstancy]:
    """Decompose the Sylow p-projection as constant plus q times a multiset.

    Returns None when (S_p - min) is not pointwise divisible by q; the
    returned c is the canonical (unique) choice, the pointwise minimum.
    """
    if S.group != shape.group:
        raise NotPQShape("set lives on a different group")
    sp = sylow_projection(shape.group, S, shape.p)
    values = {a: 0 for a in shape.p_group.elements}
    for a, m in sp.items():
        values[a] = m
    c = min(values.values())
    q = shape.q
    residues = {a: v - c for a, v in values.items()}
    if any(r % q for r in residues.values()):
        return None
    d_counts = {a: r // q for a, r in residues.items() if r}
    return LeafConstancy(c=c, d=Multiset(shape.p_group, d_counts))


def assumption_a_holds(shape: PQShape, S: Multiset, u: Element) -> bool:
    """Aligned leaves along u: on each line b + <u>, nonempty fibers agree."""
    if S.group != shape.group:
        raise NotPQShape("set lives on a different group")
    pg = shape.p_group
    if not pg.contains(u):
        raise InvalidDirection(f"{u!r} is not an element of the p-square factor")
    if u == pg.identity:
        raise InvalidDirection("direction must be nonzero")
    leaves = leaf_decomposition(shape, S).leaves
    line = cyclic_subgroup(pg, u)
    seen: set[Element] = set()
    for b in pg.elements:
        if b in seen:
            continue
        coset = [pg.add(b, t) for t in line]
        seen.update(coset)
        nonempty = [leaves[a] for a in coset if leaves[a]]
        if nonempty and any(K != nonempty[0] for K in nonempty[1:]):
            return False
    return True


def prop1_validate(T: Multiset) -> tuple[bool, bool]:
    """Check the two-factor constancy law on a multiset over Z_p x Z_q^2.

    hypothesis: the character sum of T vanishes at every (x, y) with both
    the Z_p part x and the Z_q^2 part y nonzero. conclusion: the fiber
    functions g_i(z) = T(i + z) differ by constants. Both truth values are
    returned so vacuous cases stay visible.
    """
    G = T.group
    if len(G.moduli) != 3:
        raise WrongShape(f"need three cyclic factors, got {G.moduli!r}")
    counts: dict[int, int] = {}
    for n in G.moduli:
        counts[n] = counts.get(n, 0) + 1
    singles = [n for n, c in counts.items() if c == 1]
    doubles = [n for n, c in counts.items() if c == 2]
    if len(singles) != 1 or len(doubles) != 1:
        raise WrongShape(f"moduli {G.moduli!r} are not of shape (p, q, q)")
    p, q = singles[0], doubles[0]
    if p == q or not (_is_prime(p) and _is_prime(q)):
        raise WrongShape(f"moduli {G.moduli!r} are not distinct primes (p, q, q)")
    p_pos = G.moduli.index(p)
    q_pos = [i for i in range(3) if i != p_pos]

    def build(i: int, z: Element) -> Element:
        out = [0, 0, 0]
        out[p_pos] = i
        out[q_pos[0]], out[q_pos[1]] = z
        return tuple(out)

    qq = Group((q, q))
    hypothesis = True
    for x in range(1, p):
        for y in qq.elements:
            if y == (0, 0):
                continue
            if not char_sum_vanishes(G, T, build(x, y)):
                hypothesis = False
                break
        if not hypothesis:
            break

    conclusion = True
    base = {z: T(build(0, z)) for z in qq.elements}
    for i in range(1, p):
        deltas = {T(build(i, z)) - base[z] for z in qq.elements}
        if len(deltas) > 1:
            conclusion = False
            break
    return hypothesis, conclusion


@lru_cache(maxsize=None)
def _cyclic_coset_ids(G: Group, g: Element) -> tuple[int, ...]:
    """Coset id (by element index) for the cosets of <g>."""
    H = cyclic_subgroup(G, g)
    table = [-1] * G.order
    next_id = 0
    for i, x in enumerate(G.elements):
        if table[i] == -1:
            for h in H:
                table[G.index_of(G.add(x, h))] = next_id
            next_id += 1
    return tuple(table)


class TrichotomyWitnessKind(str, enum.Enum):
    P_ONLY = "p-direction"  # difference (a', 0), a' ~ a
    Q_ONLY = "q-direction"  # difference (0, b'), b' ~ b
    MIXED = "mixed-direction"  # difference (a', b') with both parts nonzero


@dataclass(frozen=True)
class TrichotomyResult:
    """Either a size-pq tiling certificate, or a direction witness per pair."""

    tile: Optional[ComplementWitness]
    witnesses: Optional[dict[tuple[Element, Element], tuple[TrichotomyWitnessKind, Direction]]]


def direction_trichotomy(shape: PQShape, A: Multiset) -> TrichotomyResult:
    """For |A| >= pq: certify a pq-size tiling, or witness a determined
    direction in <(a, b)> for every pair of nonzero a, b.

    Each <(a, b)> has index pq; if some such subgroup sees every coset at
    most once then |A| = pq and that subgroup is a tiling complement.
    Otherwise a coset collision yields a difference in <(a, b)> \\ {0},
    classified by which parts vanish.
    """
    if A.group != shape.group:
        raise NotPQShape("set lives on a different group")
    if not A.is_set:
        raise InvalidArgument("trichotomy expects a set")
    p, q = shape.p, shape.q
    if A.mass < p * q:
        raise TooSmall(f"|A| = {A.mass} < pq = {p * q}")
    G = shape.group
    pg, qg = shape.p_group, shape.q_group
    pts = A.support
    witnesses: dict[tuple[Element, Element], tuple[TrichotomyWitnessKind, Direction]] = {}
    index_of = G.index_of
    for a in pg.elements:
        if a == pg.identity:
            continue
        for b in qg.elements:
            if b == qg.identity:
                continue
            g = shape.join(a, b)
            ids = _cyclic_coset_ids(G, g)
            seen: dict[int, Element] = {}
            collision: Optional[tuple[Element, Element]] = None
            for x in pts:
                cid = ids[index_of(x)]
                if cid in seen:
                    collision = (x, seen[cid])
                    break
                seen[cid] = x
            if collision is None:
                # every coset holds at most one point, so |A| = pq and
                # <(a, b)> is a tiling complement
                t = Multiset.set_of(G, cyclic_subgroup(G, g))
                witness = ComplementWitness(t=t, method=ComplementMethod.SUBGROUP)
                if not is_tiling_pair(A, t):  # pragma: no cover
                    raise InvalidArgument("internal error: transversal failed verification")
                return TrichotomyResult(tile=witness, witnesses=None)
            d = G.sub(collision[0], collision[1])
            da, db = shape.split(d)
            if db == qg.identity:
                kind = TrichotomyWitnessKind.P_ONLY
            elif da == pg.identity:
                kind = TrichotomyWitnessKind.Q_ONLY
            else:
                kind = TrichotomyWitnessKind.MIXED
            witnesses[(a, b)] = (kind, direction_rep(G, d))
    return TrichotomyResult(tile=None, witnesses=witnesses)
