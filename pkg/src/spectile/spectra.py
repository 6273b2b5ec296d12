"""Spectral-pair verification and spectrum search.

A spectrum for a set S is a Lambda with |Lambda| = |S| whose nonzero
differences all lie in the zero set of S. Searching for one is a clique
problem on the Cayley graph of the zero set; the search here is a
deterministic branch-and-bound with a greedy-coloring bound and an explicit
node budget, so a missing spectrum is only ever reported after exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .cyclotomic import ZeroSet, char_sum_vanishes, char_table, zero_set
from .errors import (
    UNDECIDED,
    BudgetExhausted,
    EmptyInput,
    GroupMismatch,
    Undecided,
    InvalidArgument,
)
from .groups import Element, Group, Multiset, Subgroup, coset_id_table

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class SpectrumWitness:
    """A verified spectrum: 0 in lam, |lam| = |S|, lam - lam in Z(S) u {0}."""

    lam: Multiset
    checked_pairs: int


def is_spectral_pair(S: Multiset, L: Multiset) -> bool:
    """True iff |S| = |L| and every nonzero difference of L kills S-hat."""
    if S.group != L.group:
        raise GroupMismatch("S and L live on different groups")
    if S.mass != L.mass:
        return False
    G = S.group
    pts = L.support
    diffs = {G.sub(a, b) for i, a in enumerate(pts) for b in pts[:i]}
    table = char_table(G)
    if table.mass_ok(S.mass):
        items = [(G.index_of(x), m) for x, m in S.items()]
        return all(table.vanishes_index(items, G.index_of(d)) for d in diffs)
    return all(char_sum_vanishes(G, S, d) for d in diffs)  # pragma: no cover


class _Found(Exception):
    def __init__(self, clique: list[int]):
        self.clique = clique


class _OutOfBudget(Exception):
    pass


def _greedy_color_count(P: int, adj: list[int]) -> int:
    """Number of greedy color classes of the vertex mask P (clique bound)."""
    count = 0
    while P:
        count += 1
        Q = P
        while Q:
            lb = Q & -Q
            v = lb.bit_length() - 1
            Q ^= lb
            P ^= lb
            Q &= ~adj[v]
    return count


class CliqueSearch:
    """Deterministic fixed-order clique decision with node budget."""

    def __init__(self, adj: list[int], budget: int):
        self.adj = adj
        self.budget = budget
        self.nodes = 0

    def find(self, target: int) -> Union[list[int], None, Undecided]:
        """A clique of exactly `target` vertices, or None, or UNDECIDED.

        Vertices are explored in index order, so the first clique found is
        the lexicographically least in the prepared vertex order.
        """
        if target == 0:
            return []
        full = (1 << len(self.adj)) - 1
        try:
            self._expand([], full, target)
        except _Found as hit:
            return hit.clique
        except _OutOfBudget:
            return UNDECIDED
        return None

    def _expand(self, R: list[int], P: int, target: int) -> None:
        need = target - len(R)
        if P.bit_count() < need:
            return
        if _greedy_color_count(P, self.adj) < need:
            return
        Q = P
        while Q:
            if Q.bit_count() < need:
                return
            lb = Q & -Q
            v = lb.bit_length() - 1
            Q ^= lb
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            if need == 1:
                raise _Found(R + [v])
            self._expand(R + [v], Q & self.adj[v], target)


def _order_vertices(verts: list[Element], zs: ZeroSet, G: Group) -> tuple[list[Element], list[int]]:
    """Vertex order (degree desc, then lexicographic) and adjacency masks."""
    member = zs.elements
    deg = {}
    for v in verts:
        deg[v] = sum(1 for w in verts if w != v and G.sub(v, w) in member)
    order = sorted(verts, key=lambda v: (-deg[v], v))
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * len(order)
    for v in order:
        mask = 0
        for w in order:
            if w != v and G.sub(v, w) in member:
                mask |= 1 << pos[w]
        adj[pos[v]] = mask
    return order, adj


def find_spectrum(
    S: Multiset, budget: int = DEFAULT_BUDGET
) -> Union[SpectrumWitness, None, Undecided]:
    """Search for a spectrum containing 0, by clique search over the zero set.

    Returns a verified witness, or None when exhaustive search proves no
    spectrum exists, or UNDECIDED when the node budget ran out first.
    """
    if S.mass == 0:
        raise EmptyInput("cannot search a spectrum for the empty set")
    if not S.is_set:
        raise InvalidArgument("spectrum search expects a set (0/1 multiset)")
    G = S.group
    k = S.mass
    if k == 1:
        return SpectrumWitness(lam=Multiset.set_of(G, [G.identity]), checked_pairs=0)
    zs = zero_set(G, S)
    if len(zs) < k - 1:
        return None
    order, adj = _order_vertices(sorted(zs.elements), zs, G)
    search = CliqueSearch(adj, budget)
    clique = search.find(k - 1)
    if clique is UNDECIDED:
        return UNDECIDED
    if clique is None:
        return None
    lam_elems = [G.identity] + [order[i] for i in clique]
    lam = Multiset.set_of(G, lam_elems)
    # re-verify the certificate instead of trusting the search
    pairs = 0
    pts = lam.support
    for i, a in enumerate(pts):
        for b in pts[:i]:
            if G.sub(a, b) not in zs:  # pragma: no cover - search guarantees this
                raise InvalidArgument("internal error: clique witness failed verification")
            pairs += 1
    return SpectrumWitness(lam=lam, checked_pairs=pairs)


def is_spectral(S: Multiset, budget: int = DEFAULT_BUDGET) -> bool:
    """Decide spectrality; budget exhaustion raises instead of guessing."""
    out = find_spectrum(S, budget)
    if out is UNDECIDED:
        raise BudgetExhausted(f"spectrum search for {S!r} exceeded {budget} nodes")
    return out is not None


def equidistributed(A: Multiset, H: Subgroup) -> bool:
    """True iff the H-coset sums of A are all equal."""
    G = A.group
    if H.group != G:
        raise GroupMismatch("subgroup lives on a different group")
    ids = coset_id_table(H)
    sums = [0] * (G.order // H.order)
    for x, m in A.items():
        sums[ids[G.index_of(x)]] += m
    return len(set(sums)) <= 1
