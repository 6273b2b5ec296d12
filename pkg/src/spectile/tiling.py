"""Tiling-pair verification and tiling-complement search.

Complement search is an exact cover problem: choose translates S + g that
partition the group. The search always fixes the translate at 0 first
(complements are translation-invariant, so some complement contains 0 iff
any exists) and branches on the uncovered cell with the fewest remaining
options.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import (
    UNDECIDED,
    EmptyInput,
    GroupMismatch,
    InvalidArgument,
    NotADivisor,
    Undecided,
)
from .groups import (
    Element,
    Group,
    Multiset,
    Subgroup,
    coset_id_table,
    subgroups_of_order,
)

DEFAULT_BUDGET = 5_000_000


class ComplementMethod(str, enum.Enum):
    EXACT_COVER = "exact-cover"
    SUBGROUP = "subgroup"


@dataclass(frozen=True)
class ComplementWitness:
    """A verified tiling complement containing 0."""

    t: Multiset
    method: ComplementMethod


def is_tiling_pair(S: Multiset, T: Multiset) -> bool:
    """True iff |S| |T| = |G| and S + T covers every element exactly once."""
    if S.group != T.group:
        raise GroupMismatch("S and T live on different groups")
    G = S.group
    if S.mass * T.mass != G.order:
        return False
    if not (S.is_set and T.is_set):
        return False
    counts = bytearray(G.order)
    index_of = G.index_of
    add = G.add
    for s in S.mult:
        for t in T.mult:
            i = index_of(add(s, t))
            if counts[i]:
                return False
            counts[i] = 1
    return True


class _OutOfBudget(Exception):
    pass


def _cover_search(
    n: int,
    option_masks: list[int],
    cell_options: list[list[int]],
    start_mask: int,
    budget: int,
) -> tuple[Union[list[int], None, Undecided], int]:
    """Exact cover of cells 0..n-1 by options, with option 0 pre-chosen."""
    full = (1 << n) - 1
    nodes = 0

    def search(covered: int, chosen: list[int]) -> Optional[list[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if covered == full:
            return chosen
        # branch on the uncovered cell with the fewest viable options
        best_cell = -1
        best_count = n + 1
        rest = ~covered & full
        while rest:
            lb = rest & -rest
            c = lb.bit_length() - 1
            rest ^= lb
            count = 0
            for g in cell_options[c]:
                if not option_masks[g] & covered:
                    count += 1
                    if count >= best_count:
                        break
            if count == 0:
                return None
            if count < best_count:
                best_cell, best_count = c, count
                if count == 1:
                    break
        for g in cell_options[best_cell]:
            if not option_masks[g] & covered:
                out = search(covered | option_masks[g], chosen + [g])
                if out is not None:
                    return out
        return None

    try:
        return search(start_mask, [0]), nodes
    except _OutOfBudget:
        return UNDECIDED, nodes


def find_complement(
    S: Multiset, budget: int = DEFAULT_BUDGET
) -> Union[ComplementWitness, None, Undecided]:
    """Search for a tiling complement of S containing 0.

    None means exhaustive search proved no complement exists; UNDECIDED is
    returned only on budget exhaustion.
    """
    if S.mass == 0:
        raise EmptyInput("cannot search a complement for the empty set")
    if not S.is_set:
        raise InvalidArgument("complement search expects a set (0/1 multiset)")
    G = S.group
    if G.order % S.mass:
        return None
    if S.mass == G.order:
        return ComplementWitness(
            t=Multiset.set_of(G, [G.identity]), method=ComplementMethod.EXACT_COVER
        )
    n = G.order
    index_of = G.index_of
    add = G.add
    option_masks = []
    for g in G.elements:
        mask = 0
        for s in S.mult:
            mask |= 1 << index_of(add(s, g))
        option_masks.append(mask)
    # cell c is covered by translate g exactly when g = c - s for some s
    sub = G.sub
    cell_options = []
    for c in G.elements:
        cell_options.append(sorted(index_of(sub(c, s)) for s in S.mult))
    out, _nodes = _cover_search(n, option_masks, cell_options, option_masks[0], budget)
    if out is UNDECIDED:
        return UNDECIDED
    if out is None:
        return None
    t = Multiset.set_of(G, [G.coords_of(g) for g in out])
    witness = ComplementWitness(t=t, method=ComplementMethod.EXACT_COVER)
    if not is_tiling_pair(S, t):  # pragma: no cover - cover search guarantees this
        raise InvalidArgument("internal error: cover witness failed verification")
    return witness


def tiles_by_subgroup(S: Multiset) -> Optional[Subgroup]:
    """A subgroup complement for S (S hits each coset exactly once), or None."""
    if not S.is_set:
        raise InvalidArgument("subgroup-complement search expects a set")
    G = S.group
    if S.mass == 0 or G.order % S.mass:
        raise NotADivisor(f"|S| = {S.mass} does not divide |G| = {G.order}")
    m = G.order // S.mass
    index_of = G.index_of
    for H in subgroups_of_order(G, m):
        ids = coset_id_table(H)
        seen = 0
        ok = True
        for s in S.mult:
            b = 1 << ids[index_of(s)]
            if seen & b:
                ok = False
                break
            seen |= b
        if ok:
            return H
    return None


def enumerate_tiles(
    G: Group,
    k: int,
    mode: str = "exhaustive",
    seed: Optional[int] = None,
    count: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[tuple[Multiset, ComplementWitness]]:
    """Yield size-k tiles containing 0, each with a complement witness.

    Exhaustive mode scans every 0-containing k-subset; sample mode draws
    `count` seeded random subsets and yields the tiles among them. A size
    not dividing |G| yields nothing.
    """
    if k < 1 or G.order % k:
        return
    if mode == "exhaustive":
        candidates: Iterator[tuple[Element, ...]] = (
            (G.identity,) + tuple(G.coords_of(i) for i in combo)
            for combo in itertools.combinations(range(1, G.order), k - 1)
        )
    elif mode == "sample":
        if seed is None or count is None:
            raise InvalidArgument("sample mode requires seed and count")
        rng = random.Random(f"{seed}:{k}")
        population = range(1, G.order)

        def _sampled() -> Iterator[tuple[Element, ...]]:
            seen = set()
            for _ in range(count):
                picks = tuple(sorted(rng.sample(population, k - 1)))
                if picks in seen:
                    continue
                seen.add(picks)
                yield (G.identity,) + tuple(G.coords_of(i) for i in picks)

        candidates = _sampled()
    else:
        raise InvalidArgument(f"unknown mode {mode!r}")

    for cand in candidates:
        S = Multiset.set_of(G, cand)
        H = tiles_by_subgroup(S)
        if H is not None:
            yield S, ComplementWitness(t=H.as_set(), method=ComplementMethod.SUBGROUP)
            continue
        witness = find_complement(S, budget)
        if witness is UNDECIDED:
            raise InvalidArgument(
                f"tile enumeration budget exhausted on {sorted(S.mult)!r}"
            )
        if witness is not None:
            yield S, witness
