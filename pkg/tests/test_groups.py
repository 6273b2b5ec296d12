import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectile import (
    Direction,
    GroupMismatch,
    InvalidArgument,
    InvalidModulus,
    Multiset,
    NotADivisor,
    Overflow,
    Subgroup,
    all_directions,
    annihilator,
    cyclic_subgroup,
    determined_directions,
    direction_rep,
    dot,
    element_order,
    make_group,
    project_along,
    subgroups_of_order,
    sylow_projection,
)


def test_make_group_basic():
    assert make_group([2, 3]).order == 6
    assert make_group([2, 3]).exponent == 6
    assert make_group([2, 2, 3, 3]).order == 36
    assert make_group([2, 2, 3, 3]).exponent == 6
    assert make_group([4]).order == 4
    assert make_group([4]).exponent == 4


def test_make_group_rejects_bad_moduli():
    with pytest.raises(InvalidModulus):
        make_group([1, 3])
    with pytest.raises(InvalidModulus):
        make_group([])
    with pytest.raises(Overflow):
        make_group([2**32, 2**32])


def test_index_round_trip(z36):
    for i in range(z36.order):
        assert z36.index_of(z36.coords_of(i)) == i
    assert list(z36.elements) == sorted(z36.elements)  # index order is lex order


def test_dot_examples(z6, z36):
    for y in z6.elements:
        assert dot(z6, (0, 0), y) == 0
    assert dot(z6, (1, 1), (1, 1)) == 5
    assert dot(z36, (1, 0, 1, 0), (1, 0, 2, 0)) == 1


def test_dot_rejects_foreign_elements(z6):
    with pytest.raises(GroupMismatch):
        dot(z6, (1, 1, 1), (0, 0))
    with pytest.raises(GroupMismatch):
        dot(z6, (0, 5), (0, 0))


@st.composite
def group_and_elements(draw, count=2):
    moduli = draw(st.lists(st.sampled_from([2, 3, 4, 5]), min_size=1, max_size=3))
    G = make_group(moduli)
    elems = [
        tuple(draw(st.integers(0, n - 1)) for n in moduli) for _ in range(count)
    ]
    return G, elems


@given(group_and_elements(count=2))
def test_dot_symmetric(data):
    G, (x, y) = data
    assert dot(G, x, y) == dot(G, y, x)


@given(group_and_elements(count=3))
def test_dot_bilinear(data):
    G, (x, y, z) = data
    lhs = dot(G, G.add(x, z), y)
    rhs = (dot(G, x, y) + dot(G, z, y)) % G.exponent
    assert lhs == rhs


def test_element_order_examples(z6):
    assert element_order(z6, (0, 0)) == 1
    assert element_order(z6, (1, 0)) == 2
    assert element_order(z6, (1, 1)) == 6


def test_direction_rep_examples(z6):
    assert direction_rep(z6, (0, 0)) == Direction(rep=(0, 0), order=1)
    assert direction_rep(z6, (0, 2)) == Direction(rep=(0, 1), order=3)
    assert direction_rep(z6, (1, 2)) == Direction(rep=(1, 1), order=6)


def test_directions_partition_group(z36):
    # every nonzero element belongs to exactly one direction class, and the
    # class of v has phi(ord v) members
    by_dir = {}
    for x in z36.elements:
        if x == z36.identity:
            continue
        by_dir.setdefault(direction_rep(z36, x), []).append(x)
    total = sum(len(v) for v in by_dir.values())
    assert total == z36.order - 1
    phi = lambda n: sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    for d, members in by_dir.items():
        assert len(members) == phi(d.order)
        assert set(members) == {
            x for x in cyclic_subgroup(z36, d.rep) if element_order(z36, x) == d.order
        }


def test_annihilator_examples(z6):
    whole = annihilator(z6, Multiset.set_of(z6, [(0, 0)]))
    assert whole.order == 6
    trivial = annihilator(z6, Multiset.set_of(z6, z6.elements))
    assert trivial.elements == ((0, 0),)
    line = annihilator(z6, Multiset.set_of(z6, [(1, 0)]))
    assert line.elements == ((0, 0), (0, 1), (0, 2))


def test_annihilator_order_product(z36):
    # |ann(S)| * |<support S>| = |G|
    rng = random.Random(4)
    for _ in range(25):
        pts = rng.sample(range(z36.order), rng.randint(1, 6))
        S = Multiset.set_of(z36, [z36.coords_of(i) for i in pts])
        ann = annihilator(z36, S)
        gen = {z36.identity}
        frontier = list(S.mult)
        while frontier:
            x = frontier.pop()
            for g in list(gen):
                y = z36.add(g, x)
                if y not in gen:
                    gen.add(y)
                    frontier.append(y)
        assert ann.order * len(gen) == z36.order


def test_subgroups_of_order(z6, z36):
    assert [H.elements for H in subgroups_of_order(z6, 1)] == [((0, 0),)]
    assert len(subgroups_of_order(z6, 2)) == 1
    assert len(subgroups_of_order(z36, 2)) == 3
    with pytest.raises(NotADivisor):
        subgroups_of_order(z6, 4)


def test_subgroups_no_duplicates(z36):
    for m in (2, 3, 4, 6, 9, 12, 18, 36):
        subs = subgroups_of_order(z36, m)
        assert len({H.elements for H in subs}) == len(subs)
        for H in subs:
            assert H.order == m


def test_subgroup_lattice_count(z36):
    # product of the subgroup counts of the two square factors: (1+3+1)(1+4+1)
    total = sum(
        len(subgroups_of_order(z36, m)) for m in (1, 2, 3, 4, 6, 9, 12, 18, 36)
    )
    assert total == 30


def test_subgroup_validation(z6):
    with pytest.raises(InvalidArgument):
        Subgroup(z6, ((0, 0), (0, 1)))  # not closed
    with pytest.raises(InvalidArgument):
        Subgroup(z6, ((1, 0),))  # no identity


def test_sylow_projection_examples(z6):
    empty = sylow_projection(z6, Multiset(z6, {}), 2)
    assert empty.mass == 0
    A = Multiset.set_of(z6, [(0, 0), (1, 1)])
    assert dict(sylow_projection(z6, A, 2).items()) == {(0,): 1, (1,): 1}
    B = Multiset.set_of(z6, [(0, 0), (0, 1)])
    assert dict(sylow_projection(z6, B, 2).items()) == {(0,): 2}
    with pytest.raises(NotADivisor):
        sylow_projection(z6, A, 5)


def test_sylow_projection_crt_moduli():
    G = make_group([10, 10])
    A = Multiset.set_of(G, [(3, 7), (4, 5)])
    S2 = sylow_projection(G, A, 2)
    assert S2.group.moduli == (2, 2)
    assert dict(S2.items()) == {(1, 1): 1, (0, 1): 1}
    S5 = sylow_projection(G, A, 5)
    assert dict(S5.items()) == {(3, 2): 1, (4, 0): 1}


def test_project_along_examples(z6):
    A = Multiset.set_of(z6, [(0, 0), (1, 0), (0, 1)])
    everything = project_along(z6, A, (0, 0))
    assert dict(everything.items()) == {(0,): 3}
    p2 = project_along(z6, A, (1, 0))
    assert dict(p2.items()) == {(0,): 2, (1,): 1}
    B = Multiset.set_of(z6, [(0, 0), (1, 0)])
    p6 = project_along(z6, B, (1, 1))
    assert dict(p6.items()) == {(0,): 1, (3,): 1}


def test_projection_preserves_mass(z36):
    rng = random.Random(9)
    for _ in range(20):
        pts = rng.sample(range(36), rng.randint(1, 12))
        A = Multiset.from_elements(
            z36, [z36.coords_of(i) for i in pts for _ in range(rng.randint(1, 3))]
        )
        alpha = z36.coords_of(rng.randrange(36))
        assert project_along(z36, A, alpha).mass == A.mass
        assert sylow_projection(z36, A, 2).mass == A.mass
        assert sylow_projection(z36, A, 3).mass == A.mass


def test_determined_directions_examples(z6):
    single = Multiset.set_of(z6, [(1, 2)])
    assert determined_directions(single) == frozenset()
    pair = Multiset.set_of(z6, [(0, 0), (0, 1)])
    assert determined_directions(pair) == frozenset({Direction((0, 1), 3)})
    full = Multiset.set_of(z6, z6.elements)
    assert determined_directions(full) == all_directions(z6)


def test_multiset_basics(z6):
    with pytest.raises(InvalidArgument):
        Multiset(z6, {(0, 0): 0})
    with pytest.raises(GroupMismatch):
        Multiset(z6, {(9, 0): 1})
    A = Multiset.from_elements(z6, [(0, 0), (0, 0), (1, 2)])
    assert A.mass == 3 and A((0, 0)) == 2 and not A.is_set
    B = A.translate((1, 0))
    assert B((1, 0)) == 2 and B.mass == 3
    assert Multiset.set_of(z6, [(0, 0), (0, 0)]).mass == 1
