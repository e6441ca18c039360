from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from setid.choice import (
    StrictRelation, UtilityInterval, UtilityProfile, fishburn_representation, is_interval_order,
    minmax_regret_choice, nondominated_set, relation_from_profile,
)
from setid.exceptions import InvalidInputError, TieError

F = Fraction


def profile(**ivs):
    return UtilityProfile.from_mapping(ivs)


def test_nondominated_basic():
    assert nondominated_set(profile(a=(0, 1), b=(2, 3))) == ("b",)
    assert nondominated_set(profile(a=(0, 2), b=(1, 3))) == ("a", "b")
    assert nondominated_set(profile(a=(5, 5))) == ("a",)


def test_boundary_tie_is_not_dominated():
    assert nondominated_set(profile(a=(0, 1), b=(1, 2))) == ("a", "b")


def test_interval_validation():
    with pytest.raises(InvalidInputError):
        UtilityInterval(2, 1)
    with pytest.raises(InvalidInputError):
        UtilityProfile(("a", "a"), ((0, 1), (0, 1)))
    assert UtilityInterval("1/2", "3/2").vagueness == 1
    assert UtilityInterval(0, 2).midpoint == 1


def test_relation_validation():
    with pytest.raises(InvalidInputError):
        StrictRelation("ab", {("a", "a")})
    with pytest.raises(InvalidInputError):
        StrictRelation("ab", {("a", "c")})


def test_two_plus_two_is_not_an_interval_order():
    rel = StrictRelation("abcd", {("a", "b"), ("c", "d")})
    ok, witness = is_interval_order(rel)
    assert not ok and witness == ("a", "b", "c", "d")
    assert fishburn_representation(rel) is None


def test_chain_representation():
    rel = StrictRelation("abc", {("a", "b"), ("b", "c"), ("a", "c")})
    rep = fishburn_representation(rel)
    assert relation_from_profile(rep) == rel
    assert all(iv.vagueness >= 1 for iv in rep.intervals)


def test_antichain_representation_overlaps():
    rep = fishburn_representation(StrictRelation("abc", frozenset()))
    assert nondominated_set(rep) == ("a", "b", "c")


def _is_partial_order(ground, pairs):
    return all((x, z) in pairs for x, y in pairs for y2, z in pairs if y == y2)


def _predecessor_chain(ground, pairs):
    # interval orders are exactly the partial orders whose predecessor sets are nested
    pred = [frozenset(x for x in ground if (x, y) in pairs) for y in ground]
    return all(a <= b or b <= a for a in pred for b in pred)


def test_exhaustive_four_elements():
    ground = "abcd"
    cells = [(x, y) for x, y in permutations(ground, 2)]
    n_interval = 0
    for bits in product((0, 1), repeat=len(cells)):
        pairs = frozenset(c for c, b in zip(cells, bits) if b)
        rel = StrictRelation(ground, pairs)
        expected = _is_partial_order(ground, pairs) and _predecessor_chain(ground, pairs)
        rep = fishburn_representation(rel)
        assert (rep is not None) == expected
        if _is_partial_order(ground, pairs):
            assert is_interval_order(rel)[0] == expected
        if rep is not None:
            n_interval += 1
            assert relation_from_profile(rep) == rel
    # labelled interval orders on 4 points
    assert n_interval == 207


def test_interval_check_size_limit():
    with pytest.raises(InvalidInputError):
        is_interval_order(StrictRelation(tuple(range(13)), frozenset()))
    with pytest.raises(InvalidInputError):
        fishburn_representation(StrictRelation((), frozenset()))


ivs = st.lists(st.tuples(st.integers(-6, 6), st.integers(0, 4)), min_size=1, max_size=6)


@given(ivs)
def test_profiles_induce_interval_orders(raw):
    prof = UtilityProfile(tuple(range(len(raw))), tuple((lo, lo + w) for lo, w in raw))
    rel = relation_from_profile(prof)
    assert is_interval_order(rel)[0]
    assert fishburn_representation(rel) is not None
    m = nondominated_set(prof)
    assert m
    # nondominated set = maximal elements of the induced relation
    assert set(m) == {x for x in rel.ground if not any(rel.below(x, y) for y in rel.ground)}


@given(ivs, st.fractions(-5, 5, max_denominator=4))
def test_nondominated_is_shift_invariant(raw, c):
    prof = UtilityProfile(tuple(range(len(raw))), tuple((lo, lo + w) for lo, w in raw))
    assert nondominated_set(prof.shifted(c)) == nondominated_set(prof)


def test_minmax_regret():
    assert minmax_regret_choice(profile(a=(0, 4), b=(1, 2))) == "a"
    assert minmax_regret_choice(profile(a=(0, 1), b=(0, 3))) == "b"
    with pytest.raises(TieError):
        minmax_regret_choice(profile(a=(0, 2), b=(0, 2)))
    with pytest.raises(InvalidInputError):
        minmax_regret_choice(profile(a=(0, 1), b=(0, 1), c=(0, 1)))


@given(st.tuples(st.integers(-5, 5), st.integers(0, 5), st.integers(-5, 5), st.integers(0, 5)))
def test_minmax_regret_always_nondominated(t):
    lo0, w0, lo1, w1 = t
    prof = profile(a=(lo0, lo0 + w0), b=(lo1, lo1 + w1))
    try:
        pick = minmax_regret_choice(prof)
    except TieError:
        return
    assert pick in nondominated_set(prof)
