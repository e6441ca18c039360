import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_containment, float_support, flow_feasible, subsets
from setid.artstein import (
    ChoiceFrequencies, ChoiceParamVector, artstein_system, build_sharp_region, build_theta1_region,
    containment_functional, find_selection, in_sharp_region, mask_of, pair_direction, selection_feasible,
    strict_inclusion_witness, subset_label, subset_order,
)
from setid.exceptions import InvalidInputError
from setid.polytope import contains, support

F = Fraction
third = (F(1, 3),) * 3


def test_subset_order_n3():
    assert [subset_label(m) for m in subset_order(3)] == ["0", "1", "2", "01", "02", "12", "012"]


def test_subset_order_matches_brute_force():
    for n in range(1, 6):
        assert sorted(subset_order(n)) == sorted(subsets(n))


def test_param_vector_validation():
    with pytest.raises(InvalidInputError):
        ChoiceParamVector(2, {1: F(1, 2)})
    with pytest.raises(InvalidInputError):
        ChoiceParamVector(2, {1: F(3, 2), 2: F(-1, 2)})
    with pytest.raises(InvalidInputError):
        ChoiceParamVector(2, {4: 1})
    t = ChoiceParamVector.from_labels(3, {"theta_01": "1/2", "2": "1/2"})
    assert t.as_vector() == (0, 0, F(1, 2), F(1, 2), 0, 0, 0)
    assert ChoiceParamVector.from_vector(3, t.as_vector()) == t


def test_frequencies_validation():
    with pytest.raises(InvalidInputError):
        ChoiceFrequencies((F(1, 2), F(1, 3)))
    assert ChoiceFrequencies((F(1, 2), F(1, 3)), gamma=F(1, 6)).n == 2
    with pytest.raises(InvalidInputError):
        build_sharp_region(ChoiceFrequencies((F(1, 2), F(1, 3)), gamma=F(1, 6)))


def test_containment_functional_examples():
    t = ChoiceParamVector.from_labels(3, {"0": "1/4", "01": "1/4", "012": "1/2"})
    assert containment_functional(t, mask_of([0, 1])) == F(1, 2)
    assert containment_functional(t, 0b111) == 1
    assert containment_functional(t, 0b010) == 0


def test_sharp_region_rows_and_labels():
    s = build_sharp_region(third)
    assert s.dimension == 7
    assert len(s.inequalities) == 7 + 7
    assert s.names[3] == "theta_01"
    assert s.labels[7 + 3] == "sum over subsets of {a0,a1} <= p0+p1"
    assert len(build_theta1_region(third).inequalities) == 7 + 3


def test_support_of_full_set_mass():
    # everyone unable to rank any pair is consistent with any choice data
    d = [0] * 6 + [1]
    assert support(build_sharp_region(third), d) == 1
    assert in_sharp_region(ChoiceParamVector(3, {7: 1}), third)


def test_support_of_pair_containment():
    d = pair_direction(0b011, 3)
    assert support(build_sharp_region(third), d) == F(2, 3)
    assert support(build_theta1_region(third), d) == 1


def test_selection_examples():
    p = (F(2, 5), F(3, 5))
    plan = find_selection(ChoiceParamVector.from_labels(2, {"0": "3/10", "1": "1/2", "01": "1/5"}), p)
    assert plan is not None
    got = [F(0), F(0)]
    for (_, i), q in plan.items():
        got[i] += q
    assert tuple(got) == p
    assert not selection_feasible(ChoiceParamVector.from_labels(2, {"0": "1/2", "1": "1/2"}), p)
    with pytest.raises(InvalidInputError):
        find_selection(ChoiceParamVector(3, {7: 1}), p)


def test_witness_uniform():
    w = strict_inclusion_witness(third, 0b011)
    x = w.as_vector()
    assert contains(build_theta1_region(third), x)
    assert not contains(build_sharp_region(third), x)
    assert containment_functional(w, 0b011) == 1


def test_witness_none_cases():
    # inequality cannot bind when the pair already carries all choices
    assert strict_inclusion_witness((1, 0, 0), 0b011) is None
    assert strict_inclusion_witness((F(1, 2), F(1, 2)), 0b11) is None
    # a point mass on one alternative still leaves room elsewhere
    assert strict_inclusion_witness((1, 0, 0), 0b110) is not None
    with pytest.raises(InvalidInputError):
        strict_inclusion_witness(third, 0b001)


def _random_theta(rng, n, den=12):
    masks = subset_order(n)
    cuts = sorted(rng.randint(0, den) for _ in range(len(masks) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return ChoiceParamVector(n, {m: F(v, den) for m, v in zip(masks, parts)})


def _random_p(rng, n, den=12):
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    return tuple(F(b - a, den) for a, b in zip([0] + cuts, cuts + [den]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_three_routes_agree(n):
    rng = random.Random(1000 + n)
    outcomes = set()
    for _ in range(150):
        theta, p = _random_theta(rng, n), _random_p(rng, n)
        brute = all(brute_containment(theta.masses, A) <= sum(p[i] for i in range(n) if A >> i & 1)
                    for A in subsets(n))
        outcomes.add(brute)
        assert in_sharp_region(theta, p) == brute
        assert selection_feasible(theta, p) == brute
        assert flow_feasible(theta.masses, p) == brute
    assert outcomes == {True, False}


@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_lp_support_matches_float_reference(n, rng):
    p = _random_p(rng, n)
    s = build_sharp_region(p)
    d = [rng.randint(-2, 2) for _ in range(s.dimension)]
    ref = float_support(s, d)
    assert abs(float(support(s, d)) + ref.fun) < 1e-7


@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_larger_bounds_give_larger_region(n, rng):
    # region grows when every right-hand side grows (compared by support functions)
    p = _random_p(rng, n)
    base = {A: sum((p[i] for i in range(n) if A >> i & 1), F(0)) for A in subset_order(n)}
    bigger = {A: min(F(1), b + F(rng.randint(0, 3), 12)) for A, b in base.items()}
    small, large = artstein_system(n, base), artstein_system(n, bigger)
    for _ in range(5):
        d = [rng.randint(-2, 2) for _ in range(small.dimension)]
        assert support(small, d) <= support(large, d)


@given(st.randoms(use_true_random=False))
def test_theta1_contains_sharp_region(rng):
    p = _random_p(rng, 3)
    s, s1 = build_sharp_region(p), build_theta1_region(p)
    for _ in range(4):
        d = [rng.randint(-2, 2) for _ in range(7)]
        assert support(s, d) <= support(s1, d)
