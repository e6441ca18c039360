import json
import math
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from setid.artstein import ChoiceParamVector, containment_functional, subset_order
from setid.exceptions import InvalidInputError
from setid.simulation import (
    PopulationSpec, SelectionError, draw_population, iv_experiment, simulate, summarize_draws, verify_artstein,
)


def fixture(name):
    return PopulationSpec.from_dict(json.loads(resources.files("setid").joinpath("data", name).read_text()))


def binary(loc1=1.0, width=0.0, size=100_000, seed=5, **kw):
    return PopulationSpec.from_dict({
        "n": 2, "midpoints": [{"family": "normal", "loc": 0, "scale": 1}, {"family": "normal", "loc": loc1, "scale": 1}],
        "half_widths": {"family": "fixed", "value": width}, "size": size, "seed": seed, **kw})


def test_complete_preferences_point_identify():
    r = simulate(binary(width=0.0))
    assert r.theta_share(3) == 0
    for a in (0, 1):
        assert r.p[a] == pytest.approx(r.theta_share(1 << a), abs=1e-12)


def test_total_vagueness():
    r = simulate(binary(loc1=0.0, width=10.0))
    assert r.theta_share(3) > 0.999
    assert all(verify_artstein(r).values())


def test_uniform_rule_passes_artstein():
    r = simulate(binary(loc1=0.3, width=0.5))
    assert all(verify_artstein(r).values())
    assert all(row.slack >= 0 for row in r.slack)  # holds draw by draw, not only on average


def test_reproducible_and_worker_independent():
    spec = fixture("population_intermediate.json").replace(size=40_000)
    a = simulate(spec).to_dict()
    assert simulate(spec).to_dict() == a
    assert simulate(spec.replace(n_jobs=3)).to_dict() == a
    assert json.dumps(a) == json.dumps(simulate(spec.replace(n_jobs=2)).to_dict())


def test_agent_streams_do_not_depend_on_population_size():
    spec = fixture("population_intermediate.json")
    big = draw_population(spec.replace(size=20_000))
    small = draw_population(spec.replace(size=17))
    assert (big.masks[:17] == small.masks).all()
    assert (big.choices[:17] == small.choices).all()


def test_different_seeds_differ():
    assert simulate(binary(seed=1, width=0.5)).theta_counts != simulate(binary(seed=2, width=0.5)).theta_counts


def test_containment_identity_is_exact():
    spec = fixture("population_intermediate.json").replace(size=30_000)
    draws = draw_population(spec)
    r = summarize_draws(spec, draws)
    theta = ChoiceParamVector(3, r.theta)
    for A in subset_order(3):
        count = int(((draws.masks & ~A) == 0).sum())
        assert containment_functional(theta, A) == Fraction(count, spec.size)


def test_minmax_regret_routes_by_midpoint():
    spec = binary(loc1=0.3, width=0.7, rule="minmax-regret", size=50_000)
    draws = draw_population(spec)
    r = summarize_draws(spec, draws)
    mid_first = np.argmax(draws.lower + draws.upper, axis=1)
    undecided = draws.masks == 3
    for a in (0, 1):
        routed = int((undecided & (mid_first == a)).sum())
        assert r.choice_counts[a] == r.theta_counts.get(1 << a, 0) + routed


def test_minmax_regret_requires_two_alternatives():
    with pytest.raises(InvalidInputError):
        fixture("population_complete.json").replace(rule="minmax-regret")


def test_abstention_rule():
    r = simulate(fixture("population_intermediate.json").replace(size=30_000))
    assert 0 < r.gamma < 1
    assert all(verify_artstein(r).values())


def test_selection_validity_is_enforced():
    def dominated(masks, **_):
        return np.where(masks == 1, 1, 0)

    with pytest.raises(SelectionError):
        simulate(binary(width=0.0, size=1000), selector=dominated)
    r = simulate(binary(width=0.0, size=10_000), selector=dominated, check=False)
    assert not all(verify_artstein(r).values())


def test_single_alternative_trivially_passes():
    spec = PopulationSpec.from_dict({"n": 1, "midpoints": {"family": "normal", "loc": 0, "scale": 1},
                                     "half_widths": {"family": "fixed", "value": 0}, "size": 500, "seed": 1})
    r = simulate(spec)
    assert verify_artstein(r) == {"0": True}


def test_perfect_instrument_leaves_theta_unchanged():
    r = simulate(fixture("population_iv_perfect.json"))
    assert r.delta == (0.0, 0.0)
    a, b = r.theta_counts_by_z
    na, nb = r.z_sizes
    for m in (1, 2, 3):
        pa, pb = a.get(m, 0) / na, b.get(m, 0) / nb
        pool = (a.get(m, 0) + b.get(m, 0)) / (na + nb)
        se = math.sqrt(pool * (1 - pool) * (1 / na + 1 / nb))
        assert abs(pa - pb) <= 3 * se


def test_iv_experiment_requires_instrument():
    with pytest.raises(InvalidInputError):
        iv_experiment(binary())


def test_rule_ignoring_instrument_gives_no_swing():
    spec = fixture("population_iv_perfect.json").replace(rule="uniform")
    _, check = iv_experiment(spec)
    assert abs(check.delta0) <= 3 * check.se
    assert check.holds


@pytest.mark.parametrize("bad", [
    {"n": 0},
    {"size": 0},
    {"seed": -1},
    {"rule": "random"},
    {"midpoints": {"family": "normal", "loc": 0, "scale": 0}},
    {"midpoints": {"family": "gamma", "shape": 1}},
    {"half_widths": {"family": "fixed", "value": -1}},
    {"half_widths": {"family": "uniform", "low": 2, "high": 1}},
    {"instrument": {"values": ["a"], "orders": {"a": [0, 0]}}},
    {"instrument": {"values": ["a"], "shifts": {"a": [0.0, float("inf")]}}},
    {"instrument": {"values": []}},
    {"abstain_probability": 2},
    {"bogus": 1},
])
def test_spec_validation(bad):
    base = {"n": 2, "midpoints": {"family": "normal", "loc": 0, "scale": 1},
            "half_widths": {"family": "fixed", "value": 0.5}, "size": 10, "seed": 1}
    with pytest.raises(InvalidInputError):
        PopulationSpec.from_dict({**base, **bad})


def test_report_json_is_complete():
    r = simulate(fixture("population_iv_imperfect.json").replace(size=2000))
    d = json.loads(json.dumps(r.to_dict()))
    assert set(d) >= {"theta", "p", "gamma", "instrument", "delta_choice", "delta", "slack"}
    assert math.isclose(sum(d["theta"].values()), 1.0)
    assert all("se" in row for row in d["slack"])
