"""Simulated populations of agents with interval (or multiple-prior) preferences.

Each agent draws utilities, forms the nondominated set ``M`` and picks an
element of it through a pluggable selection rule, or abstains. Because the
true ``M`` of every agent is known, the containment inequalities can be
checked against the observed choices directly.

Random numbers come from a counter-based generator: agent ``a`` reads a
fixed block of uniforms starting at offset ``a * DRAWS``, so the draws of an
agent never depend on how the population is split into chunks or workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np
from scipy.special import ndtri

from .artstein import subset_label, subset_order
from .exceptions import InvalidInputError, SetIdError
from .knightian import nondominated_masks as knightian_masks

CHUNK = 1 << 14
_U_SHIFT = 2.0 ** -54  # maps [0, 1) into (0, 1)

MIDPOINT_FAMILIES = {"normal": ("loc", "scale"), "uniform": ("low", "high"), "logistic": ("loc", "scale")}
WIDTH_FAMILIES = {"fixed": ("value",), "uniform": ("low", "high"), "exponential": ("scale",),
                  "halfnormal": ("scale",)}
RULES = ("uniform", "first-on-list", "minmax-regret", "abstain-when-undecided")


class SelectionError(SetIdError):
    """A selection rule picked an alternative outside the nondominated set."""


def _dist(spec, families, what):
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise InvalidInputError(f"{what} needs a 'family' entry, got {spec!r}")
    fam = spec["family"]
    if fam not in families:
        raise InvalidInputError(f"unknown {what} family {fam!r}; choose from {sorted(families)}")
    try:
        params = {k: float(spec[k]) for k in families[fam]}
    except KeyError as exc:
        raise InvalidInputError(f"{what} family {fam!r} needs parameter {exc.args[0]!r}") from None
    if not all(math.isfinite(v) for v in params.values()):
        raise InvalidInputError(f"{what} parameters must be finite")
    if "scale" in params and params["scale"] <= 0:
        raise InvalidInputError(f"{what} scale must be positive")
    if fam == "uniform" and params["low"] > params["high"]:
        raise InvalidInputError(f"{what} uniform needs low <= high")
    if families is WIDTH_FAMILIES and min(params.values()) < 0:
        raise InvalidInputError("half-widths must be non-negative")
    return (fam, tuple(params[k] for k in families[fam]))


def _transform(dist, u):
    fam, par = dist
    if fam == "normal":
        return par[0] + par[1] * ndtri(u)
    if fam == "logistic":
        return par[0] + par[1] * np.log(u / (1.0 - u))
    if fam == "uniform":
        return par[0] + (par[1] - par[0]) * u
    if fam == "fixed":
        return np.full_like(u, par[0])
    if fam == "exponential":
        return -par[0] * np.log1p(-u)
    if fam == "halfnormal":
        return par[0] * ndtri(0.5 + 0.5 * u)
    raise AssertionError(fam)


def _broadcast(value, n, what):
    if isinstance(value, Mapping):
        return [value] * n
    value = list(value)
    if len(value) != n:
        raise InvalidInputError(f"{what} needs one entry per alternative ({n}), got {len(value)}")
    return value


@dataclass(frozen=True)
class PopulationSpec:
    """Declarative description of a simulated population.

    ``midpoints`` and ``half_widths`` give per-alternative distributions of
    the utility interval centre and half-width; one mapping is broadcast to
    all alternatives. ``instrument`` optionally lists ``values`` (assigned
    uniformly at random), per-value list ``orders`` used by the
    first-on-list rule and per-value utility ``shifts``. ``knightian``
    replaces interval utilities by per-state utilities judged under a set
    of ``priors``.
    """

    n: int
    midpoints: tuple = ()
    half_widths: tuple = ()
    rule: str = "uniform"
    abstain_probability: float = 0.0
    instrument: Mapping | None = None
    knightian: Mapping | None = None
    size: int = 100_000
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or not 1 <= n <= 10:
            raise InvalidInputError(f"number of alternatives must be in 1..10, got {n!r}")
        if not isinstance(self.size, int) or self.size < 1:
            raise InvalidInputError("population size must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidInputError("seed must be a non-negative integer")
        if not isinstance(self.n_jobs, int) or self.n_jobs < 1:
            raise InvalidInputError("n_jobs must be a positive integer")
        if self.rule not in RULES:
            raise InvalidInputError(f"unknown selection rule {self.rule!r}; choose from {list(RULES)}")
        if self.rule == "minmax-regret" and (n != 2 or self.knightian):
            raise InvalidInputError("minmax-regret selection needs two alternatives with interval utilities")
        if not 0.0 <= float(self.abstain_probability) <= 1.0:
            raise InvalidInputError("abstain_probability must lie in [0, 1]")
        object.__setattr__(self, "abstain_probability", float(self.abstain_probability))
        if self.knightian:
            k = dict(self.knightian)
            priors = np.asarray(k.get("priors", ()), dtype=float)
            if priors.ndim != 2 or len(priors) == 0:
                raise InvalidInputError("knightian priors must be a non-empty list of vectors")
            if (priors < 0).any() or not np.allclose(priors.sum(axis=1), 1.0):
                raise InvalidInputError("each prior must be a probability vector")
            utility = _broadcast(k.get("utility", ()), n, "knightian utility")
            dists = tuple(tuple(_dist(d, MIDPOINT_FAMILIES, "state utility")
                                for d in _broadcast(row, priors.shape[1], "state utilities"))
                          for row in utility)
            object.__setattr__(self, "knightian", {"priors": priors.tolist(), "utility": dists})
        else:
            mids = tuple(_dist(d, MIDPOINT_FAMILIES, "midpoint") for d in _broadcast(self.midpoints, n, "midpoints"))
            widths = tuple(_dist(d, WIDTH_FAMILIES, "half-width")
                           for d in _broadcast(self.half_widths, n, "half_widths"))
            object.__setattr__(self, "midpoints", mids)
            object.__setattr__(self, "half_widths", widths)
        if self.instrument is not None:
            object.__setattr__(self, "instrument", _instrument(self.instrument, n))

    @property
    def n_states(self) -> int:
        return len(self.knightian["priors"][0]) if self.knightian else 0

    @property
    def draws_per_agent(self) -> int:
        body = self.n * self.n_states if self.knightian else 2 * self.n
        return -(-(3 + body) // 4) * 4

    @property
    def z_values(self) -> tuple:
        return tuple(self.instrument["values"]) if self.instrument else (None,)

    @classmethod
    def from_dict(cls, data: Mapping) -> "PopulationSpec":
        data = dict(data)
        rule = data.pop("rule", "uniform")
        abstain = data.pop("abstain_probability", 0.0)
        if isinstance(rule, Mapping):
            abstain = rule.get("probability", abstain)
            rule = rule.get("name")
        n = data.pop("alternatives", data.pop("n", None))
        known = {"midpoints", "half_widths", "instrument", "knightian", "size", "seed", "n_jobs"}
        extra = set(data) - known
        if extra:
            raise InvalidInputError(f"unknown population spec keys {sorted(extra)}")
        return cls(n=n, rule=rule, abstain_probability=abstain, **data)

    @classmethod
    def from_json(cls, stream) -> "PopulationSpec":
        return cls.from_dict(json.load(stream))

    def replace(self, **changes) -> "PopulationSpec":
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        if self.knightian:
            data["knightian"] = {"priors": self.knightian["priors"],
                                 "utility": [[_undist(d, MIDPOINT_FAMILIES) for d in row]
                                             for row in self.knightian["utility"]]}
        else:
            data["midpoints"] = [_undist(d, MIDPOINT_FAMILIES) for d in self.midpoints]
            data["half_widths"] = [_undist(d, WIDTH_FAMILIES) for d in self.half_widths]
        data.update(changes)
        return PopulationSpec(**data)


def _undist(dist, families):
    fam, par = dist
    return {"family": fam, **dict(zip(families[fam], par))}


def _instrument(spec, n):
    spec = dict(spec)
    values = list(spec.get("values", ()))
    if not values:
        raise InvalidInputError("instrument needs at least one value")
    if len(set(values)) != len(values):
        raise InvalidInputError("instrument values must be distinct")
    orders, shifts = {}, {}
    for z in values:
        order = list(spec.get("orders", {}).get(z, range(n)))
        if sorted(order) != list(range(n)):
            raise InvalidInputError(f"order for instrument value {z!r} is not a permutation of 0..{n - 1}")
        orders[z] = tuple(order)
        shift = [float(s) for s in spec.get("shifts", {}).get(z, [0.0] * n)]
        if len(shift) != n or not all(math.isfinite(s) for s in shift):
            raise InvalidInputError(f"shifts for instrument value {z!r} need {n} finite numbers")
        shifts[z] = tuple(shift)
    return {"values": tuple(values), "orders": orders, "shifts": shifts}


# --------------------------------------------------------------------------
# drawing


def _uniforms(seed: int, start: int, count: int, draws: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start * draws // 4)
    return np.random.Generator(bitgen).random((count, draws)) + _U_SHIFT


def _popcount(masks, n):
    return sum((masks >> i) & 1 for i in range(n))


def _masks_interval(lower, upper):
    best = lower.max(axis=1, keepdims=True)
    keep = upper >= best
    return (keep * (1 << np.arange(lower.shape[1], dtype=np.int64))).sum(axis=1)


@dataclass
class AgentDraws:
    """Per-agent arrays for one chunk (or the whole population)."""

    z: np.ndarray          # instrument index
    masks: np.ndarray      # nondominated set under the assigned instrument value
    cf_masks: np.ndarray   # (agents, instrument values): set under every value
    choices: np.ndarray    # chosen alternative, -1 for abstention
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None


def _nth_member(masks, k, n):
    """Index of the ``k``-th (0-based) member of each mask."""
    out = np.full(masks.shape, -1, dtype=np.int64)
    seen = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        bit = (masks >> i) & 1
        hit = (bit == 1) & (seen == k)
        out[hit] = i
        seen += bit
    return out


def _select(spec, z, masks, lower, upper, u_pick, u_abstain):
    n = spec.n
    size = _popcount(masks, n)
    if spec.rule == "first-on-list":
        orders = np.array([spec.instrument["orders"][v] if spec.instrument else tuple(range(n))
                           for v in spec.z_values])[z]
        choice = np.full(masks.shape, -1, dtype=np.int64)
        for pos in range(n - 1, -1, -1):
            alt = orders[:, pos]
            hit = ((masks >> alt) & 1) == 1
            choice[hit] = alt[hit]
    elif spec.rule == "minmax-regret":
        choice = np.argmax(lower + upper, axis=1).astype(np.int64)
    else:
        k = np.minimum((u_pick * size).astype(np.int64), size - 1)
        choice = _nth_member(masks, k, n)
    if spec.rule == "abstain-when-undecided" or spec.abstain_probability:
        if spec.rule == "abstain-when-undecided":
            abstain = (size > 1) & (u_abstain < spec.abstain_probability)
        else:
            abstain = u_abstain < spec.abstain_probability
        choice = np.where(abstain, -1, choice)
    return choice


def _draw_chunk(spec: PopulationSpec, start: int, count: int, selector: Callable | None = None,
                check: bool = True) -> AgentDraws:
    D = spec.draws_per_agent
    u = _uniforms(spec.seed, start, count, D)
    n = spec.n
    nz = len(spec.z_values)
    z = np.minimum((u[:, 0] * nz).astype(np.int64), nz - 1)
    shifts = (np.array([spec.instrument["shifts"][v] for v in spec.z_values])
              if spec.instrument else np.zeros((1, n)))
    lower = upper = None
    cf = np.empty((count, nz), dtype=np.int64)
    if spec.knightian:
        S = spec.n_states
        base = np.empty((count, n, S))
        for a in range(n):
            for s in range(S):
                base[:, a, s] = _transform(spec.knightian["utility"][a][s], u[:, 3 + a * S + s])
        priors = np.asarray(spec.knightian["priors"])
        for j in range(nz):
            cf[:, j] = knightian_masks(base + shifts[j][None, :, None], priors)
    else:
        mid = np.column_stack([_transform(spec.midpoints[a], u[:, 3 + a]) for a in range(n)])
        half = np.column_stack([_transform(spec.half_widths[a], u[:, 3 + n + a]) for a in range(n)])
        for j in range(nz):
            cf[:, j] = _masks_interval(mid - half + shifts[j], mid + half + shifts[j])
        lower = mid - half + shifts[z]
        upper = mid + half + shifts[z]
    masks = cf[np.arange(count), z]
    if selector is None:
        choices = _select(spec, z, masks, lower, upper, u[:, 1], u[:, 2])
    else:
        choices = np.asarray(selector(masks=masks, z=z, lower=lower, upper=upper,
                                      u_pick=u[:, 1], u_abstain=u[:, 2]), dtype=np.int64)
    if check:
        chosen = choices >= 0
        ok = ((masks[chosen] >> choices[chosen]) & 1) == 1
        if not ok.all():
            bad = int(np.flatnonzero(chosen)[np.flatnonzero(~ok)[0]]) + start
            raise SelectionError(f"agent {bad} chose an alternative outside its nondominated set")
    return AgentDraws(z, masks, cf, choices, lower, upper)


def _draw_job(args):
    return _draw_chunk(*args)


def draw_population(spec: PopulationSpec, selector: Callable | None = None, check: bool = True) -> AgentDraws:
    """Draw every agent; identical output for any ``n_jobs``."""
    jobs = [(spec, s, min(CHUNK, spec.size - s), selector, check) for s in range(0, spec.size, CHUNK)]
    if spec.n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.n_jobs) as pool:
            parts = list(pool.map(_draw_job, jobs))
    else:
        parts = [_draw_job(j) for j in jobs]

    def cat(name):
        arrs = [getattr(p, name) for p in parts]
        return None if arrs[0] is None else np.concatenate(arrs)

    return AgentDraws(cat("z"), cat("masks"), cat("cf_masks"), cat("choices"), cat("lower"), cat("upper"))


# --------------------------------------------------------------------------
# reporting


@dataclass(frozen=True)
class SlackRow:
    mask: int
    label: str
    prob_in: float
    prob_contained: float
    slack: float
    se: float

    def to_dict(self) -> dict:
        return {"subset": self.label, "p_choice_in": self.prob_in, "p_m_contained": self.prob_contained,
                "slack": self.slack, "se": self.se}


def _counts(masks, n) -> dict[int, int]:
    values, counts = np.unique(masks, return_counts=True)
    return {int(m): int(c) for m, c in zip(values, counts)}


@dataclass(frozen=True)
class SimulationReport:
    """Aggregates of one simulated population.

    ``theta_counts`` counts agents by nondominated set over the whole
    population. Choice shares ``p`` are among agents who chose.
    ``delta`` holds, per alternative ``j``, ``theta_j`` minus its smallest
    value when every agent is re-evaluated under each instrument value;
    it is exactly zero when the instrument leaves utilities unchanged.
    """

    n: int
    size: int
    seed: int
    theta_counts: dict
    observed: int
    choice_counts: tuple
    z_values: tuple
    z_sizes: tuple
    choice_counts_by_z: tuple
    theta_counts_by_z: tuple
    cf_theta_counts: tuple
    slack: tuple = field(default_factory=tuple)

    @property
    def theta(self) -> dict[int, Fraction]:
        return {m: Fraction(c, self.size) for m, c in sorted(self.theta_counts.items())}

    @property
    def gamma(self) -> float:
        return 1.0 - self.observed / self.size

    @property
    def p(self) -> tuple[float, ...]:
        return tuple(c / self.observed for c in self.choice_counts) if self.observed else (math.nan,) * self.n

    def p_by_z(self) -> list[tuple[float, ...]]:
        out = []
        for counts in self.choice_counts_by_z:
            tot = sum(counts)
            out.append(tuple(c / tot for c in counts) if tot else (math.nan,) * self.n)
        return out

    def theta_share(self, mask: int) -> float:
        return self.theta_counts.get(mask, 0) / self.size

    @property
    def delta_choice(self) -> tuple[float, ...]:
        """Per alternative, spread of its choice share across instrument values."""
        rows = [r for r, cnt in zip(self.p_by_z(), self.choice_counts_by_z) if sum(cnt)]
        return tuple(max(r[j] for r in rows) - min(r[j] for r in rows) for j in range(self.n))

    @property
    def delta(self) -> tuple[float, ...]:
        out = []
        for j in range(self.n):
            m = 1 << j
            per_z = [c.get(m, 0) / self.size for c in self.cf_theta_counts]
            out.append(self.theta_share(m) - min(per_z))
        return tuple(out)

    def to_dict(self) -> dict:
        n = self.n
        lab = lambda m: subset_label(m, n)  # noqa: E731
        return {
            "alternatives": n,
            "size": self.size,
            "seed": self.seed,
            "theta": {lab(m): self.theta_share(m) for m in subset_order(n)},
            "p": list(self.p),
            "gamma": self.gamma,
            "instrument": [
                {"z": z, "agents": s, "p": list(p),
                 "theta": {lab(m): (t.get(m, 0) / s if s else None) for m in subset_order(n)}}
                for z, s, p, t in zip(self.z_values, self.z_sizes, self.p_by_z(), self.theta_counts_by_z)
            ],
            "delta_choice": list(self.delta_choice),
            "delta": list(self.delta),
            "slack": [row.to_dict() for row in self.slack],
        }


def _slack_table(n, masks, choices):
    obs = choices >= 0
    m, y = masks[obs], choices[obs]
    k = len(m)
    rows = []
    for A in subset_order(n):
        in_a = ((A >> y) & 1) if k else np.zeros(0, dtype=np.int64)
        contained = ((m & ~A) == 0).astype(np.int64)
        d = in_a - contained
        if k:
            slack = float(d.mean())
            se = float(d.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
            rows.append(SlackRow(A, subset_label(A, n), float(in_a.mean()), float(contained.mean()), slack, se))
        else:
            rows.append(SlackRow(A, subset_label(A, n), math.nan, math.nan, 0.0, 0.0))
    return tuple(rows)


def summarize_draws(spec: PopulationSpec, draws: AgentDraws) -> SimulationReport:
    n, zs = spec.n, spec.z_values
    obs = draws.choices >= 0
    choice_counts = tuple(int(c) for c in np.bincount(draws.choices[obs], minlength=n))
    by_z, theta_z, z_sizes = [], [], []
    for j in range(len(zs)):
        sel = draws.z == j
        z_sizes.append(int(sel.sum()))
        c = draws.choices[sel & obs]
        by_z.append(tuple(int(v) for v in np.bincount(c, minlength=n)))
        theta_z.append(_counts(draws.masks[sel], n))
    cf = tuple(_counts(draws.cf_masks[:, j], n) for j in range(len(zs)))
    return SimulationReport(
        n=n, size=spec.size, seed=spec.seed,
        theta_counts=_counts(draws.masks, n),
        observed=int(obs.sum()), choice_counts=choice_counts,
        z_values=zs, z_sizes=tuple(z_sizes),
        choice_counts_by_z=tuple(by_z), theta_counts_by_z=tuple(theta_z), cf_theta_counts=cf,
        slack=_slack_table(n, draws.masks, draws.choices),
    )


def simulate(spec: PopulationSpec, selector: Callable | None = None, check: bool = True) -> SimulationReport:
    """Draw a population and summarise it.

    ``selector`` replaces the spec's rule; it receives keyword arrays
    ``masks, z, lower, upper, u_pick, u_abstain`` and returns one choice per
    agent (``-1`` to abstain). ``check=False`` skips the test that every
    choice lies in the agent's nondominated set, which lets tests feed
    deliberately invalid rules.
    """
    return summarize_draws(spec, draw_population(spec, selector, check))


def verify_artstein(report: SimulationReport, tolerance: float = 3.0) -> dict[str, bool]:
    """Per subset, whether the slack is above ``-tolerance`` standard errors."""
    return {row.label: row.slack >= -tolerance * row.se for row in report.slack}


@dataclass(frozen=True)
class IVCheck:
    delta0: float
    theta01: float
    delta_sum: float
    se: float
    holds: bool

    @property
    def bound(self) -> float:
        return self.delta0 - self.delta_sum

    def to_dict(self) -> dict:
        return {"delta0": self.delta0, "theta01": self.theta01, "delta0_plus_delta1": self.delta_sum,
                "bound": self.bound, "se": self.se, "holds": self.holds}


def iv_experiment(spec: PopulationSpec, tolerance: float = 3.0) -> tuple[SimulationReport, IVCheck]:
    """Check ``theta01 >= Delta0 - (delta0 + delta1)`` up to sampling error."""
    if spec.n != 2 or not spec.instrument:
        raise InvalidInputError("instrument experiments need two alternatives and an instrument")
    report = simulate(spec)
    p0 = [r[0] for r in report.p_by_z()]
    sizes = [sum(c) for c in report.choice_counts_by_z]
    hi, lo = int(np.nanargmax(p0)), int(np.nanargmin(p0))
    var = sum(p0[k] * (1 - p0[k]) / sizes[k] for k in {hi, lo} if sizes[k])
    theta01 = report.theta_share(3)
    var += theta01 * (1 - theta01) / report.size
    se = math.sqrt(var)
    d0 = p0[hi] - p0[lo]
    dsum = sum(report.delta)
    return report, IVCheck(d0, theta01, dsum, se, theta01 >= d0 - dsum - tolerance * se)
