"""Interval utility with a parametric error and policy-shift predictions.

Utility of ``a1`` relative to ``a0`` is the interval ``[beta - sigma + eps,
beta + sigma + eps]`` with ``eps`` drawn from a known distribution ``F``.
``a1`` is ranked first when the whole interval is positive, ``a0`` when it
is entirely negative. Without further data, ``(beta, sigma)`` is only known
to lie in a wedge around ``F^{-1}(p1)``.
"""

from __future__ import annotations

import csv
import math
import sys
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from scipy.optimize import brentq

from ._validation import as_fraction, check_probability
from .exceptions import DataError, InvalidInputError
from .polytope import HalfspaceSystem


def _normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _logistic_cdf(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


CDFS: dict[str, Callable[[float], float]] = {
    "probit": _normal_cdf,
    "logit": _logistic_cdf,
}


def get_cdf(name: str) -> Callable[[float], float]:
    try:
        return CDFS[name]
    except KeyError:
        raise InvalidInputError(f"unknown distribution {name!r}; choose from {sorted(CDFS)}") from None


def quantile(q: float, cdf: str = "probit") -> float:
    """``F^{-1}(q)`` by bracketed root finding on ``F``."""
    F = get_cdf(cdf)
    q = float(q)
    if not 0.0 < q < 1.0:
        raise InvalidInputError(f"quantile needs 0 < q < 1, got {q}")
    lo, hi = -1.0, 1.0
    while F(lo) > q:
        lo *= 2.0
    while F(hi) < q:
        hi *= 2.0
    return brentq(lambda x: F(x) - q, lo, hi, xtol=1e-300, rtol=4 * sys.float_info.epsilon, maxiter=500)


def _open_prob(p, name="p1") -> float:
    p = check_probability(p, name)
    if p in (0, 1):
        raise InvalidInputError(f"{name} must lie strictly between 0 and 1, got {p}")
    return float(p)


def _wedge(q_low: float, q_high: float) -> HalfspaceSystem:
    lo, hi = as_fraction(q_low), as_fraction(q_high)
    return HalfspaceSystem(
        2,
        inequalities=(((0, -1), 0), ((1, -1), lo), ((-1, -1), -hi)),
        labels=("sigma >= 0", "beta - sigma <= lower quantile", "beta + sigma >= upper quantile"),
        names=("beta", "sigma"),
    )


@dataclass(frozen=True)
class ParametricRegion:
    """Wedge ``{beta - sigma <= q_low, q_high <= beta + sigma, sigma >= 0}``."""

    system: HalfspaceSystem
    q_low: float
    q_high: float
    cdf: str

    @property
    def sigma_lower(self) -> float:
        return (self.q_high - self.q_low) / 2

    @property
    def apex(self) -> tuple[float, float]:
        return (self.q_low + self.q_high) / 2, self.sigma_lower

    def contains(self, beta, sigma) -> bool:
        return sigma >= 0 and beta - sigma <= self.q_low and beta + sigma >= self.q_high

    def to_dict(self) -> dict:
        return {"cdf": self.cdf, "q_low": self.q_low, "q_high": self.q_high,
                "sigma_lower": self.sigma_lower, "apex": list(self.apex),
                "system": self.system.to_dict()}


def parametric_region(p1, cdf: str = "probit") -> ParametricRegion:
    """All ``(beta, sigma)`` whose implied share of ``a1``-first agents fits ``p1``."""
    q = quantile(_open_prob(p1), cdf)
    return ParametricRegion(_wedge(q, q), q, q, cdf)


def parametric_region_iv(table, cdf: str = "probit") -> ParametricRegion:
    """Wedge when ``p1|z`` varies with an instrument.

    ``table`` is a mapping or sequence of ``p1|z`` values. A positive spread
    in their quantiles forces ``sigma >= (max - min) / 2``.
    """
    values = list(table.values()) if isinstance(table, Mapping) else list(table)
    if not values:
        raise InvalidInputError("instrument table is empty")
    qs = [quantile(_open_prob(v, "p1|z"), cdf) for v in values]
    return ParametricRegion(_wedge(min(qs), max(qs)), min(qs), max(qs), cdf)


def implied_shares(beta: float, sigma: float, cdf: str = "probit") -> tuple[float, float]:
    """``(theta0, theta1) = (1 - F(beta + sigma), F(beta - sigma))``."""
    F = get_cdf(cdf)
    return 1.0 - F(beta + sigma), F(beta - sigma)


def _check_delta(delta) -> Fraction:
    d = as_fraction(delta)
    if d <= 0:
        raise InvalidInputError(f"policy shift must be positive, got {d}")
    return d


def policy_complete(p1, delta, cdf: str = "probit") -> float:
    """Share choosing ``a1`` after its utility rises by ``delta``, complete preferences."""
    d = _check_delta(delta)
    return get_cdf(cdf)(quantile(_open_prob(p1), cdf) + float(d))


@dataclass(frozen=True)
class PolicyInterval:
    level: tuple[float, float]
    effect: tuple[float, float]
    sign: str  # "negative-possible", "zero-boundary" or "positive"

    def to_dict(self) -> dict:
        return {"level": list(self.level), "effect": list(self.effect), "sign": self.sign}


def policy_incomplete_interval(p1, sigma, delta, cdf: str = "probit") -> PolicyInterval:
    """Range of the post-shift ``a1`` share over every ``beta`` in the wedge.

    The lower endpoint falls below ``p1`` exactly when ``delta < 2 sigma``.
    """
    d = _check_delta(delta)
    s = as_fraction(sigma)
    if s < 0:
        raise InvalidInputError(f"sigma must be non-negative, got {s}")
    p = _open_prob(p1)
    F = get_cdf(cdf)
    q = quantile(p, cdf)
    lo_arg = d - 2 * s
    if lo_arg == 0:
        lo = p  # exact: F(F^{-1}(p1)) without round-off
    else:
        lo = F(q + float(lo_arg))
    hi = F(q + float(d + 2 * s))
    if lo_arg < 0:
        sign = "negative-possible"
    elif lo_arg == 0:
        sign = "zero-boundary"
    else:
        sign = "positive"
    return PolicyInterval((lo, hi), (lo - p, hi - p), sign)


def policy_band(p1, sigma, deltas: Sequence, cdf: str = "probit") -> list[dict]:
    """Level interval for each shift, for plotting the band against ``delta``."""
    rows = []
    for d in deltas:
        iv = policy_incomplete_interval(p1, sigma, d, cdf)
        rows.append({"delta": float(as_fraction(d)), "low": iv.level[0], "high": iv.level[1]})
    return rows


class TabulatedCDF:
    """Piecewise-linear CDF through sample points ``(x, F(x))``.

    Points must be listed with ``x`` strictly increasing. The function is
    constant below the first and above the last sample.
    """

    def __init__(self, points: Sequence[tuple[float, float]]):
        pts = [(float(x), float(f)) for x, f in points]
        if not pts:
            raise DataError("CDF table is empty")
        for i, (x, f) in enumerate(pts):
            if not 0.0 <= f <= 1.0:
                raise DataError(f"CDF value {f} outside [0, 1]", row=i + 1)
            if i and x <= pts[i - 1][0]:
                raise DataError("x values must be strictly increasing", row=i + 1)
            if i and f < pts[i - 1][1]:
                raise DataError("CDF values decrease", row=i + 1)
        self.xs = [x for x, _ in pts]
        self.fs = [f for _, f in pts]

    def __call__(self, x: float) -> float:
        x = float(x)
        k = bisect_right(self.xs, x)
        if k == 0:
            return self.fs[0]
        if k == len(self.xs):
            return self.fs[-1]
        x0, x1, f0, f1 = self.xs[k - 1], self.xs[k], self.fs[k - 1], self.fs[k]
        return f0 + (f1 - f0) * (x - x0) / (x1 - x0)

    @classmethod
    def from_csv(cls, stream) -> "TabulatedCDF":
        """Read a header-led CSV with columns ``x`` and ``F``; errors name file lines (header is line 1)."""
        reader = csv.DictReader(stream)
        if not reader.fieldnames or not {"x", "F"} <= set(reader.fieldnames):
            raise DataError("CDF table needs columns 'x' and 'F'")
        points = []
        for i, row in enumerate(reader, start=2):
            try:
                points.append((float(row["x"]), float(row["F"])))
            except (TypeError, ValueError):
                raise DataError(f"cannot parse {row!r}", row=i) from None
        try:
            return cls(points)
        except DataError as exc:
            if exc.row is None:
                raise
            raise DataError(exc.message, row=exc.row + 1) from None


@dataclass(frozen=True)
class EffectBounds:
    low: float
    high: float

    @property
    def contains_zero(self) -> bool:
        return self.low <= 0.0 <= self.high

    def to_dict(self) -> dict:
        return {"effect": [self.low, self.high], "contains_zero": self.contains_zero}


def nonparametric_policy_bounds(p1, delta, F) -> EffectBounds:
    """Effect of the shift on the ``a1`` share, knowing only ``F``.

    ``F`` is the CDF of ``lower(a0) - upper(a1)``, given as a callable or as
    sample points. The effect lies in ``[F(delta) - p1, 1 - p1]``.
    """
    d = _check_delta(delta)
    p = float(check_probability(p1, "p1"))
    if not callable(F):
        F = TabulatedCDF(F)
    fd = float(F(float(d)))
    if not 0.0 <= fd <= 1.0:
        raise InvalidInputError(f"F(delta) = {fd} is not a probability")
    return EffectBounds(fd - p, 1.0 - p)
