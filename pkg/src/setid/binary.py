"""Identification regions for binary choice, drawn in the plane.

Coordinates are fixed as ``x = theta_1`` and ``y = theta_0``: the shares of
decision makers whose nondominated set is ``{a1}`` and ``{a0}``. The
remaining mass ``1 - theta_0 - theta_1`` is the share who cannot rank the
two alternatives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ._validation import as_fraction, check_gamma, check_probability
from .exceptions import CoherenceError, InfeasibleError, InvalidInputError
from .polytope import ConvexRegion2D, intersect_halfplane, minkowski_sum_2d, scale


class UnobservedMode(str, enum.Enum):
    """What is assumed about the preferences of people whose choice is not seen."""

    ALL_INCOMPARABLE = "all-incomparable"
    AGNOSTIC = "agnostic"
    MISSING_AT_RANDOM = "missing-at-random"


def _pair(p0, p1, what="choice probabilities"):
    p0, p1 = check_probability(p0, "p0"), check_probability(p1, "p1")
    if p0 + p1 != 1:
        raise InvalidInputError(f"{what} must sum to 1, got {p0} + {p1}")
    return p0, p1


@dataclass(frozen=True)
class BinaryObservation:
    """Observed binary choice frequencies, conditional on a choice being made.

    ``table`` maps instrument values to ``(p0|z, p1|z)``. ``gamma`` is the
    share who make no choice, ``(pi0, pi1)`` the shares for whom only one
    alternative is under consideration and ``nu`` a known lower bound on
    the share who cannot rank.
    """

    p0: Fraction
    p1: Fraction
    table: Mapping = field(default_factory=dict)
    gamma: Fraction | None = None
    pi0: Fraction | None = None
    pi1: Fraction | None = None
    nu: Fraction | None = None

    def __post_init__(self):
        p0, p1 = _pair(self.p0, self.p1)
        table = {}
        for z, pair in dict(self.table).items():
            if len(pair) != 2:
                raise InvalidInputError(f"instrument value {z!r} needs a (p0, p1) pair")
            table[z] = _pair(*pair, what=f"probabilities at z={z!r}")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "table", table)
        if self.gamma is not None:
            object.__setattr__(self, "gamma", check_gamma(self.gamma))
        for name in ("pi0", "pi1", "nu"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, check_probability(value, name))

    def swapped(self) -> "BinaryObservation":
        """The same data with the labels of the two alternatives exchanged."""
        return BinaryObservation(self.p1, self.p0, {z: (b, a) for z, (a, b) in self.table.items()},
                                 self.gamma, self.pi1, self.pi0, self.nu)


def _obs(obs_or_p0, p1=None) -> BinaryObservation:
    if isinstance(obs_or_p0, BinaryObservation):
        return obs_or_p0
    return BinaryObservation(obs_or_p0, p1)


def no_assumption_region(obs, p1=None) -> ConvexRegion2D:
    """``[0, p1] x [0, p0]``: each complete-preference share is bounded by its choice share."""
    obs = _obs(obs, p1)
    return ConvexRegion2D.rectangle(obs.p1, obs.p0)


def min_vagueness_region(obs, nu=None) -> ConvexRegion2D:
    """No-assumption rectangle cut by ``theta_0 + theta_1 <= 1 - nu``."""
    obs = _obs(obs)
    nu = check_probability(obs.nu if nu is None else nu, "nu")
    if nu == 1:
        return ConvexRegion2D(((Fraction(0), Fraction(0)),))
    return intersect_halfplane(no_assumption_region(obs), (1, 1), 1 - nu)


@dataclass(frozen=True)
class IVResult:
    region: ConvexRegion2D
    delta0: Fraction
    theta01_lower: Fraction


def iv_region(table: Mapping) -> IVResult:
    """Region under an instrument that shifts choices but not preferences.

    ``table`` maps instrument values to ``(p0|z, p1|z)``. Each share is
    bounded by its smallest conditional choice share; the spread ``delta0``
    of ``p0|z`` bounds the incomparable share from below.
    """
    if isinstance(table, BinaryObservation):
        table = table.table
    if not table:
        raise InvalidInputError("instrument table is empty")
    pairs = [_pair(*v) for v in table.values()]
    inf0 = min(a for a, _ in pairs)
    inf1 = min(b for _, b in pairs)
    delta0 = max(a for a, _ in pairs) - inf0
    return IVResult(ConvexRegion2D.rectangle(inf1, inf0), delta0, delta0)


def imperfect_iv_bound(delta0, delta_0, delta_1) -> Fraction:
    """Lower bound on the incomparable share when the instrument may move
    the complete-preference shares by up to ``delta_0`` and ``delta_1``."""
    d, e0, e1 = (as_fraction(v) for v in (delta0, delta_0, delta_1))
    if min(d, e0, e1) < 0:
        raise InvalidInputError("spreads must be non-negative")
    return max(Fraction(0), d - e0 - e1)


_TRIANGLE = ConvexRegion2D(((0, 0), (1, 0), (0, 1)))
_ORIGIN = ConvexRegion2D(((0, 0),))


def abstention_region(observed: ConvexRegion2D, gamma, mode=UnobservedMode.AGNOSTIC) -> ConvexRegion2D:
    """Mix the region for choosers with one for abstainers.

    ``observed`` is expressed in shares of those who chose. The result is
    ``(1 - gamma) * observed + gamma * unobserved`` as a Minkowski sum.
    """
    gamma = check_gamma(gamma)
    mode = UnobservedMode(mode)
    if mode is UnobservedMode.MISSING_AT_RANDOM:
        return observed
    unobserved = _ORIGIN if mode is UnobservedMode.ALL_INCOMPARABLE else _TRIANGLE
    return minkowski_sum_2d(scale(observed, 1 - gamma), scale(unobserved, gamma))


def observed_region_from_shares(x_max, y_max, gamma) -> ConvexRegion2D:
    """Rectangle bounds given as shares of the whole population, rescaled to
    shares of those who chose (divide by ``1 - gamma``)."""
    gamma = check_gamma(gamma)
    return ConvexRegion2D.rectangle(as_fraction(x_max) / (1 - gamma), as_fraction(y_max) / (1 - gamma))


def consideration_region(region: ConvexRegion2D, pi0, pi1) -> ConvexRegion2D:
    """Keep points with ``theta_0 >= pi0`` and ``theta_1 >= pi1``.

    ``pi_j`` is the share who only consider ``a_j`` and so must rank it first.

    Raises
    ------
    CoherenceError
        A consideration share exceeds what the region allows.
    """
    pi0, pi1 = check_probability(pi0, "pi0"), check_probability(pi1, "pi1")
    _, x_max, _, y_max = region.bounds()
    if pi1 > x_max:
        raise CoherenceError(f"pi1 = {pi1} exceeds the largest admissible theta_1 = {x_max}")
    if pi0 > y_max:
        raise CoherenceError(f"pi0 = {pi0} exceeds the largest admissible theta_0 = {y_max}")
    try:
        out = intersect_halfplane(region, (-1, 0), -pi1)
        return intersect_halfplane(out, (0, -1), -pi0)
    except InfeasibleError as exc:
        raise CoherenceError(f"no point has theta_0 >= {pi0} and theta_1 >= {pi1} jointly") from exc
