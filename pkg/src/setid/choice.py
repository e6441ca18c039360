"""Interval-order preferences for a single decision maker.

Each alternative carries a utility interval ``[lower, upper]``. An
alternative is dominated when some other alternative's lower utility lies
strictly above its upper utility; the nondominated set is what a rational
agent may choose from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ._validation import as_fraction
from .exceptions import InvalidInputError, TieError


@dataclass(frozen=True)
class UtilityInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        if lo > hi:
            raise InvalidInputError(f"lower utility {lo} exceeds upper utility {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def vagueness(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


@dataclass(frozen=True)
class UtilityProfile:
    """Ordered alternatives with one utility interval each."""

    alternatives: tuple
    intervals: tuple

    def __post_init__(self):
        alts = tuple(self.alternatives)
        ivs = tuple(iv if isinstance(iv, UtilityInterval) else UtilityInterval(*iv)
                    for iv in self.intervals)
        if not alts:
            raise InvalidInputError("a profile needs at least one alternative")
        if len(set(alts)) != len(alts):
            raise InvalidInputError("alternative identifiers must be unique")
        if len(ivs) != len(alts):
            raise InvalidInputError("need exactly one interval per alternative")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def from_mapping(cls, mapping) -> "UtilityProfile":
        """Build from ``{alternative: (lower, upper)}`` preserving order."""
        return cls(tuple(mapping), tuple(UtilityInterval(*v) for v in mapping.values()))

    def __getitem__(self, alt) -> UtilityInterval:
        return self.intervals[self.alternatives.index(alt)]

    def shifted(self, c) -> "UtilityProfile":
        c = as_fraction(c)
        return UtilityProfile(self.alternatives,
                              tuple(UtilityInterval(iv.lower + c, iv.upper + c) for iv in self.intervals))


@dataclass(frozen=True)
class StrictRelation:
    """Finite strict relation; ``(x, y)`` in ``pairs`` means ``x`` is below ``y``."""

    ground: tuple
    pairs: frozenset

    def __post_init__(self):
        ground = tuple(self.ground)
        if len(set(ground)) != len(ground):
            raise InvalidInputError("ground set has duplicates")
        pairs = frozenset(tuple(p) for p in self.pairs)
        members = set(ground)
        for x, y in pairs:
            if x not in members or y not in members:
                raise InvalidInputError(f"pair {(x, y)!r} is outside the ground set")
            if x == y:
                raise InvalidInputError(f"relation must be irreflexive, got {(x, y)!r}")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "pairs", pairs)

    def below(self, x, y) -> bool:
        return (x, y) in self.pairs


def nondominated_set(profile: UtilityProfile) -> tuple:
    """Alternatives not strictly dominated by any alternative in ``profile``.

    ``a`` survives iff ``upper(a) >= max_b lower(b)``; an exact tie at the
    boundary counts as not dominated. The result keeps profile order and is
    never empty (the alternative with the largest lower bound always survives).
    """
    if not isinstance(profile, UtilityProfile):
        raise InvalidInputError("expected a UtilityProfile")
    best_lower = max(iv.lower for iv in profile.intervals)
    return tuple(a for a, iv in zip(profile.alternatives, profile.intervals) if iv.upper >= best_lower)


def is_interval_order(rel: StrictRelation) -> tuple[bool, tuple | None]:
    """Check Fishburn's interval-order axiom exhaustively.

    Returns ``(True, None)`` or ``(False, (x, y, z, w))`` for the first
    quadruple (in ground-set order) with ``x<y``, ``z<w`` but neither
    ``x<w`` nor ``z<y``.
    """
    if len(rel.ground) > 12:
        raise InvalidInputError("exhaustive interval-order check is limited to 12 elements")
    rank = {g: i for i, g in enumerate(rel.ground)}
    pairs = sorted(rel.pairs, key=lambda p: (rank[p[0]], rank[p[1]]))
    for (x, y), (z, w) in itertools.product(pairs, repeat=2):
        if not (rel.below(x, w) or rel.below(z, y)):
            return False, (x, y, z, w)
    return True, None


def fishburn_representation(rel: StrictRelation) -> UtilityProfile | None:
    """Integer utility intervals representing ``rel``, or ``None``.

    Solves the difference-constraint system

    * ``upper(x) + 1 <= lower(y)`` whenever ``x < y``,
    * ``upper(x) >= lower(y)`` whenever ``x != y`` and not ``x < y``,
    * ``upper(x) >= lower(x) + 1`` (strictly positive vagueness),

    by Bellman-Ford shortest paths. A negative cycle means no interval
    representation exists, which happens exactly when ``rel`` is not an
    interval order.
    """
    ground = rel.ground
    n = len(ground)
    if n == 0:
        raise InvalidInputError("empty ground set")
    # node 2i = lower(x_i), 2i+1 = upper(x_i); constraint v - u <= w is edge u->v
    edges = []
    for i, x in enumerate(ground):
        lo, up = 2 * i, 2 * i + 1
        edges.append((up, lo, -1))  # lower - upper <= -1
        for j, y in enumerate(ground):
            if i == j:
                continue
            if rel.below(x, y):
                edges.append((2 * j, up, -1))  # upper(x) - lower(y) <= -1
            else:
                edges.append((up, 2 * j, 0))  # lower(y) - upper(x) <= 0
    dist = [0] * (2 * n)
    for _ in range(2 * n):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    else:
        if any(dist[u] + w < dist[v] for u, v, w in edges):
            return None
    shift = -min(dist)
    return UtilityProfile(ground, tuple(UtilityInterval(dist[2 * i] + shift, dist[2 * i + 1] + shift)
                                        for i in range(n)))


def relation_from_profile(profile: UtilityProfile) -> StrictRelation:
    """The strict relation ``x < y  iff  upper(x) < lower(y)``."""
    pairs = {(x, y)
             for x, ix in zip(profile.alternatives, profile.intervals)
             for y, iy in zip(profile.alternatives, profile.intervals)
             if x != y and ix.upper < iy.lower}
    return StrictRelation(profile.alternatives, frozenset(pairs))


def minmax_regret_choice(profile: UtilityProfile):
    """Binary choice minimising the worst-case ex-post regret.

    Choosing ``a0`` risks regret ``upper(a1) - lower(a0)``; choosing ``a1``
    risks ``upper(a0) - lower(a1)``. The winner is the alternative with the
    larger ``lower + upper``.

    Raises
    ------
    TieError
        When both regrets are equal.
    """
    if len(profile.alternatives) != 2:
        raise InvalidInputError("minmax regret is defined for exactly two alternatives")
    (a0, a1), (i0, i1) = profile.alternatives, profile.intervals
    regret0 = i1.upper - i0.lower
    regret1 = i0.upper - i1.lower
    if regret0 == regret1:
        raise TieError(f"equal maximal regret {regret0} for both alternatives")
    return a0 if regret0 < regret1 else a1
