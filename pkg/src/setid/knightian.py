"""Preferences under a set of priors over finitely many states.

``x`` is preferred to ``y`` only when its expected utility is strictly
higher under every prior in a convex set. The set is stored by its
vertices; a linear functional attains its minimum at one of them, so
comparisons need only vertex evaluations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ._validation import as_fraction, check_distribution
from .exceptions import InvalidInputError
from .polytope import HalfspaceSystem, support, vertices_2d


class Comparison(str, enum.Enum):
    X_OVER_Y = "x>y"
    Y_OVER_X = "y>x"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class StateUtility:
    """Utility of each alternative in each state."""

    states: tuple
    utilities: Mapping

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise InvalidInputError("need at least one state")
        utils = {}
        for alt, vec in dict(self.utilities).items():
            vec = tuple(as_fraction(v) for v in vec)
            if len(vec) != len(states):
                raise InvalidInputError(f"utility vector for {alt!r} has {len(vec)} entries, "
                                        f"expected {len(states)}")
            utils[alt] = vec
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "utilities", utils)

    @property
    def alternatives(self) -> tuple:
        return tuple(self.utilities)


@dataclass(frozen=True)
class PriorSet:
    """Convex hull of finitely many probability vectors."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(check_distribution(v, "prior") for v in self.vertices)
        if not verts:
            raise InvalidInputError("prior set is empty")
        if len({len(v) for v in verts}) != 1:
            raise InvalidInputError("priors have different numbers of states")
        object.__setattr__(self, "vertices", verts)

    @property
    def n_states(self) -> int:
        return len(self.vertices[0])

    @classmethod
    def from_halfspaces(cls, sys: HalfspaceSystem) -> "PriorSet":
        """Vertices of ``sys`` intersected with the probability simplex.

        Supported for at most three states; the last probability is
        eliminated and the rest handled in one or two dimensions.
        """
        k = sys.dimension
        if not 1 <= k <= 3:
            raise InvalidInputError("halfspace priors are supported for 1 to 3 states only")
        if k == 1:
            return cls(((1,),))
        rows = []
        for a, b in sys.inequalities:
            rows.append(([ai - a[-1] for ai in a[:-1]], b - a[-1]))
        eqs = [([ai - a[-1] for ai in a[:-1]], b - a[-1]) for a, b in sys.equalities]
        d = k - 1
        for j in range(d):
            unit = [0] * d
            unit[j] = -1
            rows.append((unit, 0))
        rows.append(([1] * d, 1))
        reduced = HalfspaceSystem(d, inequalities=rows, equalities=eqs)
        if d == 1:
            lo, hi = -support(reduced, (-1,)), support(reduced, (1,))
            pts = [(lo,), (hi,)] if lo != hi else [(lo,)]
        else:
            pts = list(vertices_2d(reduced).vertices)
        return cls(tuple(tuple(p) + (1 - sum(p, Fraction(0)),) for p in pts))


def _check(su: StateUtility, priors: PriorSet):
    if priors.n_states != len(su.states):
        raise InvalidInputError(f"priors have {priors.n_states} states, utilities {len(su.states)}")


def _worst_gap(u, v, priors) -> Fraction:
    diff = [a - b for a, b in zip(u, v)]
    return min(sum((p * d for p, d in zip(pi, diff)), Fraction(0)) for pi in priors.vertices)


def bewley_prefers(x, y, su: StateUtility, priors: PriorSet) -> Comparison:
    """Compare ``x`` and ``y`` under every prior; exact ties count as incomparable."""
    _check(su, priors)
    ux, uy = su.utilities[x], su.utilities[y]
    if _worst_gap(ux, uy, priors) > 0:
        return Comparison.X_OVER_Y
    if _worst_gap(uy, ux, priors) > 0:
        return Comparison.Y_OVER_X
    return Comparison.INCOMPARABLE


def knightian_nondominated(alternatives: Sequence, su: StateUtility, priors: PriorSet) -> tuple:
    """Alternatives no other alternative beats under every prior."""
    alts = tuple(alternatives)
    if not alts:
        raise InvalidInputError("need at least one alternative")
    _check(su, priors)
    return tuple(a for a in alts
                 if not any(b != a and _worst_gap(su.utilities[b], su.utilities[a], priors) > 0
                            for b in alts))


def nondominated_masks(utilities: np.ndarray, prior_vertices: np.ndarray) -> np.ndarray:
    """Batched version over many agents.

    ``utilities`` has shape ``(agents, alternatives, states)`` and
    ``prior_vertices`` shape ``(vertices, states)``. Returns one bitmask of
    nondominated alternatives per agent.
    """
    eu = utilities @ np.asarray(prior_vertices, dtype=float).T  # (m, n, K)
    n = eu.shape[1]
    dominated = np.zeros(eu.shape[:2], dtype=bool)
    for a in range(n):
        for b in range(n):
            if a != b:
                dominated[:, a] |= (eu[:, b, :] - eu[:, a, :]).min(axis=1) > 0
    weights = 1 << np.arange(n, dtype=np.int64)
    return ((~dominated) * weights).sum(axis=1)
