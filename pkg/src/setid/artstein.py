"""Sharp identification regions for choice parameters over finite choice sets.

The unknown parameter is ``theta``: one probability ``theta_A`` for every
non-empty subset ``A`` of alternatives, the share of decision makers whose
nondominated set is exactly ``A``. Observed choice frequencies ``p``
restrict ``theta`` through the containment inequalities

    sum_{A' subset of A} theta_{A'} <= p(A)      for every non-empty A,

which are necessary and sufficient for the observed choice to be a selection
of the random nondominated set. Subsets are bitmasks: bit ``i`` set means
alternative ``a_i`` is a member.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import lp
from ._validation import as_fraction, check_gamma, fraction_to_str
from .exceptions import InvalidInputError
from .polytope import HalfspaceSystem, contains, support

MAX_ALTERNATIVES = 16


def _check_n(n: int) -> int:
    if not isinstance(n, int) or not 1 <= n <= MAX_ALTERNATIVES:
        raise InvalidInputError(f"number of alternatives must be in 1..{MAX_ALTERNATIVES}, got {n!r}")
    return n


def check_mask(mask: int, n: int) -> int:
    if not isinstance(mask, int) or not 1 <= mask < (1 << n):
        raise InvalidInputError(f"subset mask {mask!r} out of range for {n} alternatives")
    return mask


def members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def subset_order(n: int) -> list[int]:
    """All non-empty masks ordered by size, then lexicographically by members.

    For three alternatives this is ``{0},{1},{2},{0,1},{0,2},{1,2},{0,1,2}``.
    """
    _check_n(n)
    return sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), members(m)))


def subset_label(mask: int, n: int | None = None) -> str:
    idx = members(mask)
    if n is not None and n > 10:
        return ",".join(map(str, idx))
    return "".join(map(str, idx))


def _is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class ChoiceParamVector:
    """Probability mass over non-empty subsets of ``n`` alternatives."""

    n: int
    masses: Mapping

    def __post_init__(self):
        _check_n(self.n)
        masses = {}
        for mask, value in dict(self.masses).items():
            check_mask(mask, self.n)
            v = as_fraction(value)
            if v < 0:
                raise InvalidInputError(f"negative mass {v} on subset {subset_label(mask)}")
            if v:
                masses[mask] = v
        total = sum(masses.values(), Fraction(0))
        if total != 1:
            raise InvalidInputError(f"masses must sum to 1, got {total}")
        object.__setattr__(self, "masses", masses)

    def __getitem__(self, mask: int) -> Fraction:
        return self.masses.get(mask, Fraction(0))

    def as_vector(self) -> tuple[Fraction, ...]:
        return tuple(self[m] for m in subset_order(self.n))

    @classmethod
    def from_vector(cls, n: int, values) -> "ChoiceParamVector":
        order = subset_order(n)
        values = list(values)
        if len(values) != len(order):
            raise InvalidInputError(f"expected {len(order)} masses, got {len(values)}")
        return cls(n, dict(zip(order, values)))

    @classmethod
    def from_labels(cls, n: int, labelled: Mapping) -> "ChoiceParamVector":
        """From ``{"0": ..., "01": ...}`` style keys (digits are member indices)."""
        masses = {}
        for key, value in labelled.items():
            text = str(key).replace("theta_", "").replace("{", "").replace("}", "")
            parts = text.split(",") if "," in text else list(text)
            masses[mask_of(int(c) for c in parts)] = value
        return cls(n, masses)

    def to_dict(self) -> dict:
        return {subset_label(m, self.n): fraction_to_str(self[m]) for m in subset_order(self.n)}


@dataclass(frozen=True)
class ChoiceFrequencies:
    """Observed per-alternative choice probabilities.

    ``z`` optionally labels the instrument value these frequencies condition
    on; ``gamma`` is an abstention share carried for callers that compose
    regions with unobserved choices.
    """

    probs: tuple
    z: object = None
    gamma: Fraction | None = None

    def __post_init__(self):
        probs = tuple(as_fraction(p) for p in self.probs)
        if not probs:
            raise InvalidInputError("need at least one alternative")
        _check_n(len(probs))
        if any(p < 0 for p in probs):
            raise InvalidInputError("probabilities must be non-negative")
        if self.gamma is not None:
            object.__setattr__(self, "gamma", check_gamma(self.gamma))
        elif sum(probs, Fraction(0)) != 1:
            raise InvalidInputError(f"probabilities must sum to 1, got {sum(probs, Fraction(0))}")
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return len(self.probs)

    def prob_of(self, mask: int) -> Fraction:
        return sum((self.probs[i] for i in members(mask)), Fraction(0))


def _freqs(p) -> ChoiceFrequencies:
    if isinstance(p, ChoiceFrequencies):
        freqs = p
    else:
        freqs = ChoiceFrequencies(tuple(p))
    if sum(freqs.probs, Fraction(0)) != 1:
        raise InvalidInputError("identification regions need probabilities that sum to 1")
    return freqs


def containment_functional(theta: ChoiceParamVector, target: int) -> Fraction:
    """``P(M subset of target)``: total mass on non-empty subsets of ``target``."""
    check_mask(target, theta.n)
    return sum((v for m, v in theta.masses.items() if _is_subset(m, target)), Fraction(0))


def _alt_names(n):
    return [f"a{i}" for i in range(n)]


def _row_label(mask, n, bound_text):
    names = _alt_names(n)
    return f"sum over subsets of {{{','.join(names[i] for i in members(mask))}}} <= {bound_text}"


def artstein_system(n: int, bounds: Mapping[int, Fraction], labels: Mapping[int, str] | None = None
                    ) -> HalfspaceSystem:
    """Simplex over subset masses plus ``C(A) <= bounds[A]`` for each given ``A``."""
    order = subset_order(n)
    dim = len(order)
    rows, row_labels = [], []
    for k, m in enumerate(order):
        coeffs = [0] * dim
        coeffs[k] = -1
        rows.append((coeffs, 0))
        row_labels.append(f"theta_{subset_label(m, n)} >= 0")
    for target in sorted(bounds, key=order.index):
        coeffs = [1 if _is_subset(m, target) else 0 for m in order]
        rows.append((coeffs, as_fraction(bounds[target])))
        row_labels.append(labels[target] if labels and target in labels
                          else _row_label(target, n, fraction_to_str(as_fraction(bounds[target]))))
    return HalfspaceSystem(
        dim,
        inequalities=rows,
        equalities=(([1] * dim, 1),),
        labels=row_labels,
        names=tuple(f"theta_{subset_label(m, n)}" for m in order),
    )


def _build(p: ChoiceFrequencies, targets) -> HalfspaceSystem:
    n = p.n
    bounds = {t: p.prob_of(t) for t in targets}
    labels = {t: _row_label(t, n, "+".join(f"p{i}" for i in members(t))) for t in targets}
    return artstein_system(n, bounds, labels)


def build_sharp_region(p) -> HalfspaceSystem:
    """The sharp region: simplex plus one containment inequality per non-empty subset.

    The full-set inequality is implied by the simplex equality but is kept
    so the emitted system can be audited row by row.
    """
    p = _freqs(p)
    return _build(p, subset_order(p.n))


def build_theta1_region(p) -> HalfspaceSystem:
    """Relaxation keeping only the singleton inequalities ``theta_a <= p_a``."""
    p = _freqs(p)
    return _build(p, [1 << i for i in range(p.n)])


def in_sharp_region(theta: ChoiceParamVector, p) -> bool:
    return contains(build_sharp_region(p), theta.as_vector())


# --------------------------------------------------------------------------
# selection-feasibility oracle (independent of the inequality route)


def _max_flow(cap, source, sink):
    """Edmonds-Karp on a dict-of-dicts capacity map with exact values."""
    flow = {u: {v: Fraction(0) for v in cap[u]} for u in cap}
    for u in list(cap):
        for v in cap[u]:
            flow.setdefault(v, {}).setdefault(u, Fraction(0))
            cap.setdefault(v, {}).setdefault(u, Fraction(0))
    total = Fraction(0)
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in cap[u]:
                if v not in parent and cap[u][v] - flow[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return total, flow
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(cap[u][v] - flow[u][v] for u, v in path)
        for u, v in path:
            flow[u][v] += push
            flow[v][u] -= push
        total += push


def find_selection(theta: ChoiceParamVector, p) -> dict | None:
    """Route each ``theta_A`` to members of ``A`` so alternative ``a`` receives ``p_a``.

    Returns ``{(mask, a): q}`` with ``q > 0`` when such a transport plan
    exists, else ``None``. Solved as a bipartite max-flow
    source -> subsets -> alternatives -> sink.
    """
    p = _freqs(p)
    if theta.n != p.n:
        raise InvalidInputError("theta and p disagree on the number of alternatives")
    source, sink = "s", "t"
    cap: dict = {source: {}, sink: {}}
    for m, v in theta.masses.items():
        node = ("A", m)
        cap[source][node] = v
        cap[node] = {("a", i): Fraction(1) for i in members(m)}
    for i, pi in enumerate(p.probs):
        cap.setdefault(("a", i), {})[sink] = pi
    value, flow = _max_flow(cap, source, sink)
    if value != 1:
        return None
    plan = {}
    for m in theta.masses:
        for i in members(m):
            q = flow[("A", m)][("a", i)]
            if q > 0:
                plan[(m, i)] = q
    return plan


def selection_feasible(theta: ChoiceParamVector, p) -> bool:
    """Whether observed choices ``p`` can be a selection of the random set with masses ``theta``."""
    return find_selection(theta, p) is not None


# --------------------------------------------------------------------------
# strictness of the singleton relaxation


def strict_inclusion_witness(p, mask: int) -> ChoiceParamVector | None:
    """A point of the singleton relaxation that violates the inequality for ``mask``.

    First maximises ``C(mask) - p(mask)`` over the relaxation; if the optimum
    is positive, a second LP picks, among maximisers, one that saturates the
    singleton bounds inside ``mask``. Returns ``None`` when the relaxation
    already satisfies the ``mask`` inequality everywhere.
    """
    p = _freqs(p)
    n = p.n
    check_mask(mask, n)
    if bin(mask).count("1") < 2:
        raise InvalidInputError("witness subsets need at least two alternatives")
    relaxed = build_theta1_region(p)
    order = subset_order(n)
    c_row = [1 if _is_subset(m, mask) else 0 for m in order]
    best = support(relaxed, c_row)
    if best <= p.prob_of(mask):
        return None
    singles = [1 if m in {1 << i for i in members(mask)} else 0 for m in order]
    pinned = relaxed.add(inequalities=[([-v for v in c_row], -best)], labels=["pin"])
    sol = lp.maximize(singles,
                      [a for a, _ in pinned.inequalities], [b for _, b in pinned.inequalities],
                      [a for a, _ in pinned.equalities], [b for _, b in pinned.equalities])
    theta = ChoiceParamVector.from_vector(n, sol.x)
    # certificate: inside the relaxation, outside the sharp region
    assert contains(relaxed, sol.x) and not contains(build_sharp_region(p), sol.x)
    return theta


def pair_direction(mask: int, n: int) -> tuple[int, ...]:
    """Coefficient vector of the containment inequality for ``mask``."""
    return tuple(1 if _is_subset(m, mask) else 0 for m in subset_order(n))
