"""Exact convex geometry: halfspace systems and 2-D convex polygons.

All arithmetic is rational. Higher-dimensional systems are only queried
through membership and support functions; vertex enumeration is 2-D only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from ._validation import as_fraction, check_vector, fraction_to_str
from .exceptions import DimensionError, InfeasibleError, InvalidInputError

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class HalfspaceSystem:
    """Linear system ``a . x <= b`` (inequalities) and ``a . x == b`` (equalities).

    Parameters
    ----------
    dimension : int
        Number of coordinates.
    inequalities, equalities : sequence of (coefficients, bound)
        Coefficients are coerced to exact fractions.
    labels : sequence of str, optional
        One human-readable label per inequality, kept for serialization.
    names : sequence of str, optional
        Coordinate names.
    """

    dimension: int
    inequalities: tuple = ()
    equalities: tuple = ()
    labels: tuple = field(default=(), compare=False)
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise InvalidInputError(f"dimension must be a positive integer, got {self.dimension!r}")
        ineq = tuple((check_vector(a, self.dimension, "coefficient vector"), as_fraction(b))
                     for a, b in self.inequalities)
        eq = tuple((check_vector(a, self.dimension, "coefficient vector"), as_fraction(b))
                   for a, b in self.equalities)
        object.__setattr__(self, "inequalities", ineq)
        object.__setattr__(self, "equalities", eq)
        labels = tuple(self.labels)
        if labels and len(labels) != len(ineq):
            raise InvalidInputError("labels must match inequalities one-to-one")
        object.__setattr__(self, "labels", labels)
        names = tuple(self.names)
        if names and len(names) != self.dimension:
            raise InvalidInputError("names must match the dimension")
        object.__setattr__(self, "names", names)

    def add(self, inequalities=(), equalities=(), labels=None) -> "HalfspaceSystem":
        """New system with extra rows appended."""
        inequalities = tuple(inequalities)
        new_labels = ()
        if self.labels or labels:
            old = self.labels or tuple("" for _ in self.inequalities)
            new_labels = old + tuple(labels or ("" for _ in inequalities))
        return HalfspaceSystem(self.dimension, self.inequalities + inequalities,
                               self.equalities + tuple(equalities), new_labels, self.names)

    def to_dict(self) -> dict:
        out = {
            "dimension": self.dimension,
            "inequalities": [
                {"coefficients": [fraction_to_str(v) for v in a], "bound": fraction_to_str(b)}
                for a, b in self.inequalities
            ],
            "equalities": [
                {"coefficients": [fraction_to_str(v) for v in a], "value": fraction_to_str(b)}
                for a, b in self.equalities
            ],
        }
        if self.labels:
            for row, label in zip(out["inequalities"], self.labels):
                row["label"] = label
        if self.names:
            out["names"] = list(self.names)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "HalfspaceSystem":
        ineq = [(row["coefficients"], row["bound"]) for row in data.get("inequalities", [])]
        eq = [(row["coefficients"], row["value"]) for row in data.get("equalities", [])]
        labels = [row.get("label", "") for row in data.get("inequalities", [])]
        if not any(labels):
            labels = ()
        return cls(int(data["dimension"]), ineq, eq, labels, tuple(data.get("names", ())))


def _dot(a, x):
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


def contains(sys: HalfspaceSystem, point: Sequence) -> bool:
    """True iff ``point`` satisfies every row of ``sys`` exactly."""
    x = check_vector(point, sys.dimension, "point")
    return (all(_dot(a, x) <= b for a, b in sys.inequalities)
            and all(_dot(a, x) == b for a, b in sys.equalities))


def violated(sys: HalfspaceSystem, point: Sequence) -> list[int]:
    """Indices of inequalities that ``point`` violates."""
    x = check_vector(point, sys.dimension, "point")
    return [i for i, (a, b) in enumerate(sys.inequalities) if _dot(a, x) > b]


def support(sys: HalfspaceSystem, direction: Sequence) -> Fraction:
    """Support function ``max direction . x`` over ``sys``, solved exactly.

    Raises
    ------
    InfeasibleError, UnboundedError
    """
    return maximizer(sys, direction).value


def maximizer(sys: HalfspaceSystem, direction: Sequence) -> lp.LPSolution:
    d = check_vector(direction, sys.dimension, "direction")
    return lp.maximize(d, [a for a, _ in sys.inequalities], [b for _, b in sys.inequalities],
                       [a for a, _ in sys.equalities], [b for _, b in sys.equalities])


# --------------------------------------------------------------------------
# 2-D polygons


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable) -> list[Point]:
    """Andrew's monotone chain, exact; drops collinear points.

    Returns the hull counter-clockwise starting at the lexicographically
    smallest point. Degenerate inputs give one point or a two-point segment.
    """
    pts = sorted({(as_fraction(p[0]), as_fraction(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class ConvexRegion2D:
    """Convex polygon in canonical form.

    Vertices are stored counter-clockwise, no three collinear, starting at
    the lexicographically smallest vertex. A single point or a segment is a
    valid (degenerate) region. Whatever list is passed in is replaced by its
    convex hull, so construction doubles as canonicalisation.
    """

    vertices: tuple

    def __post_init__(self):
        hull = convex_hull(self.vertices)
        if not hull:
            raise InvalidInputError("a region needs at least one vertex")
        object.__setattr__(self, "vertices", tuple(hull))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @classmethod
    def rectangle(cls, x_max, y_max, x_min=0, y_min=0) -> "ConvexRegion2D":
        x0, x1, y0, y1 = map(as_fraction, (x_min, x_max, y_min, y_max))
        if x1 < x0 or y1 < y0:
            raise InvalidInputError("empty rectangle")
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def support(self, direction) -> Fraction:
        d = check_vector(direction, 2, "direction")
        return max(d[0] * v[0] + d[1] * v[1] for v in self.vertices)

    def contains(self, point) -> bool:
        p = check_vector(point, 2, "point")
        vs = self.vertices
        if len(vs) == 1:
            return p == vs[0]
        if len(vs) == 2:
            a, b = vs
            if _cross(a, b, p) != 0:
                return False
            return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                    and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
        return all(_cross(vs[i], vs[(i + 1) % len(vs)], p) >= 0 for i in range(len(vs)))

    def issubset(self, other: "ConvexRegion2D") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def reflect(self) -> "ConvexRegion2D":
        """Swap the two coordinates (mirror across the diagonal)."""
        return ConvexRegion2D(tuple((y, x) for x, y in self.vertices))

    def to_dict(self, axes=("theta1", "theta0")) -> dict:
        return {
            "axes": list(axes),
            "vertices": [[fraction_to_str(x), fraction_to_str(y)] for x, y in self.vertices],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexRegion2D":
        return cls(tuple((as_fraction(x), as_fraction(y)) for x, y in data["vertices"]))

    def rounded(self, digits: int = 3) -> list[tuple[float, float]]:
        return [(round(float(x), digits), round(float(y), digits)) for x, y in self.vertices]


def vertices_2d(sys: HalfspaceSystem) -> ConvexRegion2D:
    """Vertex enumeration of a bounded, non-empty 2-D system.

    Intersects every pair of boundary lines, keeps feasible intersection
    points and takes their hull.

    Raises
    ------
    InfeasibleError
        The system is empty.
    UnboundedError
        The system is unbounded.
    """
    if sys.dimension != 2:
        raise DimensionError("vertices_2d requires a 2-D system")
    for d in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        support(sys, d)  # raises on empty / unbounded
    lines = list(sys.inequalities) + list(sys.equalities)
    pts = set()
    for (a, b), (c, d) in itertools.combinations(lines, 2):
        det = a[0] * c[1] - a[1] * c[0]
        if det == 0:
            continue
        x = (b * c[1] - a[1] * d) / det
        y = (a[0] * d - b * c[0]) / det
        if contains(sys, (x, y)):
            pts.add((x, y))
    if not pts:
        # bounded and non-empty but no pair of independent lines is tight
        # cannot happen; keep a defensive error rather than a silent empty
        raise InfeasibleError("no vertices found")
    return ConvexRegion2D(tuple(pts))


def region_to_system(region: ConvexRegion2D) -> HalfspaceSystem:
    """H-representation of a polygon (segments and points get equalities)."""
    vs = region.vertices
    if len(vs) == 1:
        (x, y), = vs
        return HalfspaceSystem(2, equalities=(((1, 0), x), ((0, 1), y)))
    if len(vs) == 2:
        a, b = vs
        nx, ny = b[1] - a[1], a[0] - b[0]
        dx, dy = b[0] - a[0], b[1] - a[1]
        return HalfspaceSystem(
            2,
            inequalities=(((dx, dy), dx * b[0] + dy * b[1]),
                          ((-dx, -dy), -(dx * a[0] + dy * a[1]))),
            equalities=(((nx, ny), nx * a[0] + ny * a[1]),),
        )
    rows = []
    for i, p in enumerate(vs):
        q = vs[(i + 1) % len(vs)]
        # interior is to the left of p->q
        nx, ny = q[1] - p[1], p[0] - q[0]
        rows.append(((nx, ny), nx * p[0] + ny * p[1]))
    return HalfspaceSystem(2, inequalities=tuple(rows))


def minkowski_sum_2d(a: ConvexRegion2D, b: ConvexRegion2D) -> ConvexRegion2D:
    """Minkowski sum of two convex polygons.

    The hull of all pairwise vertex sums; it has at most ``len(a) + len(b)``
    vertices, the same polygon the edge-merge construction produces.
    """
    return ConvexRegion2D(tuple((p[0] + q[0], p[1] + q[1]) for p in a.vertices for q in b.vertices))


def scale(a: ConvexRegion2D, c) -> ConvexRegion2D:
    c = as_fraction(c)
    if c < 0:
        raise InvalidInputError(f"scale factor must be non-negative, got {c}")
    return ConvexRegion2D(tuple((c * x, c * y) for x, y in a.vertices))


def intersect_halfplane(region: ConvexRegion2D, coeffs, bound) -> ConvexRegion2D:
    """Clip ``region`` to ``coeffs . x <= bound``.

    Raises
    ------
    InfeasibleError
        Nothing of the region survives.
    """
    a = check_vector(coeffs, 2, "coefficients")
    b = as_fraction(bound)
    vs = list(region.vertices)

    def val(p):
        return a[0] * p[0] + a[1] * p[1] - b

    kept = []
    m = len(vs)
    for i in range(m):
        p = vs[i]
        fp = val(p)
        if fp <= 0:
            kept.append(p)
        if m == 1:
            break
        q = vs[(i + 1) % m]
        fq = val(q)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            kept.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    if not kept:
        raise InfeasibleError("half-plane does not meet the region")
    return ConvexRegion2D(tuple(kept))
