"""Precinct election returns to binary identification regions.

CSV layout (UTF-8, header required)::

    precinct_id,race_id,candidate,votes,ballot_position,turnout,reg_dem,reg_rep

One row per candidate per precinct and race. ``turnout`` is the number of
ballots cast in the precinct; ``reg_dem`` and ``reg_rep`` count registered
party members among those voters. The last three columns may be blank.
Rows with the reserved race id ``TURNOUT`` carry ballots cast in ``votes``
and leave ``candidate`` and ``ballot_position`` blank.
"""

from __future__ import annotations

import csv
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ._validation import as_fraction, fraction_to_str
from .binary import (
    UnobservedMode, abstention_region, consideration_region, iv_region, no_assumption_region,
)
from .exceptions import DataError, InvalidInputError
from .polytope import ConvexRegion2D

TURNOUT_RACE = "TURNOUT"
COLUMNS = ("precinct_id", "race_id", "candidate", "votes", "ballot_position", "turnout", "reg_dem", "reg_rep")


@dataclass(frozen=True)
class PrecinctRecord:
    precinct_id: str
    race_id: str
    votes: Mapping           # candidate -> votes
    positions: Mapping       # candidate -> 1-based ballot position
    turnout: int | None = None
    reg_dem: int | None = None
    reg_rep: int | None = None

    @property
    def first(self) -> str | None:
        return next((c for c, p in self.positions.items() if p == 1), None)

    @property
    def total(self) -> int:
        return sum(self.votes.values())


def _int(row, key, line, required=True):
    text = (row.get(key) or "").strip()
    if not text:
        if required:
            raise DataError(f"missing {key}", row=line)
        return None
    try:
        value = int(text)
    except ValueError:
        raise DataError(f"{key} must be an integer, got {text!r}", row=line) from None
    if value < 0:
        raise DataError(f"{key} must be non-negative, got {value}", row=line)
    return value


def ingest(stream) -> list[PrecinctRecord]:
    """Parse and validate a precinct CSV.

    Raises
    ------
    DataError
        On malformed rows, duplicate candidates, ballot positions that are
        not a permutation, or votes exceeding turnout. The message names
        the offending line (the header is line 1).
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise DataError("empty file")
    missing = {"precinct_id", "race_id", "candidate", "votes"} - set(reader.fieldnames)
    if missing:
        raise DataError(f"missing columns {sorted(missing)}", row=1)
    groups: dict = {}
    first_line: dict = {}
    for line, row in enumerate(reader, start=2):
        pid = (row.get("precinct_id") or "").strip()
        race = (row.get("race_id") or "").strip()
        if not pid or not race:
            raise DataError("precinct_id and race_id are required", row=line)
        key = (pid, race)
        g = groups.setdefault(key, {"votes": {}, "positions": {}, "turnout": None,
                                    "reg_dem": None, "reg_rep": None, "lines": []})
        first_line.setdefault(key, line)
        g["lines"].append(line)
        votes = _int(row, "votes", line)
        if race == TURNOUT_RACE:
            if g["votes"]:
                raise DataError(f"duplicate turnout row for precinct {pid!r}", row=line)
            g["votes"][""] = votes
            g["turnout"] = votes
            continue
        cand = (row.get("candidate") or "").strip()
        if not cand:
            raise DataError("candidate is required", row=line)
        if cand in g["votes"]:
            raise DataError(f"duplicate row for precinct {pid!r}, race {race!r}, candidate {cand!r}", row=line)
        g["votes"][cand] = votes
        pos = _int(row, "ballot_position", line, required=False)
        if pos is not None:
            g["positions"][cand] = pos
        for col in ("turnout", "reg_dem", "reg_rep"):
            value = _int(row, col, line, required=False)
            if value is None:
                continue
            if g[col] is not None and g[col] != value:
                raise DataError(f"{col} disagrees with an earlier row of the same precinct and race", row=line)
            g[col] = value

    records = []
    for key, g in groups.items():
        pid, race = key
        last = g["lines"][-1]
        if race == TURNOUT_RACE:
            records.append(PrecinctRecord(pid, race, {}, {}, g["turnout"]))
            continue
        pos = g["positions"]
        if pos:
            if set(pos) != set(g["votes"]) or sorted(pos.values()) != list(range(1, len(pos) + 1)):
                raise DataError(f"ballot positions of precinct {pid!r}, race {race!r} "
                                f"are not a permutation of 1..{len(g['votes'])}", row=last)
        total = sum(g["votes"].values())
        cap = g["turnout"]
        if cap is None and (pid, TURNOUT_RACE) in groups:
            cap = groups[(pid, TURNOUT_RACE)]["turnout"]
        if cap is not None and total > cap:
            raise DataError(f"votes ({total}) exceed turnout ({cap}) in precinct {pid!r}, "
                            f"race {race!r}", row=last)
        records.append(PrecinctRecord(pid, race, dict(g["votes"]), dict(pos),
                                      g["turnout"], g["reg_dem"], g["reg_rep"]))
    return records


def ingest_path(path) -> list[PrecinctRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        return ingest(fh)


@dataclass(frozen=True)
class RaceSummary:
    """Observables for one race; ``p`` is among those who voted in it."""

    race_id: str
    candidates: tuple
    votes: tuple
    turnout: int
    by_first: Mapping = field(default_factory=dict)  # first-listed candidate -> votes tuple
    registered: tuple | None = None                  # (dem, rep) among voters

    @property
    def total(self) -> int:
        return sum(self.votes)

    @property
    def p(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.total) for v in self.votes)

    @property
    def gamma(self) -> Fraction:
        return 1 - Fraction(self.total, self.turnout)

    def p_by_first(self) -> dict:
        return {z: tuple(Fraction(v, sum(vs)) for v in vs) for z, vs in self.by_first.items() if sum(vs)}

    def pi(self, parties: Mapping[str, str]) -> tuple[Fraction, ...]:
        """Per candidate, the share of voters registered with the candidate's party."""
        if self.registered is None:
            raise InvalidInputError(f"race {self.race_id!r} has no registration counts")
        share = {"dem": Fraction(self.registered[0], self.turnout),
                 "rep": Fraction(self.registered[1], self.turnout)}
        try:
            return tuple(share[parties[c]] for c in self.candidates)
        except KeyError as exc:
            raise InvalidInputError(f"no party for {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "race_id": self.race_id,
            "candidates": list(self.candidates),
            "votes": list(self.votes),
            "total": self.total,
            "turnout": self.turnout,
            "p": [fraction_to_str(v) for v in self.p],
            "p_decimal": [round(float(v), 4) for v in self.p],
            "gamma": fraction_to_str(self.gamma),
            "gamma_decimal": round(float(self.gamma), 4),
            "p_by_first": {z: [round(float(v), 4) for v in ps] for z, ps in self.p_by_first().items()},
        }


def summarize(records: Iterable[PrecinctRecord], race_id: str, turnout_source: str = TURNOUT_RACE,
              candidates: Iterable[str] | None = None) -> RaceSummary:
    """Aggregate one race over all precincts.

    ``turnout_source`` is ``"TURNOUT"`` (the reserved turnout rows) or
    ``"column"`` (the per-row turnout column). Candidates are ordered
    alphabetically unless given.
    """
    records = list(records)
    rows = [r for r in records if r.race_id == race_id]
    if not rows:
        raise DataError(f"no records for race {race_id!r}")
    names = tuple(candidates) if candidates else tuple(sorted({c for r in rows for c in r.votes}))
    totals = Counter()
    by_first: dict = defaultdict(Counter)
    for r in rows:
        extra = set(r.votes) - set(names)
        if extra:
            raise DataError(f"precinct {r.precinct_id!r} has unexpected candidates {sorted(extra)}")
        totals.update(r.votes)
        if r.first is not None:
            by_first[r.first].update(r.votes)
    votes = tuple(totals[c] for c in names)
    if sum(votes) == 0:
        raise DataError(f"race {race_id!r} has no votes")
    if turnout_source == TURNOUT_RACE:
        trows = [r for r in records if r.race_id == TURNOUT_RACE]
        if not trows:
            raise DataError("no TURNOUT rows in the data")
        turnout = sum(r.turnout for r in trows)
    elif turnout_source == "column":
        if any(r.turnout is None for r in rows):
            raise DataError(f"turnout column is blank for some rows of race {race_id!r}")
        turnout = sum(r.turnout for r in rows)
    else:
        raise InvalidInputError(f"unknown turnout source {turnout_source!r}")
    if turnout < sum(votes):
        raise DataError(f"race {race_id!r} has more votes than turnout")
    registered = None
    if rows and all(r.reg_dem is not None and r.reg_rep is not None for r in rows):
        registered = (sum(r.reg_dem for r in rows), sum(r.reg_rep for r in rows))
    return RaceSummary(race_id, names, votes, turnout,
                       {z: tuple(c[n] for n in names) for z, c in sorted(by_first.items())}, registered)


def check_rotation(records: Iterable[PrecinctRecord], race_id: str) -> list[str]:
    """Data issues with the rotating ballot order of a race.

    Precincts are taken in precinct-id order; the first lists candidates
    alphabetically and each next precinct moves the last-listed candidate
    to the top. Departures and unbalanced first-position counts are
    reported, not raised.
    """
    rows = sorted((r for r in records if r.race_id == race_id and r.positions), key=lambda r: r.precinct_id)
    issues = []
    if not rows:
        return issues
    order = sorted(rows[0].positions)
    firsts = Counter()
    for r in rows:
        actual = sorted(r.positions, key=r.positions.get)
        if actual != order:
            issues.append(f"precinct {r.precinct_id}: order {actual} expected {order}")
        firsts[actual[0]] += 1
        order = [actual[-1]] + actual[:-1]
    counts = [firsts[c] for c in sorted(rows[0].positions)]
    if max(counts) - min(counts) > 1:
        issues.append(f"first-position counts {dict(firsts)} differ by more than one")
    return issues


@dataclass(frozen=True)
class FigureOptions:
    """What to layer on top of the no-assumption rectangle.

    ``conditional`` overrides the raw first-listed frequencies: it maps an
    instrument label to the chosen share of the second candidate (``a1``).
    ``pi`` holds the consideration shares ``(pi0, pi1)``.
    """

    use_iv: bool = False
    conditional: Mapping | None = None
    abstention: bool = False
    mode: UnobservedMode = UnobservedMode.ALL_INCOMPARABLE
    pi: tuple | None = None


@dataclass(frozen=True)
class FigureSet:
    race_id: str
    candidates: tuple
    regions: Mapping          # name -> ConvexRegion2D
    delta0: Fraction | None = None
    gamma: Fraction | None = None

    def to_dict(self) -> dict:
        out = {
            "race_id": self.race_id,
            "axes": {"x": f"theta1 ({self.candidates[1]} ranked first)",
                     "y": f"theta0 ({self.candidates[0]} ranked first)"},
            "regions": {name: {**r.to_dict(), "vertices_decimal": [list(v) for v in r.rounded(3)]}
                        for name, r in self.regions.items()},
        }
        if self.delta0 is not None:
            out["delta0"] = fraction_to_str(self.delta0)
            out["delta0_decimal"] = round(float(self.delta0), 3)
        if self.gamma is not None:
            out["gamma"] = fraction_to_str(self.gamma)
        return out


def figure_pipeline(summary: RaceSummary, options: FigureOptions = FigureOptions()) -> FigureSet:
    """Regions for one two-candidate race, from least to most assumption.

    Emits ``no_assumption``; with ``use_iv`` the per-instrument rectangles
    ``conditional:<z>`` and their intersection ``iv``; with ``abstention``
    the region rescaled to the whole turnout under the chosen mode (plus the
    agnostic variant for comparison); with ``pi`` the consideration cut of
    the most restricted region.
    """
    if len(summary.candidates) != 2:
        raise InvalidInputError("figures need a two-candidate race")
    p0, p1 = summary.p
    regions = {"no_assumption": no_assumption_region(p0, p1)}
    current = regions["no_assumption"]
    delta0 = None
    if options.use_iv:
        if options.conditional:
            table = {z: (1 - as_fraction(v), as_fraction(v)) for z, v in options.conditional.items()}
        else:
            table = summary.p_by_first()
        if not table:
            raise InvalidInputError("instrument requested but no ballot positions are available")
        for z, (q0, q1) in table.items():
            regions[f"conditional:{z}"] = ConvexRegion2D.rectangle(q1, q0)
        res = iv_region(table)
        regions["iv"] = current = res.region
        delta0 = res.delta0
    gamma = None
    if options.abstention:
        gamma = summary.gamma
        mode = UnobservedMode(options.mode)
        composed = abstention_region(current, gamma, mode)
        if mode is not UnobservedMode.AGNOSTIC:
            regions["abstention:agnostic"] = abstention_region(current, gamma, UnobservedMode.AGNOSTIC)
        regions[f"abstention:{mode.value}"] = current = composed
    if options.pi is not None:
        pi0, pi1 = options.pi
        regions["consideration"] = consideration_region(current, pi0, pi1)
    return FigureSet(summary.race_id, summary.candidates, regions, delta0, gamma)


def load_overrides(path) -> dict:
    """Read an overrides file: ``{race_id: {"conditional": {...}, "pi": [pi0, pi1]}}``."""
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
