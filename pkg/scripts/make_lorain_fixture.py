"""Write the synthetic Lorain County precinct fixture.

County totals are exact; the split across 24 precincts is synthetic. Each
precinct's vote split follows a first-listed advantage so raw conditional
frequencies land near the published conditional probabilities.
"""

import csv
import sys
from fractions import Fraction

TURNOUT = 116231
RACES = {
    "SC1": (("Baldwin", 29564), ("Donnelly", 57961), (Fraction(649, 1000), Fraction(675, 1000))),
    "SC2": (("DeGenaro", 37282), ("Stewart", 48190), (Fraction(547, 1000), Fraction(580, 1000))),
}
N = 24


def apportion(total, weights):
    """Largest-remainder split of ``total`` proportional to ``weights``."""
    s = sum(weights)
    ideal = [Fraction(total) * w / s for w in weights]
    base = [int(x) for x in ideal]
    order = sorted(range(len(ideal)), key=lambda i: (-(ideal[i] - base[i]), i))
    for i in order[: total - sum(base)]:
        base[i] += 1
    return base


def main(out):
    weights = [Fraction(10 + (i * 37) % 11, 10) for i in range(N)]
    turnout = apportion(TURNOUT, weights)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["precinct_id", "race_id", "candidate", "votes", "ballot_position",
                     "turnout", "reg_dem", "reg_rep"])
    rows = []
    for i in range(N):
        rows.append((i, "TURNOUT", "", turnout[i], "", ""))
    for race, ((c0, v0), (c1, v1), (share_second, share_first)) in RACES.items():
        race_votes = apportion(v0 + v1, turnout)
        # odd precincts list c1 first (rotation from alphabetical order)
        raw = [race_votes[i] * (share_first if i % 2 else share_second) for i in range(N)]
        second = apportion(v1, raw)
        for i in range(N):
            first_is_c1 = i % 2 == 1
            rows.append((i, race, c0, race_votes[i] - second[i], 2 if first_is_c1 else 1, turnout[i]))
            rows.append((i, race, c1, second[i], 1 if first_is_c1 else 2, turnout[i]))
    for i, race, cand, votes, pos, t in rows:
        writer.writerow([f"LOR-{i + 1:03d}", race, cand, votes, pos, t, "", ""])


if __name__ == "__main__":
    main(sys.stdout)
