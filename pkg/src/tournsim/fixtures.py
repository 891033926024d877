"""Bundled RoboCup 2012/2013 data and the golden checks built on it.

The CSVs under data/ transcribe the published round-robin tables: goal
means per ordered pair, per-pair average points (needed because continuous
points cannot be recovered from goal means alone), and the combined
actual/average score tables used to infer the proposed-format placements.
The published rankings and the classification-playoff winners they imply
are recorded here as constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .errors import IngestionError
from .formats import FixedResultTable, rank_from_fixed_results
from .model import AverageResult, PairwiseGoalModel, TeamId, load_model
from .scoring import (
    Ranking,
    continuous_standings,
    discrete_standings,
    l1_distance,
    rank,
)

TEAMS_2012 = ("Helios", "Wright", "Marlik", "Gliders", "GDUT", "AUT", "Yushan", "RobOTTO")
TEAMS_2013 = ("Wright", "Helios", "Yushan", "Axiom", "Gliders", "Oxsy", "AUT", "Cyrus")

# Official competition results (data-file order equals official placement).
R_A_2012 = Ranking.from_order(list(TEAMS_2012))
R_A_2013 = Ranking.from_order(list(TEAMS_2013))

# High-N round-robin rankings under the continuous scheme.
R_C_2012 = Ranking.from_order(
    ["Wright", "Helios", "Yushan", "Gliders", "Marlik", "GDUT", "RobOTTO", "AUT"]
)
R_C_2013 = Ranking.from_order(
    ["Wright", "Helios", "Oxsy", "Yushan", "Cyrus", "Gliders", "AUT", "Axiom"]
)

# Same round-robins scored under the discrete scheme.
R_D_2012 = R_C_2012
R_D_2013 = Ranking.from_order(
    ["Wright", "Helios", "Yushan", "Oxsy", "Cyrus", "Gliders", "AUT", "Axiom"]
)

# Published placements under the proposed format replayed over the combined
# score tables.
R_P_2012 = Ranking.from_order(
    ["Helios", "Wright", "Yushan", "Marlik", "Gliders", "GDUT", "RobOTTO", "AUT"]
)
R_P_2013 = Ranking.from_order(
    ["Wright", "Helios", "Yushan", "Gliders", "Oxsy", "Cyrus", "AUT", "Axiom"]
)

# Classification-playoff winners the published placements imply where the
# combined tables' head-to-head cells do not decide them (drawn cells or
# placements that contradict the cell).
PLAYOFF_OVERRIDES_2012 = {
    frozenset(("Marlik", "Yushan")): "Yushan",
    frozenset(("AUT", "RobOTTO")): "RobOTTO",
}
PLAYOFF_OVERRIDES_2013 = {
    frozenset(("Yushan", "Gliders")): "Yushan",
    frozenset(("Axiom", "AUT")): "AUT",
}

DISCRETE_POINTS_2012 = (19, 19, 10, 12, 6, 0, 13, 3)  # data-file team order
DISCRETE_POINTS_2013 = (21, 18, 11, 1, 7, 11, 1, 10)
CONTINUOUS_POINTS_2012 = (18.152, 18.899, 9.999, 10.291, 7.800, 0.377, 12.105, 2.973)
CONTINUOUS_POINTS_2013 = (18.308, 16.937, 9.434, 3.713, 8.371, 9.543, 4.416, 8.408)

GOLDEN_L1 = (
    ("L1-ra-rc-2012", R_A_2012, R_C_2012, 12),
    ("L1-ra-rc-2013", R_A_2013, R_C_2013, 12),
    ("L1-ra-rd-2013", R_A_2013, R_D_2013, 10),
    ("L1-rp-rc-2012", R_P_2012, R_C_2012, 4),
    ("L1-rp-rc-2013", R_P_2013, R_C_2013, 6),
    ("L1-rp-rd-2013", R_P_2013, R_D_2013, 4),
)


def fixture_path(name: str):
    """Filesystem path of a bundled data file."""
    return resources.files("tournsim").joinpath("data", name)


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_goal_model(year: int) -> PairwiseGoalModel:
    return load_model(fixture_text(f"robocup{year}.csv"))


def load_points_model(year: int) -> PairwiseGoalModel:
    """Per-pair mean points reuse the matrix loader; entry (i, j) is the
    mean per-game points team i earned against team j."""
    return load_model(fixture_text(f"robocup{year}.points.csv"))


def load_combined_table(year: int) -> FixedResultTable:
    """Combined actual/average score table ('a:b' cells, diagonal blank)."""
    lines = [ln for ln in fixture_text(f"combined{year}.csv").splitlines() if ln.strip()]
    names = [c.strip() for c in lines[0].split(",")][1:]
    scores: dict[tuple[str, str], tuple[float, float]] = {}
    for r, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        row = cells[0]
        for c, cell in enumerate(cells[1:]):
            if r == c:
                continue
            try:
                a, b = cell.split(":")
                scores[(row, names[c])] = (float(a), float(b))
            except ValueError:
                raise IngestionError(
                    f"row {row!r}, column {names[c]!r}: bad score cell {cell!r}"
                ) from None
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if (a, b) not in scores or (b, a) not in scores:
                raise IngestionError(f"combined table missing pair ({a}, {b})")
    return FixedResultTable(names, scores)


def pair_averages(model: PairwiseGoalModel) -> list[AverageResult]:
    """One AverageResult per unordered pair, read off the model matrix."""
    out = []
    for i in range(model.n):
        for j in range(i + 1, model.n):
            out.append(
                AverageResult(
                    (TeamId(i, model.names[i]), TeamId(j, model.names[j])),
                    model.mean(i, j),
                    model.mean(j, i),
                    1,
                )
            )
    return out


def point_mean_map(points: PairwiseGoalModel) -> dict[tuple[str, str], float]:
    return {
        (points.names[i], points.names[j]): points.mean(i, j)
        for i in range(points.n)
        for j in range(points.n)
        if i != j
    }


def discrete_fixture_standings(year: int):
    model = load_goal_model(year)
    return discrete_standings(pair_averages(model), model.names), model


def continuous_fixture_standings(year: int):
    model = load_goal_model(year)
    points = load_points_model(year)
    if points.names != model.names:
        raise IngestionError(f"fixture team order mismatch for {year}")
    table = continuous_standings(
        pair_averages(model), point_mean_map(points), model.names
    )
    return table, model


def published_truth(year: int) -> Ranking:
    return R_C_2012 if year == 2012 else R_C_2013


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    run: Callable[[], bool]
    detail: str = ""


def golden_checks() -> list[GoldenCheck]:
    """Every value reproduced from the published tables, as pass/fail
    checks; the reproduce CLI command runs these."""
    checks: list[GoldenCheck] = []

    def discrete(year, expected_points, expected_rank):
        def run():
            table, model = discrete_fixture_standings(year)
            pts = tuple(int(table[n].points) for n in model.names)
            r = rank(table, seed_order=list(model.names))
            return pts == expected_points and r.places == expected_rank.places
        return run

    checks.append(GoldenCheck("discrete-points-and-rd-2012",
                              discrete(2012, DISCRETE_POINTS_2012, R_D_2012)))
    checks.append(GoldenCheck("discrete-points-and-rd-2013",
                              discrete(2013, DISCRETE_POINTS_2013, R_D_2013)))

    def tiebreak_2012():
        table, _ = discrete_fixture_standings(2012)
        return (
            table["Wright"].points == table["Helios"].points
            and table["Wright"].goal_difference == 39
            and table["Wright"].goal_difference > table["Helios"].goal_difference
        )

    checks.append(GoldenCheck("discrete-tiebreak-2012-wright-over-helios", tiebreak_2012))

    def continuous(year, expected_points, expected_rank):
        def run():
            table, model = continuous_fixture_standings(year)
            ok = all(
                abs(table[n].points - e) <= 5e-4
                for n, e in zip(model.names, expected_points)
            )
            r = rank(table, seed_order=list(model.names))
            return ok and r.places == expected_rank.places
        return run

    checks.append(GoldenCheck("continuous-points-and-rc-2012",
                              continuous(2012, CONTINUOUS_POINTS_2012, R_C_2012)))
    checks.append(GoldenCheck("continuous-points-and-rc-2013",
                              continuous(2013, CONTINUOUS_POINTS_2013, R_C_2013)))

    for name, a, b, expected in GOLDEN_L1:
        checks.append(
            GoldenCheck(name, lambda a=a, b=b, e=expected: l1_distance(a, b) == e)
        )

    def proposed(year, overrides, expected_rank):
        def run():
            table = load_combined_table(year)
            r = rank_from_fixed_results(table, playoff_overrides=overrides)
            return r.places == expected_rank.places
        return run

    checks.append(GoldenCheck("proposed-replay-rp-2012",
                              proposed(2012, PLAYOFF_OVERRIDES_2012, R_P_2012)))
    checks.append(GoldenCheck("proposed-replay-rp-2013",
                              proposed(2013, PLAYOFF_OVERRIDES_2013, R_P_2013)))
    return checks
