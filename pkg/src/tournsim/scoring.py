"""Standings, the continuous/discrete point schemes, tie-breaking and the
L1 (Spearman footrule) distance between rankings."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    IncompleteRoundRobinError,
    InvalidComparisonError,
    InvalidInputError,
)
from .model import AverageResult, GameResult, TeamId

CONTINUOUS = "continuous"
DISCRETE = "discrete"

CRITERIA = ("points", "goal_difference", "goals_for", "head_to_head", "seed_order")


def points_per_game(g: GameResult) -> tuple[int, int]:
    """3 for a win, 1 for a draw, 0 for a loss."""
    if g.home_goals > g.away_goals:
        return 3, 0
    if g.home_goals < g.away_goals:
        return 0, 3
    return 1, 1


def round_half_away(x: float) -> int:
    """Nearest integer, halves away from zero (0.5 -> 1)."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def discretize_pair(avg: AverageResult) -> GameResult:
    """Round a pairing's mean scoreline to the nearest integers, producing a
    single representative game (e.g. 1.9 : 1.2 becomes 2 : 1)."""
    return GameResult(
        avg.pair[0],
        avg.pair[1],
        round_half_away(avg.mean_for),
        round_half_away(avg.mean_against),
    )


@dataclass
class TeamStats:
    points: float = 0.0
    goals_for: float = 0.0
    goals_against: float = 0.0
    games_played: int = 0

    @property
    def goal_difference(self) -> float:
        return self.goals_for - self.goals_against


# A Standings is a mapping from team name to TeamStats.
Standings = dict


def standings_from_games(
    games: Iterable[GameResult], teams: Optional[Sequence[str]] = None
) -> Standings:
    """Plain league-table accumulation: 3/1/0 points plus raw goal sums."""
    table: Standings = {name: TeamStats() for name in (teams or [])}
    for g in games:
        for name in (g.home.name, g.away.name):
            if name not in table:
                table[name] = TeamStats()
        ph, pa = points_per_game(g)
        h, a = table[g.home.name], table[g.away.name]
        h.points += ph
        a.points += pa
        h.goals_for += g.home_goals
        h.goals_against += g.away_goals
        a.goals_for += g.away_goals
        a.goals_against += g.home_goals
        h.games_played += 1
        a.games_played += 1
    return table


def continuous_points(per_opponent_points: Mapping[str, float], n_teams: int) -> float:
    """Continuous-scheme total: sum over opponents of the mean per-game
    points achieved against that opponent."""
    if len(per_opponent_points) != n_teams - 1:
        missing = n_teams - 1 - len(per_opponent_points)
        raise IncompleteRoundRobinError(
            f"continuous points need one entry per opponent ({missing} missing)"
        )
    return float(sum(per_opponent_points.values()))


def continuous_standings(
    avgs: Iterable[AverageResult],
    point_means: Mapping[tuple[str, str], float],
    teams: Sequence[str],
) -> Standings:
    """Continuous scheme over a complete round-robin: points are summed mean
    per-game points; goals for/against are the raw pairing means.

    `point_means` maps the ordered pair (a, b) to the mean per-game points
    team a earned against team b (both orientations must be present).
    """
    avgs = list(avgs)
    _require_complete(avgs, teams)
    table: Standings = {name: TeamStats() for name in teams}
    for avg in avgs:
        a, b = avg.pair[0].name, avg.pair[1].name
        table[a].points += point_means[(a, b)]
        table[b].points += point_means[(b, a)]
        table[a].goals_for += avg.mean_for
        table[a].goals_against += avg.mean_against
        table[b].goals_for += avg.mean_against
        table[b].goals_against += avg.mean_for
        table[a].games_played += 1
        table[b].games_played += 1
    return table


def discrete_standings(
    avgs: Iterable[AverageResult], teams: Sequence[str]
) -> Standings:
    """Discrete scheme: each pairing's mean scoreline is rounded to a single
    representative game, then 3/1/0 points are awarded; goal sums accumulate
    the rounded values."""
    avgs = list(avgs)
    _require_complete(avgs, teams)
    return standings_from_games([discretize_pair(a) for a in avgs], teams)


def _require_complete(avgs: Sequence[AverageResult], teams: Sequence[str]):
    expected = {frozenset((a, b)) for i, a in enumerate(teams) for b in teams[i + 1:]}
    seen = {frozenset((x.pair[0].name, x.pair[1].name)) for x in avgs}
    if seen != expected or len(avgs) != len(expected):
        raise IncompleteRoundRobinError(
            f"need exactly one average per pair: {len(expected)} pairs expected"
        )


@dataclass(frozen=True)
class TieBreakPolicy:
    """Ordered tie-break criteria; the list must end in seed_order so the
    resulting ranking is always a total order."""

    criteria: tuple[str, ...] = ("points", "goal_difference", "goals_for", "seed_order")

    def __post_init__(self):
        if len(set(self.criteria)) != len(self.criteria):
            raise InvalidInputError("tie-break criteria must be unique")
        for c in self.criteria:
            if c not in CRITERIA:
                raise InvalidInputError(f"unknown criterion {c!r}")
        if self.criteria[-1] != "seed_order":
            raise InvalidInputError("criteria must end with seed_order")


DEFAULT_POLICY = TieBreakPolicy()


@dataclass(frozen=True)
class Ranking:
    """Bijection from team name to place 1..n."""

    places: dict

    def __post_init__(self):
        n = len(self.places)
        if sorted(self.places.values()) != list(range(1, n + 1)):
            raise InvalidInputError("ranks must be a permutation of 1..n")

    @classmethod
    def from_order(cls, names: Sequence[str]) -> "Ranking":
        return cls({name: i + 1 for i, name in enumerate(names)})

    def order(self) -> list[str]:
        return sorted(self.places, key=self.places.get)

    def __getitem__(self, name: str) -> int:
        return self.places[name]

    def __len__(self) -> int:
        return len(self.places)


def rank(
    standings: Standings,
    policy: TieBreakPolicy = DEFAULT_POLICY,
    seed_order: Optional[Sequence[str]] = None,
    games: Optional[Sequence[GameResult]] = None,
) -> Ranking:
    """Order teams lexicographically by the policy's criteria (higher points,
    higher goal difference, higher goals for, head-to-head points among the
    tied subset, then seed order)."""
    names = list(standings)
    seed_pos = {n: i for i, n in enumerate(seed_order or names)}

    def split(group: list[str], crits: tuple[str, ...]) -> list[str]:
        if len(group) <= 1:
            return group
        crit = crits[0]
        if crit == "seed_order":
            return sorted(group, key=seed_pos.get)
        if crit == "head_to_head":
            sub = set(group)
            mini = standings_from_games(
                [g for g in (games or []) if g.home.name in sub and g.away.name in sub],
                group,
            )
            key = {n: mini[n].points for n in group}
        elif crit == "points":
            key = {n: standings[n].points for n in group}
        elif crit == "goal_difference":
            key = {n: standings[n].goal_difference for n in group}
        else:  # goals_for
            key = {n: standings[n].goals_for for n in group}
        ordered = sorted(group, key=lambda n: -key[n])
        out: list[str] = []
        i = 0
        while i < len(ordered):
            j = i
            while j < len(ordered) and key[ordered[j]] == key[ordered[i]]:
                j += 1
            out.extend(split(ordered[i:j], crits[1:]))
            i = j
        return out

    return Ranking.from_order(split(names, policy.criteria))


def l1_distance(a: Ranking, b: Ranking) -> int:
    """Spearman footrule: sum over teams of |rank_a - rank_b|."""
    if set(a.places) != set(b.places):
        raise InvalidComparisonError("rankings cover different team sets")
    return sum(abs(a.places[n] - b.places[n]) for n in a.places)


def standings_to_csv(
    standings: Standings, ranking: Optional[Ranking] = None
) -> str:
    """Tabular text mirroring the Points / Goal Diff / Rank columns."""
    out = io.StringIO()
    out.write("team,points,goals_for,goals_against,goal_diff"
              + (",rank\n" if ranking else "\n"))
    names = ranking.order() if ranking else list(standings)
    for name in names:
        s = standings[name]
        row = (
            f"{name},{_num(s.points)},{_num(s.goals_for)},"
            f"{_num(s.goals_against)},{_num(s.goal_difference)}"
        )
        if ranking:
            row += f",{ranking[name]}"
        out.write(row + "\n")
    return out.getvalue()


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.6g}"
