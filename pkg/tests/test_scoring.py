import itertools
import random

import pytest

from tournsim import (
    AverageResult,
    GameResult,
    IncompleteRoundRobinError,
    InvalidComparisonError,
    InvalidInputError,
    Ranking,
    TeamId,
    TieBreakPolicy,
    continuous_points,
    discrete_standings,
    discretize_pair,
    l1_distance,
    points_per_game,
    rank,
    standings_from_games,
)
from tournsim import fixtures
from tournsim.scoring import TeamStats


def game(a, b, ga, gb):
    return GameResult(TeamId(0, a), TeamId(1, b), ga, gb)


def avg(a, b, ma, mb, ia=0, ib=1):
    return AverageResult((TeamId(ia, a), TeamId(ib, b)), ma, mb, 1)


@pytest.mark.parametrize(
    "score,expected",
    [((2, 1), (3, 0)), ((0, 0), (1, 1)), ((1, 4), (0, 3))],
)
def test_points_per_game(score, expected):
    assert points_per_game(game("A", "B", *score)) == expected


@pytest.mark.parametrize(
    "means,expected",
    [((1.9, 1.2), (2, 1)), ((0.46, 0.56), (0, 1)), ((0.5, 0.5), (1, 1))],
)
def test_discretize_pair(means, expected):
    g = discretize_pair(avg("A", "B", *means))
    assert (g.home_goals, g.away_goals) == expected


class TestContinuousPoints:
    def test_wright_2012_total(self):
        table, _ = fixtures.continuous_fixture_standings(2012)
        assert table["Wright"].points == pytest.approx(18.899, abs=5e-4)

    def test_aut_2012_total(self):
        table, _ = fixtures.continuous_fixture_standings(2012)
        assert table["AUT"].points == pytest.approx(0.377, abs=5e-4)

    def test_all_win_upper_bound(self):
        assert continuous_points({"B": 3.0, "C": 3.0, "D": 3.0}, 4) == 9.0

    def test_missing_opponent_rejected(self):
        with pytest.raises(IncompleteRoundRobinError):
            continuous_points({"B": 3.0}, 4)

    def test_equals_per_game_points_mean(self):
        # continuous total == (1/N) * sum of per-game points when every
        # pairing has exactly N games
        rnd = random.Random(4)
        teams = ["A", "B", "C", "D"]
        n_games = 5
        total = {t: 0.0 for t in teams}
        per_opp = {t: {} for t in teams}
        for x, y in itertools.combinations(teams, 2):
            pts_x = 0
            pts_y = 0
            for _ in range(n_games):
                g = game(x, y, rnd.randint(0, 4), rnd.randint(0, 4))
                px, py = points_per_game(g)
                pts_x += px
                pts_y += py
            total[x] += pts_x
            total[y] += pts_y
            per_opp[x][y] = pts_x / n_games
            per_opp[y][x] = pts_y / n_games
        for t in teams:
            assert continuous_points(per_opp[t], 4) == pytest.approx(
                total[t] / n_games
            )


class TestDiscreteStandings:
    def test_2012_points_column(self):
        table, model = fixtures.discrete_fixture_standings(2012)
        assert tuple(int(table[n].points) for n in model.names) == (
            19, 19, 10, 12, 6, 0, 13, 3,
        )

    def test_2013_points_column(self):
        table, model = fixtures.discrete_fixture_standings(2013)
        assert tuple(int(table[n].points) for n in model.names) == (
            21, 18, 11, 1, 7, 11, 1, 10,
        )

    def test_forced_draw(self):
        table = discrete_standings([avg("A", "B", 1.0, 1.0)], ["A", "B"])
        assert table["A"].points == 1 and table["B"].points == 1

    def test_incomplete_rejected(self):
        with pytest.raises(IncompleteRoundRobinError):
            discrete_standings([avg("A", "B", 1, 0)], ["A", "B", "C"])

    def test_total_points_identity(self):
        # 3 per decisive rounded pairing, 2 per drawn one
        rnd = random.Random(11)
        teams = [f"T{i}" for i in range(6)]
        avgs = []
        for i, (x, y) in enumerate(itertools.combinations(teams, 2)):
            avgs.append(avg(x, y, rnd.uniform(0, 3), rnd.uniform(0, 3),
                            teams.index(x), teams.index(y)))
        drawn = sum(
            1 for a in avgs
            if discretize_pair(a).home_goals == discretize_pair(a).away_goals
        )
        table = discrete_standings(avgs, teams)
        total = sum(table[t].points for t in teams)
        assert total == 3 * (len(avgs) - drawn) + 2 * drawn


class TestRank:
    def test_rd_2012_with_goal_diff_tiebreak(self):
        table, model = fixtures.discrete_fixture_standings(2012)
        r = rank(table, seed_order=list(model.names))
        assert r.places == fixtures.R_D_2012.places
        # the tie-break separates Wright (+39) from Helios
        assert table["Wright"].points == table["Helios"].points == 19
        assert table["Wright"].goal_difference == 39

    def test_rc_2013_oxsy_third_yushan_fourth(self):
        table, model = fixtures.continuous_fixture_standings(2013)
        r = rank(table, seed_order=list(model.names))
        assert r["Oxsy"] == 3 and r["Yushan"] == 4
        assert r.places == fixtures.R_C_2013.places

    def test_degenerate_tie_falls_to_seed_order(self):
        table = {t: TeamStats(points=5, goals_for=2, goals_against=2) for t in "ABCD"}
        r = rank(table, seed_order=["C", "A", "D", "B"])
        assert r.order() == ["C", "A", "D", "B"]

    def test_rescaling_invariance(self):
        rnd = random.Random(2)
        for _ in range(50):
            table = {
                f"T{i}": TeamStats(
                    points=rnd.randint(0, 21),
                    goals_for=rnd.randint(0, 30),
                    goals_against=rnd.randint(0, 30),
                )
                for i in range(8)
            }
            base = rank(table, seed_order=sorted(table))
            scaled = {
                t: TeamStats(s.points * 7.5, s.goals_for, s.goals_against)
                for t, s in table.items()
            }
            assert rank(scaled, seed_order=sorted(table)).places == base.places

    def test_head_to_head_criterion(self):
        games = [
            game("A", "B", 1, 0),
            game("B", "C", 1, 0),
            game("C", "A", 2, 0),
        ]
        table = standings_from_games(games)
        policy = TieBreakPolicy(("points", "head_to_head", "goal_difference", "seed_order"))
        # all on 3 points; head-to-head among the tied trio is also cyclic,
        # so goal difference decides: C (+1), A (-1)... C 2-1, A 1-2, B 1-1
        r = rank(table, policy, seed_order=["A", "B", "C"], games=games)
        assert r.order() == ["C", "B", "A"]

    def test_policy_validation(self):
        with pytest.raises(InvalidInputError):
            TieBreakPolicy(("points", "points", "seed_order"))
        with pytest.raises(InvalidInputError):
            TieBreakPolicy(("points", "goal_difference"))


class TestL1Distance:
    def test_golden_2012(self):
        assert l1_distance(fixtures.R_A_2012, fixtures.R_C_2012) == 12

    def test_identity(self):
        assert l1_distance(fixtures.R_C_2013, fixtures.R_C_2013) == 0

    def test_full_reversal_of_8(self):
        a = Ranking.from_order([f"T{i}" for i in range(8)])
        b = Ranking.from_order([f"T{i}" for i in reversed(range(8))])
        # direct summation of |i - (9 - i)| over i = 1..8
        assert l1_distance(a, b) == sum(abs(i - (9 - i)) for i in range(1, 9)) == 32

    def test_mismatched_teams_rejected(self):
        a = Ranking.from_order(["A", "B"])
        b = Ranking.from_order(["A", "C"])
        with pytest.raises(InvalidComparisonError):
            l1_distance(a, b)

    def test_metric_and_parity_properties(self):
        rnd = random.Random(8)
        for _ in range(2000):
            n = rnd.randint(2, 12)
            names = [f"T{i}" for i in range(n)]
            perms = []
            for _ in range(3):
                order = names[:]
                rnd.shuffle(order)
                perms.append(Ranking.from_order(order))
            a, b, c = perms
            dab = l1_distance(a, b)
            assert dab >= 0
            assert dab % 2 == 0
            assert dab <= n * n // 2
            assert dab == l1_distance(b, a)
            assert (dab == 0) == (a.places == b.places)
            assert l1_distance(a, c) <= dab + l1_distance(b, c)
            # relabeling both rankings by one permutation changes nothing
            relabel = dict(zip(names, rnd.sample(names, n)))
            ra = Ranking({relabel[t]: p for t, p in a.places.items()})
            rb = Ranking({relabel[t]: p for t, p in b.places.items()})
            assert l1_distance(ra, rb) == dab


def test_ranking_must_be_permutation():
    with pytest.raises(InvalidInputError):
        Ranking({"A": 1, "B": 1})
