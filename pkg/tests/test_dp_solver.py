import random
from fractions import Fraction
from itertools import combinations

import pytest

from kthstop.dp_solver import StagePolicy, p_kn, p_value, solve
from kthstop.policy_eval import evaluate
from kthstop.reward import InvalidGoal, RankSet, SingleRank, reward
from oracles import best_history_rule, brute_force_policy_value


def test_best_of_three():
    table, policy = solve(3, SingleRank(1))
    assert table.value == Fraction(1, 2)
    assert policy.as_lists() == [[], [1], [1, 2, 3]]
    assert best_history_rule(3, [1]) == Fraction(1, 2)


@pytest.mark.parametrize(
    "n, k, expected",
    [(5, 2, Fraction(3, 10)), (3, 3, Fraction(1, 2)), (4, 1, Fraction(11, 24))],
)
def test_known_values(n, k, expected):
    assert p_kn(k, n) == expected
    assert brute_force_policy_value(n, [k], solve(n, SingleRank(k))[1].as_lists()) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_history_dependent_rules(n):
    # any rule that looks at the whole history does no better than the DP
    for k in range(1, n + 1):
        assert p_kn(k, n) == best_history_rule(n, [k])
    assert p_value(n, RankSet([1, n])) == best_history_rule(n, [1, n])


def test_degenerate_sizes():
    assert p_kn(1, 1) == 1
    assert p_kn(1, 2) == p_kn(2, 2) == Fraction(1, 2)
    with pytest.raises(InvalidGoal):
        solve(3, SingleRank(4))
    with pytest.raises(ValueError):
        solve(0, SingleRank(1))


@pytest.mark.parametrize("n", [1, 5, 17])
def test_full_rank_set_is_certain(n):
    assert p_value(n, RankSet(range(1, n + 1))) == 1


def test_best_pair_of_five():
    values = {g: p_value(5, RankSet(g)) for g in combinations(range(1, 6), 2)}
    best = max(values.values())
    assert p_value(5, RankSet([1, 2])) == best
    assert sorted(g for g, v in values.items() if v == best) == [(1, 2), (4, 5)]


@pytest.mark.parametrize("n, goal", [(8, SingleRank(3)), (12, SingleRank(1)), (10, RankSet([2, 5, 9])), (25, SingleRank(7))])
def test_bellman_consistency(n, goal):
    table, policy = solve(n, goal)
    for x in range(1, n + 1):
        assert table.v(n, x) == reward((n, n, x), goal)
    for j in range(1, n):
        mean_next = sum(table.V[j]) / (j + 1)
        assert table.cont[j - 1] == mean_next
        for x in range(1, j + 1):
            y = reward((n, j, x), goal)
            assert table.v(j, x) == max(y, table.cont[j - 1])
            assert policy.stops(j, x) == (y >= table.cont[j - 1])
    assert table.value == table.v(1, 1)
    assert evaluate(n, goal, policy) == table.value


def test_symmetry():
    for n in range(1, 61):
        for k in range(1, n + 1):
            assert p_kn(k, n) == p_kn(n - k + 1, n)


def _random_policy(rng, n):
    sets = [[x for x in range(1, j + 1) if rng.random() < rng.random()] for j in range(1, n)]
    return StagePolicy.from_sets(n, sets + [list(range(1, n + 1))])


@pytest.mark.parametrize("n, k", [(6, 2), (13, 3), (30, 1), (30, 11)])
def test_dominates_random_policies(n, k):
    rng = random.Random(n * 100 + k)
    best = p_kn(k, n)
    for _ in range(200):
        assert evaluate(n, SingleRank(k), _random_policy(rng, n)) <= best


class TestStagePolicy:
    def test_last_stage_must_be_full(self):
        with pytest.raises(ValueError):
            StagePolicy(3, (0, 0, 0b011))

    def test_sets_must_fit_stage(self):
        with pytest.raises(ValueError):
            StagePolicy.from_sets(3, [[2], [], [1, 2, 3]])
        with pytest.raises(ValueError):
            StagePolicy(2, (0b10, 0b11))

    def test_roundtrip(self):
        p = StagePolicy.from_sets(4, [[], [2], [1, 3], [1, 2, 3, 4]])
        assert p.as_lists() == [[], [2], [1, 3], [1, 2, 3, 4]]
        assert p.size(3) == 2
        assert p.stops(3, 3) and not p.stops(3, 2)
        assert StagePolicy.stop_at_n(3).as_lists() == [[], [], [1, 2, 3]]
