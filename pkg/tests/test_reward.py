from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kthstop.reward import (
    InvalidGoal,
    Observation,
    RankSet,
    SingleRank,
    parse_goal,
    reward,
    reward_k3,
    reward_support,
)
from oracles import enumerated_reward


@pytest.mark.parametrize(
    "obs, goal, expected",
    [
        ((5, 5, 3), SingleRank(3), Fraction(1)),
        ((4, 2, 2), SingleRank(3), Fraction(1, 3)),
        ((6, 3, 2), SingleRank(3), Fraction(3, 10)),
        ((5, 2, 1), RankSet([1, 2]), Fraction(7, 10)),
    ],
)
def test_reward_examples(obs, goal, expected):
    assert reward(obs, goal) == expected
    assert enumerated_reward(*obs, goal.ranks) == expected


def test_reward_k3_examples():
    assert reward_k3(13, 7, 2) == Fraction(42, 143)
    assert reward_k3(3, 3, 3) == 1
    assert reward_k3(10, 4, 4) == 0
    with pytest.raises(ValueError):
        reward_k3(2, 1, 1)


def test_reward_k3_matches_generic():
    for n in range(3, 61):
        for j in range(1, n + 1):
            for x in range(1, j + 1):
                assert reward_k3(n, j, x) == reward(Observation(n, j, x), SingleRank(3))


@pytest.mark.parametrize("n", range(1, 8))
def test_reward_matches_enumeration(n):
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            for x in range(1, j + 1):
                assert reward((n, j, x), SingleRank(k)) == enumerated_reward(n, j, x, [k])


def test_terminal_stage_is_indicator():
    n = 9
    for k in range(1, n + 1):
        for x in range(1, n + 1):
            assert reward((n, n, x), SingleRank(k)) == (x == k)


def test_invalid_goals():
    with pytest.raises(InvalidGoal):
        reward((4, 2, 1), SingleRank(5))
    with pytest.raises(InvalidGoal):
        reward((4, 2, 1), RankSet([0, 1]))
    with pytest.raises(InvalidGoal):
        RankSet([])
    with pytest.raises(ValueError):
        reward((4, 2, 3), SingleRank(1))


def test_rank_set_normalized_and_roundtrips():
    g = RankSet([3, 1, 3, 2])
    assert g.ranks == (1, 2, 3)
    assert g == RankSet((1, 2, 3))
    assert parse_goal(g.to_dict()) == g
    assert parse_goal(SingleRank(4).to_dict()) == SingleRank(4)


def test_support_covers_nonzero_rewards():
    n = 12
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            nonzero = [x for x in range(1, j + 1) if reward((n, j, x), SingleRank(k))]
            assert set(nonzero) <= set(reward_support(n, j, [k]))


@st.composite
def stage_and_goal(draw):
    n = draw(st.integers(1, 25))
    j = draw(st.integers(1, n))
    ranks = draw(st.sets(st.integers(1, n), min_size=1))
    return n, j, RankSet(ranks)


@given(stage_and_goal())
def test_row_sum(case):
    n, j, goal = case
    total = sum(reward((n, j, x), goal) for x in range(1, j + 1))
    assert total == Fraction(j * len(goal.ranks), n)


@given(st.integers(1, 30).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n), st.integers(1, n))))
def test_rank_reversal_symmetry(case):
    n, j, k = case
    for x in range(1, j + 1):
        assert reward((n, j, x), SingleRank(k)) == reward((n, j, j + 1 - x), SingleRank(n + 1 - k))
