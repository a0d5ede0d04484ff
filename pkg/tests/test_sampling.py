"""Tests for the choice-source plumbing shared by sampling and enumeration."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from threebox.sampling import (
    RandomChoiceSource,
    SequenceSource,
    enumerate_paths,
    enumerate_plays,
    path_variates,
)


def two_step_game(source):
    first = source.choose(("x", "y"), (Fraction(1, 4), Fraction(3, 4)))
    if first == "x":
        return "x" + source.choose(("a", "b"))
    return "y"


def test_enumerate_plays_weights_every_leaf():
    distribution = enumerate_plays(two_step_game)
    assert distribution == {
        "xa": Fraction(1, 8),
        "xb": Fraction(1, 8),
        "y": Fraction(3, 4),
    }
    assert sum(distribution.values()) == 1


def test_enumerate_paths_is_deterministic_depth_first():
    paths = enumerate_paths(two_step_game)
    assert [leaf.path for leaf in paths] == [(0, 0), (0, 1), (1,)]
    assert [leaf.result for leaf in paths] == ["xa", "xb", "y"]


def test_zero_weight_branches_are_pruned():
    def game(source):
        return source.choose(("dead", "alive"), (Fraction(0), Fraction(1)))

    assert enumerate_plays(game) == {"alive": Fraction(1)}


def test_replayed_variates_reproduce_every_branch():
    for leaf in enumerate_paths(two_step_game):
        variates = path_variates(two_step_game, leaf.path)
        sampled = two_step_game(RandomChoiceSource(SequenceSource(variates)))
        assert sampled == leaf.result


def test_path_variates_rejects_incomplete_paths():
    with pytest.raises(ValueError):
        path_variates(two_step_game, (0,))


def test_threshold_convention_is_strictly_below():
    # option k is taken iff u < cumulative weight k+1
    source = RandomChoiceSource(SequenceSource([0.25]))
    assert source.choose(("a", "b"), (Fraction(1, 4), Fraction(3, 4))) == "b"
    source = RandomChoiceSource(SequenceSource([0.2499999]))
    assert source.choose(("a", "b"), (Fraction(1, 4), Fraction(3, 4))) == "a"


@given(u=st.floats(min_value=0, max_value=1, exclude_max=True), n=st.integers(2, 7))
def test_uniform_fast_path_matches_fraction_thresholds(u, n):
    options = tuple(range(n))
    weights = (Fraction(1, n),) * n
    fast = RandomChoiceSource(SequenceSource([u])).choose(options)
    slow = RandomChoiceSource(SequenceSource([u])).choose(options, weights)
    assert fast == slow


def test_weight_validation():
    source = RandomChoiceSource(SequenceSource([0.5]))
    with pytest.raises(ValueError):
        source.choose(("a", "b"), (Fraction(1, 2),))
    with pytest.raises(ValueError):
        source.choose(("a", "b"), (Fraction(1, 2), Fraction(1, 4)))
    with pytest.raises(ValueError):
        source.choose(("a", "b"), (Fraction(-1, 2), Fraction(3, 2)))


def test_sequence_source_replays_then_exhausts():
    source = SequenceSource([0.25, 0.75])
    assert source.random() == 0.25
    assert source.random() == 0.75
    with pytest.raises(RuntimeError):
        source.random()
