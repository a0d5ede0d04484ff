"""Tests for the execution layer: enumeration events, seeded Monte Carlo,
Wilson intervals, and the discriminator table."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from threebox.games import GameRecord
from threebox.harness import (
    ClassicalGame,
    DiscriminatorRow,
    _as_fraction,
    discriminator_table,
    enumerate_exact,
    kirkpatrick_game,
    leifer_spekkens_game,
    monte_carlo,
    move_game,
    quantum_game,
    record_key,
    simplified_game,
    substream_table,
    wilson_interval,
)
from threebox.scenarios import Scenario

DEFAULT_SEED = 20_240_101


# ---------------------------------------------------------------------------
# exact enumeration events


def test_kirkpatrick_events():
    events = enumerate_exact(kirkpatrick_game("S"))
    assert events["post"] == Fraction(1, 8)
    assert events["found_given_post"] == Fraction(1)
    assert events["found_and_post"] == Fraction(1, 8)


def test_quantum_measure_a_events():
    events = enumerate_exact(quantum_game(Scenario.THREE_BOX, "A"))
    assert events["post"] == Fraction(1, 9)
    assert events["found_given_post"] == Fraction(1)
    assert events["not_found_and_post"] == Fraction(0)


def test_quantum_box_c_conditional_is_exactly_one_fifth():
    events = enumerate_exact(quantum_game(Scenario.THREE_BOX, "C"))
    assert events["found_given_post"] == Fraction(1, 5)


def test_quantum_enumeration_sums_to_exactly_one():
    for measure in ("A", "B", "C", None):
        distribution = quantum_game(Scenario.THREE_BOX, measure).enumerate()
        assert sum(distribution.values()) == 1


def test_degenerate_single_branch_game():
    game = ClassicalGame("constant", lambda src: GameRecord(None, True))
    assert enumerate_exact(game) == {
        "no_measurement_and_post": Fraction(1),
        "post": Fraction(1),
    }


def test_unknown_quantum_measurement_is_rejected():
    with pytest.raises(ValueError):
        quantum_game(Scenario.THREE_BOX, "D")
    with pytest.raises(ValueError):
        quantum_game(Scenario.SPIN_BOX, "A")


def test_record_keys():
    assert record_key(GameRecord(True, True)) == "found_and_post"
    assert record_key(GameRecord(False, False)) == "not_found_and_discarded"
    assert record_key(GameRecord(None, True)) == "no_measurement_and_post"


def test_as_fraction_recovers_small_rationals_and_rejects_garbage():
    assert _as_fraction(float(Fraction(1, 9))) == Fraction(1, 9)
    assert _as_fraction(0.0) == 0
    with pytest.raises(ValueError):
        _as_fraction(0.5000005, max_denominator=10)


# ---------------------------------------------------------------------------
# Monte Carlo determinism and statistics


def test_monte_carlo_is_reproducible():
    game = move_game(1)
    first = monte_carlo(game, 5_000, seed=DEFAULT_SEED)
    second = monte_carlo(game, 5_000, seed=DEFAULT_SEED)
    assert first == second


def test_monte_carlo_serial_equals_concurrent():
    game = kirkpatrick_game("S")
    serial = monte_carlo(game, 10_000, seed=DEFAULT_SEED, workers=1)
    for workers in (2, 3, 7):
        assert monte_carlo(game, 10_000, seed=DEFAULT_SEED, workers=workers) == serial


def test_substream_rows_are_prefix_stable():
    long = substream_table(DEFAULT_SEED, 64)
    short = substream_table(DEFAULT_SEED, 16)
    assert np.array_equal(long[:16], short)


def test_counts_sum_to_runs_and_single_run_works():
    stats = monte_carlo(move_game(1), 1, seed=1)
    assert sum(stats.counts.values()) == 1
    stats = monte_carlo(move_game(1), 3_000, seed=2)
    assert sum(stats.counts.values()) == 3_000


def test_monte_carlo_rejects_nonpositive_runs():
    with pytest.raises(ValueError):
        monte_carlo(move_game(1), 0, seed=1)


def test_zero_probability_events_never_occur():
    # Certainty certified stochastically: events the enumeration assigns
    # zero probability must have zero count in every seeded run.
    for seed in (0, 1, 2, 3, 4):
        stats = monte_carlo(kirkpatrick_game("S"), 20_000, seed=seed)
        assert stats.counts.get("not_found_and_post", 0) == 0
        assert stats.frequencies["found_given_post"] == 1.0
        quantum = monte_carlo(quantum_game(Scenario.THREE_BOX, "B"), 20_000, seed=seed)
        assert quantum.counts["not_found_and_post"] == 0
        assert quantum.frequencies["found_given_post"] == 1.0


def test_frequencies_track_exact_probabilities_within_five_sigma():
    systems = [
        quantum_game(Scenario.THREE_BOX, "A"),
        kirkpatrick_game("S"),
        simplified_game("S"),
        leifer_spekkens_game("left"),
        move_game(1),
    ]
    runs = 100_000
    for game in systems:
        stats = monte_carlo(game, runs, seed=DEFAULT_SEED)
        for event, exact in stats.exact.items():
            if event == "found_given_post":
                continue  # conditional: its trial count is the post count
            p = float(exact)
            frequency = stats.frequencies[event]
            if p in (0.0, 1.0):
                assert frequency == p
            else:
                assert abs(frequency - p) < 5.0 * math.sqrt(p * (1 - p) / runs)


def test_statistics_contain_their_own_frequencies():
    stats = monte_carlo(simplified_game("S"), 20_000, seed=7)
    for event, frequency in stats.frequencies.items():
        low, high = stats.ci95[event]
        assert 0.0 <= low <= frequency <= high <= 1.0


# ---------------------------------------------------------------------------
# Wilson intervals


def test_wilson_z_matches_the_95_percent_quantile():
    scipy_stats = pytest.importorskip("scipy.stats")
    from threebox.harness import _Z95

    assert _Z95 == pytest.approx(scipy_stats.norm.ppf(0.975), abs=1e-12)


def test_wilson_interval_is_proper_at_the_extremes():
    low, high = wilson_interval(0, 100)
    assert low == 0.0 and 0.0 < high < 0.05
    low, high = wilson_interval(100, 100)
    assert 0.95 < low < 1.0 and high == 1.0


def test_wilson_interval_validation():
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)
    with pytest.raises(ValueError):
        wilson_interval(-1, 4)


@given(trials=st.integers(1, 10_000), ratio=st.floats(0, 1))
def test_wilson_interval_contains_the_point_estimate(trials, ratio):
    successes = min(trials, int(round(ratio * trials)))
    low, high = wilson_interval(successes, trials)
    assert 0.0 <= low <= successes / trials <= high <= 1.0


# ---------------------------------------------------------------------------
# discriminator table


def test_discriminator_table_values():
    rows = {row.system: row for row in discriminator_table()}
    assert rows["three-box"] == DiscriminatorRow(
        "three-box", True, Fraction(1, 9), Fraction(1, 9), Fraction(1)
    )
    assert rows["kirkpatrick"] == DiscriminatorRow(
        "kirkpatrick", False, Fraction(0), Fraction(1, 8), Fraction(1)
    )
    assert rows["simplified"] == DiscriminatorRow(
        "simplified", False, Fraction(1, 3), Fraction(1, 6), Fraction(1)
    )
    assert rows["leifer-spekkens"] == DiscriminatorRow(
        "leifer-spekkens", False, Fraction(0), Fraction(1, 4), Fraction(1)
    )
    assert rows["move-game"] == DiscriminatorRow(
        "move-game", False, Fraction(2, 3), Fraction(1, 3), Fraction(1)
    )


def test_discriminator_separates_observation_from_disturbance():
    rows = {row.system: row for row in discriminator_table()}
    assert rows["three-box"].post_no_measurement > 0
    assert rows["kirkpatrick"].post_no_measurement == 0
    assert rows["leifer-spekkens"].post_no_measurement == 0
