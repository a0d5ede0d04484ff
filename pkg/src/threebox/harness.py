"""Uniform execution layer over quantum rounds and classical games.

Every system is wrapped as a game model with two capabilities: exact
enumeration into rational probabilities, and sampling from a uniform
variate stream. Monte Carlo derives each run's variates as a fixed-width
row of a counter-mode Philox stream keyed by the seed, so run ``i`` is a
pure function of ``(seed, i)`` and results are bit-identical no matter
how runs are scheduled or chunked across workers.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from .games import (
    GameRecord,
    SimplifiedVariant,
    run_kirkpatrick,
    run_leifer_spekkens,
    run_move_game,
    run_simplified,
)
from .sampling import ChoiceSource, RandomChoiceSource, SequenceSource, UniformSource
from .scenarios import Scenario, build, pre_post_round
from .twostate import TwoStateVector, enumerate_sequence
from .hilbert import Projector

#: Uniform variates reserved per run; no game consumes more than three.
VARIATES_PER_RUN = 4

#: z for a two-sided 95% interval (validated against scipy in the tests).
_Z95 = 1.959963984540054


class GameModel(Protocol):
    """A finite stochastic game: exact enumeration plus sampling."""

    name: str

    def enumerate(self) -> dict[GameRecord, Fraction]: ...

    def sample(self, rng: UniformSource) -> GameRecord: ...


def _as_fraction(x: float, max_denominator: int = 10**6, tol: float = 1e-9) -> Fraction:
    """Recover the small rational a double-precision probability rounds to.

    All probabilities in these systems are rationals with tiny
    denominators; refuse anything that is not within ``tol`` of one.
    """
    frac = Fraction(x).limit_denominator(max_denominator)
    if abs(float(frac) - x) > tol:
        raise ValueError(f"{x!r} is not within {tol} of a small rational")
    return frac


@dataclass(frozen=True)
class ClassicalGame:
    """Adapter putting a choice-source game function behind GameModel."""

    name: str
    play: Callable[[ChoiceSource], GameRecord]

    def enumerate(self) -> dict[GameRecord, Fraction]:
        from .sampling import enumerate_plays

        return enumerate_plays(self.play)

    def sample(self, rng: UniformSource) -> GameRecord:
        return self.play(RandomChoiceSource(rng))


@dataclass(frozen=True)
class QuantumGame:
    """A pre/post-selected round with at most one intermediate measurement.

    Sampling compares variates against the same Born thresholds the
    per-round collapse dynamics produce (`scenarios.pre_post_round` is the
    step-by-step equivalent; the two agree variate-for-variate).
    """

    name: str
    tsv: TwoStateVector
    projector: Projector | None

    @functools.cached_property
    def _branches(self) -> tuple[tuple[bool | None, float, float], ...]:
        distribution = enumerate_sequence(
            self.tsv, [self.projector] if self.projector is not None else []
        )
        branches = []
        for entry in distribution.entries:
            found = entry.outcomes[0] if entry.outcomes else None
            branches.append(
                (found, entry.joint_probability, entry.post_selection_probability)
            )
        return tuple(branches)

    def enumerate(self) -> dict[GameRecord, Fraction]:
        records: dict[GameRecord, Fraction] = {}
        for found, joint, accept in self._branches:
            joint_f = _as_fraction(joint)
            accept_f = _as_fraction(accept)
            for post, probability in ((True, joint_f * accept_f), (False, joint_f * (1 - accept_f))):
                record = GameRecord(found, post)
                records[record] = records.get(record, Fraction(0)) + probability
        if sum(records.values()) != 1:
            raise ValueError(f"branch probabilities of {self.name} do not sum to 1")
        return records

    def sample(self, rng: UniformSource) -> GameRecord:
        if self.projector is None:
            ((found, _, accept),) = self._branches
            return GameRecord(found, rng.random() < accept)
        u = rng.random()
        cumulative = 0.0
        for found, joint, accept in self._branches:
            cumulative += joint
            if u < cumulative:
                return GameRecord(found, rng.random() < accept)
        found, _, accept = self._branches[-1]
        return GameRecord(found, rng.random() < accept)

    def sample_physical(self, rng: UniformSource) -> GameRecord:
        """Same round via explicit per-measurement collapse; used to
        cross-check the threshold sampling above."""
        result = pre_post_round(self.tsv, self.projector, rng)
        return GameRecord(result.bob_found, result.post_selected)


def quantum_game(scenario: Scenario, measure: str | None) -> QuantumGame:
    """Wrap a built scenario, measuring the named projector (None: skip)."""
    built = build(scenario)
    if measure is None:
        projector = None
    elif measure in built.projectors:
        projector = built.projectors[measure]
    else:
        raise ValueError(
            f"{scenario.value} has no measurement {measure!r}; "
            f"choose from {sorted(built.projectors)}"
        )
    return QuantumGame(scenario.value, built.tsv, projector)


def kirkpatrick_game(search: str | None) -> ClassicalGame:
    return ClassicalGame("kirkpatrick", lambda src: run_kirkpatrick(search, src))


def simplified_game(
    search: str | None, variant: SimplifiedVariant = SimplifiedVariant.FAITHFUL
) -> ClassicalGame:
    return ClassicalGame("simplified", lambda src: run_simplified(search, src, variant))


def leifer_spekkens_game(search: str | None) -> ClassicalGame:
    return ClassicalGame("leifer-spekkens", lambda src: run_leifer_spekkens(search, src))


def move_game(observe: int | None) -> ClassicalGame:
    return ClassicalGame("move-game", lambda src: run_move_game(observe, src))


_KEY_ORDER = (
    "found_and_post",
    "found_and_discarded",
    "not_found_and_post",
    "not_found_and_discarded",
    "no_measurement_and_post",
    "no_measurement_and_discarded",
)


def record_key(record: GameRecord) -> str:
    middle = {True: "found", False: "not_found", None: "no_measurement"}[record.intermediate]
    return f"{middle}_and_{'post' if record.post_success else 'discarded'}"


def _sorted_records(records: Iterable[GameRecord]) -> list[GameRecord]:
    return sorted(records, key=lambda r: _KEY_ORDER.index(record_key(r)))


def enumerate_exact(game: GameModel) -> dict[str, Fraction]:
    """Exhaustive event probabilities: one entry per outcome class plus
    the derived marginal ``post``, ``found``, and conditional
    ``found_given_post``."""
    distribution = game.enumerate()
    events: dict[str, Fraction] = {}
    for record in _sorted_records(distribution):
        events[record_key(record)] = distribution[record]
    p_post = sum(
        (p for r, p in distribution.items() if r.post_success), Fraction(0)
    )
    events["post"] = p_post
    measured = any(r.intermediate is not None for r in distribution)
    if measured:
        events["found"] = sum(
            (p for r, p in distribution.items() if r.intermediate), Fraction(0)
        )
        if p_post > 0:
            found_and_post = distribution.get(GameRecord(True, True), Fraction(0))
            events["found_given_post"] = found_and_post / p_post
    return events


def wilson_interval(
    successes: int, trials: int, z: float = _Z95
) -> tuple[float, float]:
    """Wilson score interval; well behaved at frequencies of 0 and 1."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} out of range for {trials} trials")
    phat = successes / trials
    z2 = z * z
    center = (phat + z2 / (2 * trials)) / (1 + z2 / trials)
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
        / (1 + z2 / trials)
    )
    # At the extremes the exact bound is 0 (resp. 1); the float center-half
    # difference can miss by an ulp and exclude the observed frequency.
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return (low, high)


@dataclass(frozen=True)
class RunStatistics:
    """Counts, frequencies, exact references, and 95% intervals for one
    seeded Monte Carlo execution."""

    runs: int
    seed: int
    counts: dict[str, int]
    frequencies: dict[str, float]
    exact: dict[str, Fraction]
    ci95: dict[str, tuple[float, float]]


def substream_table(seed: int, runs: int) -> np.ndarray:
    """Per-run uniform variates: row ``i`` of a counter-mode Philox stream
    keyed by ``seed``, so it depends only on ``(seed, i)``."""
    generator = np.random.Generator(np.random.Philox(key=seed))
    return generator.random((runs, VARIATES_PER_RUN))


def _tally(game: GameModel, table: np.ndarray, start: int, stop: int) -> Counter:
    counts: Counter = Counter()
    for i in range(start, stop):
        counts[game.sample(SequenceSource(table[i]))] += 1
    return counts


def monte_carlo(game: GameModel, runs: int, seed: int, workers: int = 1) -> RunStatistics:
    """Run ``runs`` independent rounds with per-run variate substreams.

    Rejected (non-post-selected) rounds are counted toward the marginals
    but excluded from the ``found_given_post`` conditional. ``workers``
    only fans the fixed substream table out over threads; the statistics
    are identical for any worker count.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    table = substream_table(seed, runs)
    if workers <= 1:
        counts = _tally(game, table, 0, runs)
    else:
        edges = [runs * k // workers for k in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda span: _tally(game, table, span[0], span[1]),
                zip(edges[:-1], edges[1:]),
            )
            counts = functools.reduce(lambda a, b: a + b, parts, Counter())
    return _statistics(game, runs, seed, counts)


def _statistics(game: GameModel, runs: int, seed: int, counts: Counter) -> RunStatistics:
    exact_records = game.enumerate()
    all_records = _sorted_records(set(exact_records) | set(counts))
    count_map = {record_key(r): counts.get(r, 0) for r in all_records}

    frequencies: dict[str, float] = {}
    ci95: dict[str, tuple[float, float]] = {}
    for record in all_records:
        key = record_key(record)
        frequencies[key] = count_map[key] / runs
        ci95[key] = wilson_interval(count_map[key], runs)

    post_count = sum(counts[r] for r in counts if r.post_success)
    frequencies["post"] = post_count / runs
    ci95["post"] = wilson_interval(post_count, runs)

    measured = any(r.intermediate is not None for r in all_records)
    if measured:
        found_count = sum(counts[r] for r in counts if r.intermediate)
        frequencies["found"] = found_count / runs
        ci95["found"] = wilson_interval(found_count, runs)
        if post_count > 0:
            found_and_post = counts.get(GameRecord(True, True), 0)
            frequencies["found_given_post"] = found_and_post / post_count
            ci95["found_given_post"] = wilson_interval(found_and_post, post_count)

    return RunStatistics(
        runs=runs,
        seed=seed,
        counts=count_map,
        frequencies=frequencies,
        exact=enumerate_exact(game),
        ci95=ci95,
    )


@dataclass(frozen=True)
class DiscriminatorRow:
    """One system's post-selection rates with and without the intermediate
    measurement, plus the conditional certainty value."""

    system: str
    quantum: bool
    post_no_measurement: Fraction
    post_with_measurement: Fraction
    found_given_post: Fraction


def _discriminator_systems() -> list[tuple[str, bool, GameModel, GameModel]]:
    return [
        (
            "three-box",
            True,
            quantum_game(Scenario.THREE_BOX, "A"),
            quantum_game(Scenario.THREE_BOX, None),
        ),
        ("kirkpatrick", False, kirkpatrick_game("S"), kirkpatrick_game(None)),
        ("simplified", False, simplified_game("S"), simplified_game(None)),
        ("leifer-spekkens", False, leifer_spekkens_game("left"), leifer_spekkens_game(None)),
        ("move-game", False, move_game(1), move_game(None)),
    ]


def discriminator_table() -> tuple[DiscriminatorRow, ...]:
    """Post-selection with vs without the intermediate measurement for the
    quantum system and all four classical games.

    The nonzero no-measurement rate of the quantum row against the zero
    rates of the six-card and ball-and-box games is the operational
    separation between observation and disturbance-encoded games.
    """
    rows = []
    for system, quantum, measured, unmeasured in _discriminator_systems():
        with_measurement = enumerate_exact(measured)
        without_measurement = enumerate_exact(unmeasured)
        rows.append(
            DiscriminatorRow(
                system=system,
                quantum=quantum,
                post_no_measurement=without_measurement["post"],
                post_with_measurement=with_measurement["post"],
                found_given_post=with_measurement["found_given_post"],
            )
        )
    return tuple(rows)
