"""Branch-point abstraction for the classical games.

A game is written once as a plain function of a choice source. Feed it a
:class:`RandomChoiceSource` and it samples; feed it scripted paths via
:func:`enumerate_paths` and the same code yields the exact distribution
as rationals. Sampling resolves every branch with the same threshold
convention as the quantum side: option k is taken iff the variate falls
below the k-th cumulative weight.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple, Protocol, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class UniformSource(Protocol):
    def random(self) -> float: ...


class ChoiceSource(Protocol):
    def choose(self, options: Sequence[T], weights: Sequence[Fraction] | None = None) -> T: ...


def _normalized_weights(n: int, weights: Sequence[Fraction] | None) -> tuple[Fraction, ...]:
    if weights is None:
        return (Fraction(1, n),) * n
    weights = tuple(Fraction(w) for w in weights)
    if len(weights) != n:
        raise ValueError(f"{len(weights)} weights for {n} options")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {weights}")
    return weights


def _thresholds(weights: Sequence[Fraction]) -> list[float]:
    cum = Fraction(0)
    out = []
    for w in weights:
        cum += w
        out.append(float(cum))
    return out


class SequenceSource:
    """Uniform source replaying a fixed variate list (one run's substream)."""

    def __init__(self, values: Sequence[float]):
        self._values = values
        self._pos = 0

    def random(self) -> float:
        if self._pos >= len(self._values):
            raise RuntimeError("randomness substream exhausted")
        value = self._values[self._pos]
        self._pos += 1
        return float(value)


class RandomChoiceSource:
    """Resolves branch points by drawing one uniform variate per choice."""

    def __init__(self, rng: UniformSource):
        self._rng = rng

    def choose(self, options: Sequence[T], weights: Sequence[Fraction] | None = None) -> T:
        if weights is None:
            # float(Fraction(k, n)) == k / n exactly, so this fast path picks
            # the same option the Fraction thresholds below would.
            u = self._rng.random()
            n = len(options)
            for k in range(1, n):
                if u < k / n:
                    return options[k - 1]
            return options[-1]
        norm = _normalized_weights(len(options), weights)
        u = self._rng.random()
        for option, threshold in zip(options, _thresholds(norm)):
            if u < threshold:
                return option
        return options[-1]  # u inside float rounding of the final threshold


class _Frontier(Exception):
    """Signal that a scripted replay reached an unexplored branch point."""

    def __init__(self, weights: tuple[Fraction, ...]):
        super().__init__("unexplored branch point")
        self.weights = weights


class _ScriptedSource:
    """Follows a fixed path of option indices, recording weights on the way."""

    def __init__(self, path: Sequence[int]):
        self._path = tuple(path)
        self._pos = 0
        self.trace: list[tuple[int, tuple[Fraction, ...]]] = []

    def choose(self, options: Sequence[T], weights: Sequence[Fraction] | None = None) -> T:
        norm = _normalized_weights(len(options), weights)
        if self._pos == len(self._path):
            raise _Frontier(norm)
        index = self._path[self._pos]
        self._pos += 1
        self.trace.append((index, norm))
        return options[index]


class PlayPath(NamedTuple):
    path: tuple[int, ...]
    probability: Fraction
    result: object


def enumerate_paths(play: Callable[[ChoiceSource], R]) -> list[PlayPath]:
    """Re-run ``play`` with every possible branch-point resolution.

    Zero-weight branches are pruned; the returned probabilities sum to 1
    exactly. Depth-first in option order, so the output is deterministic.
    """
    leaves: list[PlayPath] = []
    stack: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    while stack:
        path, probability = stack.pop()
        source = _ScriptedSource(path)
        try:
            result = play(source)
        except _Frontier as frontier:
            for index in range(len(frontier.weights) - 1, -1, -1):
                weight = frontier.weights[index]
                if weight:
                    stack.append((path + (index,), probability * weight))
            continue
        leaves.append(PlayPath(path, probability, result))
    return leaves


def enumerate_plays(play: Callable[[ChoiceSource], R]) -> dict[R, Fraction]:
    """Exact probability of each distinct result of ``play``."""
    distribution: dict[R, Fraction] = {}
    for leaf in enumerate_paths(play):
        distribution[leaf.result] = distribution.get(leaf.result, Fraction(0)) + leaf.probability
    return distribution


def path_variates(play: Callable[[ChoiceSource], R], path: Sequence[int]) -> list[float]:
    """Variates that steer :class:`RandomChoiceSource` down a given path.

    Each variate is the midpoint of the chosen option's cumulative-weight
    interval, so replaying them through the sampling path must reproduce
    the enumerated branch exactly.
    """
    source = _ScriptedSource(path)
    try:
        play(source)
    except _Frontier:
        raise ValueError(f"path {tuple(path)} does not reach a leaf") from None
    variates = []
    for index, weights in source.trace:
        before = sum(weights[:index], Fraction(0))
        variates.append(float((2 * before + weights[index]) / 2))
    return variates
