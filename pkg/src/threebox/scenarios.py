"""Canned pre/post-selected systems and the Alice-Bob box game.

Two systems are provided: a particle across boxes A/B/C, and a spinning
particle across two boxes where both the spin-up and the spin-down search
in box A succeed with certainty once the final selection is applied.
"""

from __future__ import annotations

import enum
import functools
from typing import NamedTuple, Protocol

from .hilbert import Projector, inner, make_costate, make_state, measure
from .twostate import TwoStateVector


class Scenario(enum.Enum):
    THREE_BOX = "three-box"
    SPIN_BOX = "spin-box"


class BobStrategy(enum.Enum):
    OPEN_A = "A"
    OPEN_B = "B"
    SKIP = "skip"


class UniformSource(Protocol):
    def random(self) -> float: ...


class BuiltScenario(NamedTuple):
    tsv: TwoStateVector
    projectors: dict[str, Projector]


class RoundResult(NamedTuple):
    bob_found: bool | None
    post_selected: bool


@functools.lru_cache(maxsize=None)
def build(scenario: Scenario) -> BuiltScenario:
    """Construct a scenario's two-state pair and its named projectors.

    Results are cached; treat the projector map as read-only.
    """
    if scenario is Scenario.THREE_BOX:
        basis = ("A", "B", "C")
        pre = make_state(basis, (1, 1, 1))
        post = make_costate(basis, (1, 1, -1))
        projectors = {label: Projector(basis, frozenset({label})) for label in basis}
    elif scenario is Scenario.SPIN_BOX:
        basis = ("A↑", "A↓", "B↑", "B↓")
        pre = make_state(basis, (1, 1, 1, 0))
        post = make_costate(basis, (1, 1, -1, 0))
        projectors = {
            "up": Projector(basis, frozenset({"A↑"})),
            "down": Projector(basis, frozenset({"A↓"})),
        }
    else:
        raise ValueError(f"unknown scenario {scenario!r}")
    return BuiltScenario(TwoStateVector(pre, post), projectors)


def pre_post_round(
    tsv: TwoStateVector, projector: Projector | None, rng: UniformSource
) -> RoundResult:
    """One full round: prepare, optionally measure, then accept-or-discard.

    Acceptance is rejection sampling with probability |<post|state>|^2 on
    whatever state the round ended in; nothing but that collapsed state
    carries information into the acceptance step.
    """
    state = tsv.pre
    found: bool | None = None
    if projector is not None:
        found, state = measure(state, projector, rng.random())
    accept = abs(inner(tsv.post, state)) ** 2
    return RoundResult(found, rng.random() < accept)


def alice_bob_round(strategy: BobStrategy, rng: UniformSource) -> RoundResult:
    """One round of the box game: Bob opens box A or B (or skips), then
    Alice decides whether the round counts. Bob wins a counted round only
    if he did not find the particle."""
    built = build(Scenario.THREE_BOX)
    projector = None if strategy is BobStrategy.SKIP else built.projectors[strategy.value]
    return pre_post_round(built.tsv, projector, rng)
