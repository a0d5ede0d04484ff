"""Analysis of systems described by both an initial and a final state.

A system prepared in a ket and later accepted by a bra measurement is, in
between, characterized by the pair of them. This module walks the full
branch tree of any sequence of intermediate yes/no measurements, computes
the conditional probability of an intermediate outcome given acceptance in
closed form, and evaluates weak values together with a Gaussian-meter
readout model for the weak-coupling regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .hilbert import ATOL, CoStateVector, Projector, StateVector, inner, project


class PostSelectionImpossibleError(ValueError):
    """The final acceptance has probability zero on every branch."""


class UndefinedWeakValueError(ValueError):
    """Weak values are undefined when the pre/post overlap vanishes."""


@dataclass(frozen=True)
class TwoStateVector:
    """A pre-selected ket paired with a post-selected bra over one basis."""

    pre: StateVector
    post: CoStateVector

    def __post_init__(self) -> None:
        if self.pre.basis != self.post.basis:
            raise ValueError(
                f"pre basis {self.pre.basis!r} != post basis {self.post.basis!r}"
            )
        for name, vec in (("pre", self.pre), ("post", self.post)):
            if abs(vec.norm_squared() - 1.0) > ATOL:
                raise ValueError(f"{name} state is not normalized")

    def overlap(self) -> complex:
        return inner(self.post, self.pre)


@dataclass(frozen=True)
class BranchOutcome:
    """One leaf of the measurement tree.

    ``outcomes`` lists found/not-found per measurement in order;
    ``joint_probability`` is the Born weight of reaching the leaf and
    ``post_selection_probability`` the acceptance probability there.
    """

    outcomes: tuple[bool, ...]
    joint_probability: float
    post_selection_probability: float


@dataclass(frozen=True)
class BranchDistribution:
    entries: tuple[BranchOutcome, ...]

    @property
    def p_post(self) -> float:
        """Unconditional probability that the final acceptance succeeds."""
        return sum(e.joint_probability * e.post_selection_probability for e in self.entries)

    def conditional(self, outcomes: Sequence[bool]) -> float:
        """P(outcome sequence | acceptance)."""
        key = tuple(outcomes)
        table = self.conditional_table()
        if key not in table:
            raise KeyError(f"no branch with outcomes {key}")
        return table[key]

    def conditional_table(self) -> dict[tuple[bool, ...], float]:
        total = self.p_post
        if total == 0.0:
            raise PostSelectionImpossibleError("post-selection has probability zero")
        return {
            e.outcomes: e.joint_probability * e.post_selection_probability / total
            for e in self.entries
        }


def enumerate_sequence(
    tsv: TwoStateVector, measurements: Sequence[Projector]
) -> BranchDistribution:
    """Walk every found/not-found branch of an ordered measurement list.

    Each measurement splits the current state with Born weights; leaves
    carry the acceptance probability of their collapsed state. Branches
    that died (probability zero) are kept in the tree with weight zero, so
    the entry list always has one entry per outcome sequence.
    """
    entries: list[BranchOutcome] = []

    def walk(state: StateVector | None, idx: int, outcomes: tuple[bool, ...], weight: float) -> None:
        if idx == len(measurements):
            if state is None or weight == 0.0:
                entries.append(BranchOutcome(outcomes, 0.0, 0.0))
            else:
                accept = abs(inner(tsv.post, state)) ** 2
                entries.append(BranchOutcome(outcomes, weight, accept))
            return
        p = measurements[idx]
        if state is None:
            walk(None, idx + 1, outcomes + (True,), 0.0)
            walk(None, idx + 1, outcomes + (False,), 0.0)
            return
        found = project(state, p)
        walk(found.collapsed, idx + 1, outcomes + (True,), weight * found.probability)
        missed = project(state, p.complement())
        walk(missed.collapsed, idx + 1, outcomes + (False,), weight * missed.probability)

    walk(tsv.pre, 0, (), 1.0)
    return BranchDistribution(tuple(entries))


def abl_found_probability(tsv: TwoStateVector, p: Projector) -> float:
    """P(found | acceptance) for a single intermediate measurement, in
    closed form: |<post|P|pre>|^2 / (|<post|P|pre>|^2 + |<post|(1-P)|pre>|^2).

    Computed from unnormalized projections rather than by walking the
    branch tree, so it serves as an independent cross-check of
    :func:`enumerate_sequence`.
    """
    found_amp = abs(inner(tsv.post, p.apply(tsv.pre))) ** 2
    missed_amp = abs(inner(tsv.post, p.complement().apply(tsv.pre))) ** 2
    denominator = found_amp + missed_amp
    if denominator == 0.0:
        raise PostSelectionImpossibleError(
            "post-selection impossible: both branches are orthogonal to the final state"
        )
    return found_amp / denominator


def weak_value(tsv: TwoStateVector, p: Projector) -> complex:
    """<post|P|pre> / <post|pre>. May lie outside [0, 1] for a projector."""
    overlap = tsv.overlap()
    if abs(overlap) == 0.0:
        raise UndefinedWeakValueError("undefined weak value: pre/post overlap is zero")
    return inner(tsv.post, p.apply(tsv.pre)) / overlap


def meter_mean(tsv: TwoStateVector, p: Projector, g: float, sigma: float) -> float:
    """Mean pointer position of a Gaussian meter coupled to a projector.

    The meter starts as a Gaussian of position variance ``sigma**2`` and is
    shifted by ``g`` on the projector's +1 eigenspace. After accepting the
    system's final state, the meter wavefunction is a*G(x) + b*G(x-g) with
    a = <post|(1-P)|pre> and b = <post|P|pre>, whose mean position has the
    closed form below via the Gaussian overlap exp(-g^2 / (8 sigma^2)).
    As g/sigma -> 0 the mean tends to g * Re(weak_value).
    """
    if g <= 0.0:
        raise ValueError(f"coupling must be positive, got {g}")
    if sigma <= 0.0:
        raise ValueError(f"meter width must be positive, got {sigma}")
    b = inner(tsv.post, p.apply(tsv.pre))
    a = inner(tsv.post, p.complement().apply(tsv.pre))
    overlap = math.exp(-g * g / (8.0 * sigma * sigma))
    cross = (a.conjugate() * b).real
    denominator = abs(a) ** 2 + abs(b) ** 2 + 2.0 * cross * overlap
    if denominator <= 0.0:
        raise PostSelectionImpossibleError("meter post-selection impossible")
    return (abs(b) ** 2 * g + cross * g * overlap) / denominator
