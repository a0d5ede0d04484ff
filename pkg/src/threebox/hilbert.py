"""Finite-dimensional complex state space over a labeled basis.

States are immutable tuples of double-precision amplitudes tied to an
ordered tuple of basis labels. Projectors select a subset of the labels.
Measurement follows the Born rule but consumes an externally supplied
uniform variate (found iff ``variate < probability``), so every outcome
is a pure function of its inputs and therefore replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

#: Tolerance for algebraic identities on double-precision amplitudes.
ATOL = 1e-12


class NullStateError(ValueError):
    """A zero amplitude vector cannot be normalized into a state."""


class BasisMismatchError(ValueError):
    """Two objects defined over different bases were combined."""


def _check_basis(basis: tuple[str, ...]) -> None:
    if len(set(basis)) != len(basis):
        raise ValueError(f"basis labels must be unique, got {basis!r}")


@dataclass(frozen=True)
class _LabeledVector:
    basis: tuple[str, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self) -> None:
        _check_basis(self.basis)
        if len(self.amplitudes) != len(self.basis):
            raise ValueError(
                f"{len(self.amplitudes)} amplitudes for {len(self.basis)} basis labels"
            )

    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes)

    def amplitude(self, label: str) -> complex:
        """Amplitude on one basis label."""
        return self.amplitudes[self.basis.index(label)]


class StateVector(_LabeledVector):
    """A ket: one complex amplitude per basis label."""


class CoStateVector(_LabeledVector):
    """A bra. Amplitudes are those of the ket whose dual this is; the
    conjugation happens inside :func:`inner`."""


def _normalized(basis: Sequence[str], amplitudes: Sequence[complex]) -> tuple[complex, ...]:
    amps = tuple(complex(a) for a in amplitudes)
    if len(amps) != len(basis):
        raise ValueError(f"{len(amps)} amplitudes for {len(basis)} basis labels")
    norm_sq = sum(abs(a) ** 2 for a in amps)
    if norm_sq == 0.0:
        raise NullStateError("null state: the zero vector cannot be normalized")
    scale = 1.0 / math.sqrt(norm_sq)
    return tuple(a * scale for a in amps)


def make_state(basis: Sequence[str], amplitudes: Sequence[complex]) -> StateVector:
    """Build a normalized ket from any nonzero amplitude sequence."""
    basis = tuple(basis)
    return StateVector(basis, _normalized(basis, amplitudes))


def make_costate(basis: Sequence[str], amplitudes: Sequence[complex]) -> CoStateVector:
    """Build a normalized bra from any nonzero amplitude sequence."""
    basis = tuple(basis)
    return CoStateVector(basis, _normalized(basis, amplitudes))


def inner(bra: CoStateVector, ket: StateVector) -> complex:
    """Pairing ``sum(conj(bra_i) * ket_i)`` over a shared basis."""
    if bra.basis != ket.basis:
        raise BasisMismatchError(f"bra basis {bra.basis!r} != ket basis {ket.basis!r}")
    return sum(b.conjugate() * k for b, k in zip(bra.amplitudes, ket.amplitudes))


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector onto the span of a subset of basis labels."""

    basis: tuple[str, ...]
    labels: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "labels", frozenset(self.labels))
        _check_basis(self.basis)
        stray = self.labels - set(self.basis)
        if stray:
            raise ValueError(f"projector labels {sorted(stray)} not in basis {self.basis!r}")

    def complement(self) -> Projector:
        return Projector(self.basis, frozenset(self.basis) - self.labels)

    def apply(self, state: StateVector) -> StateVector:
        """Zero out amplitudes off the subset. The result is NOT renormalized
        (its squared norm is the outcome probability)."""
        if state.basis != self.basis:
            raise BasisMismatchError(
                f"projector basis {self.basis!r} != state basis {state.basis!r}"
            )
        return StateVector(
            state.basis,
            tuple(a if lbl in self.labels else 0.0 for lbl, a in zip(state.basis, state.amplitudes)),
        )


class ProjectionResult(NamedTuple):
    probability: float
    collapsed: StateVector | None


class MeasureResult(NamedTuple):
    found: bool
    collapsed: StateVector


def project(state: StateVector, p: Projector) -> ProjectionResult:
    """Born probability of the subset outcome plus the collapsed state.

    ``collapsed`` is None when the probability is exactly zero (there is no
    state to renormalize onto).
    """
    restricted = p.apply(state)
    probability = restricted.norm_squared()
    if probability == 0.0:
        return ProjectionResult(0.0, None)
    if restricted.amplitudes == state.amplitudes:
        # The state already lives in the subspace: hand it back untouched so
        # repeated measurements are idempotent to the last bit.
        return ProjectionResult(probability, state)
    scale = 1.0 / math.sqrt(probability)
    collapsed = StateVector(state.basis, tuple(a * scale for a in restricted.amplitudes))
    return ProjectionResult(probability, collapsed)


def measure(state: StateVector, p: Projector, variate: float) -> MeasureResult:
    """One projective yes/no measurement driven by a uniform variate.

    ``found`` is True iff ``variate < project(state, p).probability``; the
    returned state is the corresponding collapse (of ``p`` or its
    complement). For a normalized input the selected branch always has
    nonzero probability, so a collapsed state always exists.
    """
    if not 0.0 <= variate < 1.0:
        raise ValueError(f"variate must lie in [0, 1), got {variate}")
    found_branch = project(state, p)
    if variate < found_branch.probability:
        assert found_branch.collapsed is not None
        return MeasureResult(True, found_branch.collapsed)
    other = project(state, p.complement())
    assert other.collapsed is not None
    return MeasureResult(False, other.collapsed)
