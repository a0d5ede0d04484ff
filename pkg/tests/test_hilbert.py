"""Unit and property tests for the labeled state space."""

from __future__ import annotations

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from threebox.hilbert import (
    BasisMismatchError,
    NullStateError,
    Projector,
    inner,
    make_costate,
    make_state,
    measure,
    project,
)

BOXES = ("A", "B", "C")


@pytest.fixture
def pre():
    return make_state(BOXES, (1, 1, 1))


@pytest.fixture
def post():
    return make_costate(BOXES, (1, 1, -1))


def box_projector(*labels: str) -> Projector:
    return Projector(BOXES, frozenset(labels))


# ---------------------------------------------------------------------------
# construction


def test_make_state_normalizes_uniform_amplitudes(pre):
    expected = 1 / math.sqrt(3)
    assert pre.amplitudes == pytest.approx((expected,) * 3, abs=1e-15)
    assert pre.norm_squared() == pytest.approx(1.0, abs=1e-12)


def test_make_state_keeps_basis_state_unchanged():
    state = make_state(BOXES, (1, 0, 0))
    assert state.amplitudes == (1.0 + 0j, 0j, 0j)


def test_make_state_rejects_zero_vector():
    with pytest.raises(NullStateError):
        make_state(BOXES, (0, 0, 0))


def test_make_state_rejects_length_mismatch():
    with pytest.raises(ValueError):
        make_state(BOXES, (1, 1))


def test_duplicate_basis_labels_rejected():
    with pytest.raises(ValueError):
        make_state(("A", "A", "B"), (1, 1, 1))


def test_projector_rejects_stray_labels():
    with pytest.raises(ValueError):
        Projector(BOXES, frozenset({"D"}))


# ---------------------------------------------------------------------------
# inner products


def test_overlap_is_one_third(pre, post):
    # Independent symbolic oracle for the same arithmetic.
    sympy = pytest.importorskip("sympy")
    amp = sympy.Rational(1, 3) * (1 + 1 - 1)
    assert amp == sympy.Rational(1, 3)
    assert inner(post, pre) == pytest.approx(1 / 3, abs=1e-12)


def test_not_found_state_is_orthogonal_to_post(post):
    leftover = make_state(BOXES, (0, 1, 1))
    assert inner(post, leftover) == pytest.approx(0.0, abs=1e-12)


def test_identity_overlap():
    ket = make_state(BOXES, (1, 0, 0))
    bra = make_costate(BOXES, (1, 0, 0))
    assert inner(bra, ket) == 1.0


def test_inner_conjugates_the_bra():
    ket = make_state(("X",), (1j,))
    bra = make_costate(("X",), (1j,))
    assert inner(bra, ket) == pytest.approx(1.0, abs=1e-15)


def test_inner_rejects_basis_mismatch(pre):
    other = make_costate(("A", "B", "D"), (1, 1, 1))
    with pytest.raises(BasisMismatchError):
        inner(other, pre)


# ---------------------------------------------------------------------------
# projection


def test_project_box_a(pre):
    probability, collapsed = project(pre, box_projector("A"))
    # brute-force amplitude sum over the subset
    assert probability == pytest.approx(abs(pre.amplitude("A")) ** 2, abs=1e-15)
    assert probability == pytest.approx(1 / 3, abs=1e-12)
    assert collapsed.amplitudes == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)


def test_project_complement_of_box_a(pre):
    probability, collapsed = project(pre, box_projector("A").complement())
    assert probability == pytest.approx(2 / 3, abs=1e-12)
    root_half = 1 / math.sqrt(2)
    assert collapsed.amplitudes == pytest.approx((0.0, root_half, root_half), abs=1e-12)


def test_project_eigenstate_is_certain():
    ket = make_state(BOXES, (1, 0, 0))
    probability, collapsed = project(ket, box_projector("A"))
    assert probability == 1.0
    assert collapsed is ket


def test_project_zero_probability_gives_absent():
    ket = make_state(BOXES, (1, 0, 0))
    probability, collapsed = project(ket, box_projector("B", "C"))
    assert probability == 0.0
    assert collapsed is None


def test_project_rejects_foreign_projector(pre):
    foreign = Projector(("A", "B", "D"), frozenset({"A"}))
    with pytest.raises(BasisMismatchError):
        project(pre, foreign)


# ---------------------------------------------------------------------------
# measurement


def test_measure_found_below_threshold(pre):
    found, collapsed = measure(pre, box_projector("A"), 0.2)
    assert found is True
    assert collapsed.amplitudes == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)


def test_measure_not_found_above_threshold(pre):
    found, collapsed = measure(pre, box_projector("A"), 0.9)
    assert found is False
    root_half = 1 / math.sqrt(2)
    assert collapsed.amplitudes == pytest.approx((0.0, root_half, root_half), abs=1e-12)


@pytest.mark.parametrize("variate", [0.0, 0.5, 0.999999])
def test_measure_probability_one_branch(variate):
    ket = make_state(BOXES, (1, 0, 0))
    found, collapsed = measure(ket, box_projector("A"), variate)
    assert found is True
    assert collapsed is ket


def test_measure_rejects_variate_outside_unit_interval(pre):
    with pytest.raises(ValueError):
        measure(pre, box_projector("A"), 1.0)
    with pytest.raises(ValueError):
        measure(pre, box_projector("A"), -0.1)


# ---------------------------------------------------------------------------
# properties

finite_complex = st.complex_numbers(
    allow_nan=False, allow_infinity=False, max_magnitude=10
)
amplitude_tuples = st.tuples(finite_complex, finite_complex, finite_complex)
subsets = st.sets(st.sampled_from(BOXES))


@given(amps=amplitude_tuples, labels=subsets)
def test_projector_and_complement_probabilities_sum_to_one(amps, labels):
    assume(sum(abs(a) ** 2 for a in amps) > 1e-6)
    state = make_state(BOXES, amps)
    p = Projector(BOXES, frozenset(labels))
    total = project(state, p).probability + project(state, p.complement()).probability
    assert total == pytest.approx(1.0, abs=1e-12)


@given(amps=amplitude_tuples, labels=subsets, variate=st.floats(0, 0.999999))
def test_collapse_is_idempotent(amps, labels, variate):
    assume(sum(abs(a) ** 2 for a in amps) > 1e-6)
    state = make_state(BOXES, amps)
    p = Projector(BOXES, frozenset(labels))
    first = measure(state, p, variate)
    second = measure(first.collapsed, p, variate)
    assert second.found == first.found
    assert second.collapsed is first.collapsed


@given(amps=amplitude_tuples, labels=subsets)
@settings(max_examples=40)
def test_variate_sweep_reproduces_born_probability(amps, labels):
    """Driving measure() over a fine grid of variates recovers project()'s
    probability as a frequency, within the grid resolution."""
    assume(sum(abs(a) ** 2 for a in amps) > 1e-6)
    state = make_state(BOXES, amps)
    p = Projector(BOXES, frozenset(labels))
    probability = project(state, p).probability
    grid = 2048
    hits = sum(
        1 for k in range(grid) if measure(state, p, (k + 0.5) / grid).found
    )
    assert hits / grid == pytest.approx(probability, abs=1.0 / grid)


def test_orthogonality_certificates_for_boxes_a_and_b(pre, post):
    for label in ("A", "B"):
        missed = project(pre, box_projector(label).complement()).collapsed
        assert abs(inner(post, missed)) < 1e-12
