"""The classical look-and-disturb games, as immutable state machines.

Four games are implemented: the six-card These/Others protocol with a
memory register, its stripped three-card version (in two variants of the
negative branch), the ball-in-a-partitioned-box game, and the
move-to-the-third-box game. All branch weights are exact rationals; each
game is a plain function of a choice source, so the same definition both
samples and enumerates (see :mod:`threebox.sampling`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .sampling import ChoiceSource

FACES = ("J", "Q", "K")
SUITS = ("S", "D", "H")

#: Variable names for the memory register.
FACE = "face"
SUIT = "suit"


class ProtocolError(RuntimeError):
    """A game step was attempted from a state that cannot support it."""


@dataclass(frozen=True, order=True)
class Card:
    face: str
    suit: str
    #: Distinguishes otherwise identical cards (the deck holds two KH).
    index: int

    def __post_init__(self) -> None:
        if self.face not in FACES or self.suit not in SUITS:
            raise ValueError(f"unknown card {self.face}{self.suit}")

    def value(self, variable: str) -> str:
        return self.face if variable == FACE else self.suit

    def __str__(self) -> str:
        return f"{self.face}{self.suit}"


#: The fixed six-card deck: each face and each suit appears twice.
FULL_DECK: tuple[Card, ...] = (
    Card("J", "S", 0),
    Card("J", "D", 1),
    Card("Q", "S", 2),
    Card("Q", "D", 3),
    Card("K", "H", 4),
    Card("K", "H", 5),
)

#: The stripped deck of the simplified game.
SMALL_DECK: tuple[Card, ...] = (Card("J", "S", 0), Card("J", "D", 1), Card("K", "H", 2))


def _check_variable(variable: str) -> None:
    if variable not in (FACE, SUIT):
        raise ValueError(f"unknown variable {variable!r}, expected {FACE!r} or {SUIT!r}")


@dataclass(frozen=True)
class DeckState:
    """The six-card deck split into These/Others plus the memory register.

    Construction re-verifies that the two piles partition the fixed deck,
    so deck conservation is checked after every step of every run.
    """

    these: tuple[Card, ...]
    others: tuple[Card, ...]
    memory: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "these", tuple(sorted(self.these)))
        object.__setattr__(self, "others", tuple(sorted(self.others)))
        _check_variable(self.memory)
        combined = sorted(self.these + self.others)
        if combined != sorted(FULL_DECK):
            raise ProtocolError("These and Others must partition the six-card deck")


def _split(predicate) -> tuple[tuple[Card, ...], tuple[Card, ...]]:
    matching = tuple(c for c in FULL_DECK if predicate(c))
    rest = tuple(c for c in FULL_DECK if not predicate(c))
    return matching, rest


def k_prepare(variable: str, value: str) -> DeckState:
    """Put every card with ``variable == value`` in These, the rest in
    Others, and point the memory at the variable."""
    _check_variable(variable)
    these, others = _split(lambda c: c.value(variable) == value)
    return DeckState(these, others, variable)


def _draw(pool: Sequence[Card], source: ChoiceSource) -> Card:
    if not pool:
        raise ProtocolError("cannot draw from an empty pile")
    return source.choose(pool)


def k_observe(state: DeckState, variable: str, source: ChoiceSource) -> tuple[str, DeckState]:
    """Report the variable's value from a uniform draw.

    A repeated observation (memory already on the variable) draws from
    These and leaves the state untouched; a new observation draws from
    Others and re-prepares the deck in the reported value.
    """
    _check_variable(variable)
    if state.memory == variable:
        card = _draw(state.these, source)
        return card.value(variable), state
    card = _draw(state.others, source)
    value = card.value(variable)
    return value, k_prepare(variable, value)


def k_partial_observe(
    state: DeckState, variable: str, value: str, source: ChoiceSource
) -> tuple[bool, DeckState]:
    """Check whether the variable has one particular value.

    Draws from These for a repeated observation, from Others otherwise.
    A new observation re-prepares the deck according to the outcome: on a
    match as :func:`k_prepare`, on a miss with every non-matching card in
    These and the matching ones in Others (the "not that value" state).
    """
    _check_variable(variable)
    repeated = state.memory == variable
    card = _draw(state.these if repeated else state.others, source)
    found = card.value(variable) == value
    if repeated:
        return found, state
    if found:
        return True, k_prepare(variable, value)
    anti_these, anti_others = _split(lambda c: c.value(variable) != value)
    return False, DeckState(anti_these, anti_others, variable)


@dataclass(frozen=True)
class GameRecord:
    """Outcome of one round: the intermediate result (None when no
    measurement was made) and whether the final selection succeeded."""

    intermediate: bool | None
    post_success: bool


def run_kirkpatrick(search: str | None, source: ChoiceSource) -> GameRecord:
    """One round of the six-card game.

    Prepare Face=Q, partially observe whether Suit equals ``search`` (S or
    D; None skips the observation), then observe Face; the round
    post-selects on the reported face being K.
    """
    if search not in ("S", "D", None):
        raise ValueError(f"search must be 'S' or 'D', got {search!r}")
    state = k_prepare(FACE, "Q")
    found: bool | None = None
    if search is not None:
        found, state = k_partial_observe(state, SUIT, search, source)
    face, _ = k_observe(state, FACE, source)
    return GameRecord(found, face == "K")


class SimplifiedVariant(enum.Enum):
    """How the simplified game's negative branch re-prepares the deck.

    FAITHFUL mirrors the six-card protocol (non-matching cards to These,
    the searched card to Others) and preserves the certainty property.
    LITERAL_TEXT returns the drawn card alone to Others and moves the rest
    to These, which breaks the certainty whenever the KH is drawn.
    """

    FAITHFUL = "faithful"
    LITERAL_TEXT = "literal"


def run_simplified(
    search: str | None,
    source: ChoiceSource,
    variant: SimplifiedVariant = SimplifiedVariant.FAITHFUL,
) -> GameRecord:
    """One round of the three-card game (JS, JD, KH, all starting in
    Others): draw, check the suit against ``search``, re-pile per the
    variant, then post-select on drawing the KH from Others."""
    if search not in ("S", "D", None):
        raise ValueError(f"search must be 'S' or 'D', got {search!r}")
    if search is None:
        final = _draw(SMALL_DECK, source)
        return GameRecord(None, final.face == "K")
    drawn = _draw(SMALL_DECK, source)
    found = drawn.suit == search
    if found:
        others = tuple(c for c in SMALL_DECK if c != drawn)
    elif variant is SimplifiedVariant.FAITHFUL:
        others = tuple(c for c in SMALL_DECK if c.suit == search)
    else:
        others = (drawn,)
    final = _draw(others, source)
    return GameRecord(found, final.face == "K")


DEPTHS = ("front", "back")
SIDES = ("left", "right")


@dataclass(frozen=True)
class BallBoxState:
    """A ball in a box partitioned front/back and left/right."""

    depth: str
    side: str

    def __post_init__(self) -> None:
        if self.depth not in DEPTHS or self.side not in SIDES:
            raise ValueError(f"invalid ball position ({self.depth}, {self.side})")


def run_leifer_spekkens(search: str | None, source: ChoiceSource) -> GameRecord:
    """One round of the ball-and-box game.

    The ball starts in the front half with a uniform side. Searching one
    side finds the ball iff it is there, and a find re-randomizes the
    front/back position; a miss leaves the ball untouched. Post-selection
    is the ball ending in the back half.
    """
    if search not in SIDES and search is not None:
        raise ValueError(f"search must be 'left' or 'right', got {search!r}")
    state = BallBoxState("front", source.choose(SIDES))
    found: bool | None = None
    if search is not None:
        found = state.side == search
        if found:
            state = BallBoxState(source.choose(DEPTHS), state.side)
    return GameRecord(found, state.depth == "back")


BOXES = (1, 2, 3)

#: Uniform default for where the ball starts in the move game.
UNIFORM_BOXES: tuple[Fraction, ...] = (Fraction(1, 3),) * 3


@dataclass(frozen=True)
class ThreeBoxBallState:
    """A classical ball sitting in one of three boxes."""

    location: int

    def __post_init__(self) -> None:
        if self.location not in BOXES:
            raise ValueError(f"location must be one of {BOXES}, got {self.location}")


def run_move_game(
    observe: int | None,
    source: ChoiceSource,
    initial: Sequence[Fraction] | None = None,
) -> GameRecord:
    """One round of the move-to-the-third-box game.

    The ball starts in a random box (uniform unless ``initial`` gives
    other weights). The observer looks in box 1 or 2; on a miss the ball
    is moved to box 3. Post-selection is the ball NOT ending in box 3.
    """
    if observe not in (1, 2, None):
        raise ValueError(f"observe must be 1 or 2, got {observe!r}")
    ball = ThreeBoxBallState(source.choose(BOXES, initial))
    found: bool | None = None
    if observe is not None:
        found = ball.location == observe
        if not found:
            ball = ThreeBoxBallState(3)
    return GameRecord(found, ball.location != 3)
