"""Pre/post-selection toolkit: the three-box experiment, its claimed
classical analogues, and the statistics that tell them apart."""

from .hilbert import (
    ATOL,
    BasisMismatchError,
    CoStateVector,
    MeasureResult,
    NullStateError,
    ProjectionResult,
    Projector,
    StateVector,
    inner,
    make_costate,
    make_state,
    measure,
    project,
)
from .twostate import (
    BranchDistribution,
    BranchOutcome,
    PostSelectionImpossibleError,
    TwoStateVector,
    UndefinedWeakValueError,
    abl_found_probability,
    enumerate_sequence,
    meter_mean,
    weak_value,
)
from .scenarios import BobStrategy, BuiltScenario, RoundResult, Scenario, alice_bob_round, build, pre_post_round
from .games import (
    Card,
    DeckState,
    FULL_DECK,
    GameRecord,
    ProtocolError,
    SimplifiedVariant,
    k_observe,
    k_partial_observe,
    k_prepare,
    run_kirkpatrick,
    run_leifer_spekkens,
    run_move_game,
    run_simplified,
)
from .sampling import RandomChoiceSource, SequenceSource, enumerate_paths, enumerate_plays, path_variates
from .harness import (
    ClassicalGame,
    DiscriminatorRow,
    QuantumGame,
    RunStatistics,
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

__all__ = [
    "ATOL",
    "BasisMismatchError",
    "BobStrategy",
    "BranchDistribution",
    "BranchOutcome",
    "BuiltScenario",
    "Card",
    "ClassicalGame",
    "CoStateVector",
    "DeckState",
    "DiscriminatorRow",
    "FULL_DECK",
    "GameRecord",
    "MeasureResult",
    "NullStateError",
    "PostSelectionImpossibleError",
    "ProjectionResult",
    "Projector",
    "ProtocolError",
    "QuantumGame",
    "RandomChoiceSource",
    "RoundResult",
    "RunStatistics",
    "Scenario",
    "SequenceSource",
    "SimplifiedVariant",
    "StateVector",
    "TwoStateVector",
    "UndefinedWeakValueError",
    "abl_found_probability",
    "alice_bob_round",
    "build",
    "discriminator_table",
    "enumerate_exact",
    "enumerate_paths",
    "enumerate_plays",
    "enumerate_sequence",
    "inner",
    "k_observe",
    "k_partial_observe",
    "k_prepare",
    "kirkpatrick_game",
    "leifer_spekkens_game",
    "make_costate",
    "make_state",
    "measure",
    "meter_mean",
    "monte_carlo",
    "move_game",
    "path_variates",
    "pre_post_round",
    "project",
    "quantum_game",
    "record_key",
    "run_kirkpatrick",
    "run_leifer_spekkens",
    "run_move_game",
    "run_simplified",
    "simplified_game",
    "substream_table",
    "weak_value",
    "wilson_interval",
]

__version__ = "0.1.0"
