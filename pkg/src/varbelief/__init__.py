"""Belief updating on finite state spaces: Bayes, exponential (alpha, beta) rules,
and the variational problems whose minimizers they are."""

__version__ = "0.1.0"

from .beliefs import (
    BAYES,
    Distribution,
    Experiment,
    ExponentParams,
    PreferenceParams,
    StateSpace,
    bayes_update,
    entropy,
    expectation,
    exponential_update,
    exponents_to_preferences,
    gibbs_from_potential,
    preferences_to_exponents,
    relative_entropy,
    support,
    total_variation,
)
from .errors import (
    BeliefError,
    DegenerateRegimeError,
    InconsistentScenarioError,
    ScenarioValidationError,
    SpaceMismatchError,
    UnidentifiedParametersError,
)
from .estimation import (
    FitResult,
    SignalSequence,
    UpdateObservation,
    grether_fit,
    order_dependence,
    sequential_update,
    simulate_dataset,
)
from .solver import (
    ConcaveSolution,
    ObjectiveSpec,
    SolverConfig,
    SolverReport,
    crosscheck,
    objective_batch,
    objective_value,
    solve_concave,
    solve_convex,
    variational_update,
)
