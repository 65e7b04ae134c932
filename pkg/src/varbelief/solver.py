"""Variational objectives over the simplex and a mirror-descent minimizer.

The objective is

    F(q) = D(q || p) - lam * E_q[log f(x|.)] + mu * H(q).

For ``mu < 1`` it is strictly convex on the feasible face and is minimized
numerically by exponentiated-gradient steps. For ``mu >= 1`` it is concave and
its minimum sits at a vertex, found by enumeration.

The iterative solver never consults the closed-form updating rules;
:func:`crosscheck` compares the two afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .beliefs import (
    Distribution,
    Experiment,
    PreferenceParams,
    _log,
    _same_space,
    entropy,
    exponential_update,
    preferences_to_exponents,
    relative_entropy,
)
from .errors import DegenerateRegimeError, InconsistentScenarioError

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ObjectiveSpec:
    prior: Distribution
    experiment: Experiment
    signal: str | int
    prefs: PreferenceParams = PreferenceParams(1.0, 0.0)

    def __post_init__(self):
        _same_space(self.prior.space, self.experiment.space)
        self.experiment.signal_index(self.signal)
        if not self.feasible.any():
            raise InconsistentScenarioError(
                f"no state has positive prior and positive likelihood for signal {self.signal!r}"
            )

    @property
    def likelihood(self) -> np.ndarray:
        return self.experiment.likelihood(self.signal)

    @property
    def feasible(self) -> np.ndarray:
        """Boolean mask of states where the objective can be finite."""
        return (self.prior.mass > 0) & (self.likelihood > 0)

    def log_score(self) -> np.ndarray:
        """log p(s) + lam * log f(x|s); ``-inf`` off the feasible set."""
        return _log(self.prior.mass) + self.prefs.lam * _log(self.likelihood)


@dataclass(frozen=True)
class SolverConfig:
    step_size: Optional[float] = None  # None -> 0.5 / max(1, |1 - mu|)
    max_iterations: int = 100_000
    convergence_tol: float = 1e-13

    def __post_init__(self):
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")

    def step_for(self, mu: float) -> float:
        if self.step_size is not None:
            return self.step_size
        return 0.5 / max(1.0, abs(1.0 - mu))


@dataclass
class SolverReport:
    iterations: int
    final_objective: float
    converged: bool
    sup_gap_to_closed_form: Optional[float] = None


@dataclass(frozen=True)
class ConcaveSolution:
    maximizers: tuple[int, ...]
    canonical: Distribution
    objective_value: float


def objective_value(q: Distribution, spec: ObjectiveSpec) -> float:
    _same_space(q.space, spec.prior.space)
    kl = relative_entropy(q, spec.prior)
    if math.isinf(kl):
        return math.inf
    on = q.mass > 0
    f = spec.likelihood[on]
    if np.any(f == 0):
        return math.inf
    fit = float(np.dot(q.mass[on], np.log(f)))
    return kl - spec.prefs.lam * fit + spec.prefs.mu * entropy(q)


def objective_batch(points: np.ndarray, spec: ObjectiveSpec) -> np.ndarray:
    """Objective at each row of ``points`` (shape ``(m, |S|)``); rows are not validated."""
    Q = np.atleast_2d(np.asarray(points, dtype=float))
    score = spec.log_score()
    on = Q > 0
    infeasible = np.any(on & ~spec.feasible, axis=1)
    safe = np.where(on, Q, 1.0)
    neg_ent = np.sum(np.where(on, Q * np.log(safe), 0.0), axis=1)
    fit = np.sum(np.where(on, Q * np.where(spec.feasible, score, 0.0), 0.0), axis=1)
    vals = (1.0 - spec.prefs.mu) * neg_ent - fit
    vals[infeasible] = math.inf
    return vals


def solve_convex(
    spec: ObjectiveSpec,
    config: SolverConfig = SolverConfig(),
    callback: Optional[Callable[[int, Distribution], None]] = None,
) -> tuple[Distribution, SolverReport]:
    """Minimize the objective by mirror descent in the entropy geometry.

    Each step multiplies q by exp(-eta * grad F), with

        grad F(s) = (1 - mu) log q(s) - log p(s) - lam log f(x|s) + (1 - mu),

    restricted to the feasible states. Iterates are carried as log-masses so
    strongly tilted solutions do not underflow. ``callback(t, q)`` is called
    after every iteration.
    """
    mu, lam = spec.prefs.mu, spec.prefs.lam
    if mu >= 1:
        raise DegenerateRegimeError(f"solve_convex needs mu < 1, got {mu}")
    eta = config.step_for(mu)
    idx = np.flatnonzero(spec.feasible)
    log_p = np.log(spec.prior.mass[idx])
    log_f = np.log(spec.likelihood[idx])
    n = len(spec.prior)

    log_q = np.full(len(idx), -math.log(len(idx)))
    q = np.exp(log_q)
    converged = False
    t = 0
    for t in range(1, config.max_iterations + 1):
        grad = (1.0 - mu) * log_q - log_p - lam * log_f + (1.0 - mu)
        z = log_q - eta * grad
        log_q = z - (z.max() + math.log(np.exp(z - z.max()).sum()))
        q_new = np.exp(log_q)
        change = float(np.max(np.abs(q_new - q)))
        q = q_new
        if callback is not None:
            callback(t, _embed(spec, idx, q, n))
        if change < config.convergence_tol:
            converged = True
            break

    result = _embed(spec, idx, q, n)
    report = SolverReport(
        iterations=t,
        final_objective=objective_value(result, spec),
        converged=converged,
    )
    return result, report


def _embed(spec, idx, q, n) -> Distribution:
    mass = np.zeros(n)
    mass[idx] = q / q.sum()
    return Distribution(spec.prior.space, mass)


def solve_concave(spec: ObjectiveSpec) -> ConcaveSolution:
    """Vertex enumeration for ``mu >= 1``: point masses on the argmax of p * f**lam."""
    if spec.prefs.mu < 1:
        raise ValueError(f"solve_concave needs mu >= 1, got {spec.prefs.mu}")
    score = spec.log_score()
    best = float(score.max())
    # relative tie on p * f**lam, compared in log space
    ties = np.flatnonzero(score >= best + math.log1p(-TIE_RTOL))
    maximizers = tuple(int(i) for i in ties)
    canonical = Distribution.dirac(spec.prior.space, maximizers[0])
    return ConcaveSolution(maximizers, canonical, objective_value(canonical, spec))


def variational_update(
    spec: ObjectiveSpec, config: SolverConfig = SolverConfig()
) -> tuple[Distribution, SolverReport]:
    if spec.prefs.convex:
        return solve_convex(spec, config)
    sol = solve_concave(spec)
    return sol.canonical, SolverReport(0, sol.objective_value, True)


def crosscheck(spec: ObjectiveSpec, config: SolverConfig = SolverConfig()) -> SolverReport:
    """Run the numerical solver and record its sup-norm gap to the closed-form rule."""
    q_num, report = solve_convex(spec, config)
    q_closed = exponential_update(
        spec.prior, spec.experiment, spec.signal, preferences_to_exponents(spec.prefs)
    )
    report.sup_gap_to_closed_form = float(np.max(np.abs(q_num.mass - q_closed.mass)))
    return report
