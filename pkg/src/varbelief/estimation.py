"""Grether-style recovery of (alpha, beta) and signal-order analysis.

The regression stacks, for every observation and every state s != 0,

    log q(s)/q(0) = alpha * log p(s)/p(0) + beta * log f(x|s)/f(x|0)

and fits it by least squares without an intercept.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .beliefs import (
    Distribution,
    Experiment,
    ExponentParams,
    PreferenceParams,
    StateSpace,
    _same_space,
    exponential_update,
    exponents_to_preferences,
    normalize_log_weights,
)
from .errors import InconsistentScenarioError, UnidentifiedParametersError
from .rng import SplitMix64

PRIOR_FLOOR = 1e-6
SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class UpdateObservation:
    prior: Distribution
    likelihood_row: np.ndarray
    posterior: Distribution

    def __post_init__(self):
        _same_space(self.prior.space, self.posterior.space)
        row = np.array(self.likelihood_row, dtype=float)
        if row.shape != (len(self.prior),):
            raise ValueError(f"likelihood row has shape {row.shape}, expected {(len(self.prior),)}")
        if np.any(row < 0) or np.any(row > 1) or not np.all(np.isfinite(row)):
            raise ValueError("likelihood row entries must be probabilities")
        row.setflags(write=False)
        object.__setattr__(self, "likelihood_row", row)

    @property
    def space(self) -> StateSpace:
        return self.prior.space


@dataclass(frozen=True)
class FitResult:
    alpha_hat: float
    beta_hat: float
    residual_sum_squares: float
    n_equations: int
    implied_prefs: Optional[PreferenceParams] = None


@dataclass(frozen=True)
class SignalSequence:
    experiment: Experiment
    signals: tuple[str, ...]

    def __post_init__(self):
        signals = tuple(self.signals)
        for x in signals:
            if x not in self.experiment.signals:
                raise KeyError(f"unknown signal {x!r}")
        object.__setattr__(self, "signals", signals)

    def __len__(self):
        return len(self.signals)

    def reordered(self, order: Sequence[int]) -> "SignalSequence":
        return SignalSequence(self.experiment, tuple(self.signals[i] for i in order))


def log_ratio_design(observations: Sequence[UpdateObservation]):
    """Stacked regressors (n_eq, 2) and responses (n_eq,) relative to state 0."""
    rows, ys = [], []
    for k, obs in enumerate(observations):
        for name, v in (
            ("prior", obs.prior.mass),
            ("likelihood_row", obs.likelihood_row),
            ("posterior", obs.posterior.mass),
        ):
            if np.any(v <= 0):
                raise ValueError(f"observation {k}: {name} has a zero entry; log-ratios undefined")
        lp = np.log(obs.prior.mass)
        lf = np.log(obs.likelihood_row)
        lq = np.log(obs.posterior.mass)
        rows.append(np.column_stack([lp[1:] - lp[0], lf[1:] - lf[0]]))
        ys.append(lq[1:] - lq[0])
    if not rows:
        raise ValueError("need at least one observation")
    return np.vstack(rows), np.concatenate(ys)


def grether_fit(observations: Sequence[UpdateObservation]) -> FitResult:
    X, y = log_ratio_design(observations)
    a = float(X[:, 0] @ X[:, 0])
    b = float(X[:, 0] @ X[:, 1])
    c = float(X[:, 1] @ X[:, 1])
    det = a * c - b * b
    if a == 0 or c == 0 or det <= SINGULAR_RTOL * a * c:
        raise UnidentifiedParametersError(
            "prior and likelihood log-ratios are collinear; alpha and beta are not identified"
        )
    u = float(X[:, 0] @ y)
    v = float(X[:, 1] @ y)
    alpha = (c * u - b * v) / det
    beta = (a * v - b * u) / det
    resid = y - X @ np.array([alpha, beta])
    prefs = None
    if alpha > 0 and beta > 0:
        prefs = exponents_to_preferences(ExponentParams(alpha, beta))
    return FitResult(alpha, beta, float(resid @ resid), int(len(y)), prefs)


def simulate_dataset(
    seed: int,
    space: StateSpace,
    experiment: Experiment,
    params: ExponentParams,
    n: int,
    noise_scale: float = 0.0,
) -> list[UpdateObservation]:
    """Draw ``n`` synthetic updates from an exponential rule.

    Priors are flat-Dirichlet draws (normalized exponentials) floored at 1e-6;
    the signal is drawn from the prior predictive; the posterior log-ratios get
    N(0, noise_scale**2) noise before renormalizing.
    """
    _same_space(space, experiment.space)
    if n < 1:
        raise ValueError("n must be at least 1")
    if noise_scale < 0:
        raise ValueError("noise_scale must be nonnegative")
    rng = SplitMix64(seed)
    out = []
    for _ in range(n):
        w = np.array([rng.exponential() for _ in range(len(space))])
        w = np.maximum(w / w.sum(), PRIOR_FLOOR)
        prior = Distribution(space, w / w.sum())
        j = rng.choice(experiment.marginal(prior))
        post = exponential_update(prior, experiment, j, params)
        if noise_scale > 0:
            eps = np.array([0.0] + [rng.normal() for _ in range(len(space) - 1)])
            with np.errstate(divide="ignore"):
                post = Distribution(space, normalize_log_weights(np.log(post.mass) + noise_scale * eps))
        out.append(UpdateObservation(prior, experiment.table[:, j].copy(), post))
    return out


def sequential_update(
    prior: Distribution, seq: SignalSequence, rule: ExponentParams
) -> Distribution:
    q = prior
    for step, x in enumerate(seq.signals):
        try:
            q = exponential_update(q, seq.experiment, x, rule)
        except InconsistentScenarioError as exc:
            raise InconsistentScenarioError(f"step {step} (signal {x!r}): {exc}") from None
    return q


def _orderings(n: int, max_permutations: int, seed: int):
    if math.factorial(n) <= max_permutations:
        return list(itertools.permutations(range(n)))
    rng = SplitMix64(seed)
    orders = [tuple(range(n))]
    while len(orders) < max_permutations:
        perm = list(range(n))
        rng.shuffle(perm)
        orders.append(tuple(perm))
    return orders


def order_dependence(
    prior: Distribution,
    seq: SignalSequence,
    rule: ExponentParams,
    max_permutations: int = 720,
    seed: int = 0,
) -> float:
    """Largest total-variation distance between posteriors over orderings of the signals."""
    if len(seq) < 2:
        raise ValueError("need at least two signals to compare orders")
    if max_permutations < 1:
        raise ValueError("max_permutations must be positive")
    outcomes = {}
    for order in _orderings(len(seq), max_permutations, seed):
        key = tuple(seq.signals[i] for i in order)
        if key not in outcomes:
            outcomes[key] = sequential_update(prior, seq.reordered(order), rule).mass
    Q = np.array(list(outcomes.values()))
    if len(Q) == 1:
        return 0.0
    tv = 0.5 * np.abs(Q[:, None, :] - Q[None, :, :]).sum(axis=-1)
    return float(tv.max())
