"""Finite state spaces, distributions, information measures and closed-form updating rules.

Every updating rule works in log space and normalizes with a max-shifted
log-sum-exp, so exponents far from 1 do not underflow. Zero masses are
detected exactly (``== 0``) and stay exactly zero in every output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateRegimeError,
    InconsistentScenarioError,
    SpaceMismatchError,
)

SUM_TOL = 1e-12


def _as_readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _log(values: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(values)


def normalize_log_weights(log_w: np.ndarray) -> np.ndarray:
    """Exponentiate and normalize log-weights; ``-inf`` entries map to exactly 0.

    Raises InconsistentScenarioError if every weight is zero.
    """
    log_w = np.asarray(log_w, dtype=float)
    top = np.max(log_w)
    if not np.isfinite(top):
        raise InconsistentScenarioError("every state has zero weight; the update is undefined")
    w = np.exp(log_w - top)
    return w / w.sum()


@dataclass(frozen=True)
class StateSpace:
    """Ordered, labeled finite state space."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValueError("a state space needs at least one state")
        if any(not isinstance(s, str) or s == "" for s in labels):
            raise ValueError("state labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError(f"state labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _check_simplex(mass: np.ndarray, what: str, tol: float) -> None:
    if mass.ndim != 1:
        raise ValueError(f"{what} must be a vector")
    if not np.all(np.isfinite(mass)):
        raise ValueError(f"{what} has non-finite entries")
    if np.any(mass < 0):
        raise ValueError(f"{what} has negative entries")
    total = float(mass.sum())
    if abs(total - 1.0) > tol:
        raise ValueError(f"{what} sums to {total!r}, not 1")


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over a StateSpace."""

    space: StateSpace
    mass: np.ndarray

    def __post_init__(self):
        mass = _as_readonly(self.mass)
        if mass.shape != (len(self.space),):
            raise ValueError(
                f"distribution has {mass.shape} entries for {len(self.space)} states"
            )
        _check_simplex(mass, "distribution", SUM_TOL)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_weights(cls, space: StateSpace, weights) -> "Distribution":
        """Normalize nonnegative weights onto the simplex."""
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        total = w.sum()
        if total <= 0:
            raise ValueError("weights sum to zero")
        return cls(space, w / total)

    @classmethod
    def uniform(cls, space: StateSpace) -> "Distribution":
        n = len(space)
        return cls(space, np.full(n, 1.0 / n))

    @classmethod
    def dirac(cls, space: StateSpace, index: int) -> "Distribution":
        mass = np.zeros(len(space))
        mass[index] = 1.0
        return cls(space, mass)

    def __len__(self) -> int:
        return len(self.mass)

    def __getitem__(self, key):
        if isinstance(key, str):
            key = self.space.index(key)
        return float(self.mass[key])

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.mass, other.mass)

    def __hash__(self):
        return hash((self.space, self.mass.tobytes()))

    def __repr__(self):
        pairs = ", ".join(f"{s}={m:.6g}" for s, m in zip(self.space.labels, self.mass))
        return f"Distribution({pairs})"


@dataclass(frozen=True, eq=False)
class Experiment:
    """Likelihood table f: S -> Delta(X); row s is the signal distribution given s."""

    space: StateSpace
    signals: tuple[str, ...]
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        signals = tuple(self.signals)
        if not signals or any(not isinstance(x, str) or x == "" for x in signals):
            raise ValueError("signal labels must be non-empty strings")
        if len(set(signals)) != len(signals):
            raise ValueError(f"signal labels must be unique: {signals}")
        table = _as_readonly(self.table)
        if table.shape != (len(self.space), len(signals)):
            raise ValueError(
                f"likelihood table has shape {table.shape}, "
                f"expected {(len(self.space), len(signals))}"
            )
        for s, row in zip(self.space.labels, table):
            _check_simplex(row, f"likelihood row for state {s!r}", SUM_TOL)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "table", table)

    def signal_index(self, x: str | int) -> int:
        if isinstance(x, str):
            try:
                return self.signals.index(x)
            except ValueError:
                raise KeyError(f"unknown signal {x!r}") from None
        if not 0 <= x < len(self.signals):
            raise KeyError(f"signal index {x} out of range")
        return int(x)

    def likelihood(self, x: str | int) -> np.ndarray:
        """Column f(x|.) for the realized signal."""
        return self.table[:, self.signal_index(x)]

    def marginal(self, p: Distribution) -> np.ndarray:
        """Predictive distribution of signals under prior ``p``."""
        _same_space(p.space, self.space)
        return p.mass @ self.table


@dataclass(frozen=True)
class ExponentParams:
    """Prior exponent ``alpha`` and evidence exponent ``beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0) or not (
            math.isfinite(self.alpha) and math.isfinite(self.beta)
        ):
            raise ValueError(f"alpha and beta must be positive and finite, got {self}")


BAYES = ExponentParams(1.0, 1.0)


@dataclass(frozen=True)
class PreferenceParams:
    """Evidence weight ``lam`` and entropy taste ``mu`` of the variational objective."""

    lam: float
    mu: float = 0.0

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must be positive and finite, got {self.lam}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")

    @property
    def convex(self) -> bool:
        return self.mu < 1


def _same_space(a: StateSpace, b: StateSpace) -> None:
    if a != b:
        raise SpaceMismatchError(f"state spaces differ: {a.labels} vs {b.labels}")


def support(p: Distribution) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(p.mass != 0))


def entropy(q: Distribution) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    m = q.mass[q.mass > 0]
    return float(max(0.0, -np.sum(m * np.log(m))))


def relative_entropy(q: Distribution, p: Distribution) -> float:
    """KL divergence D(q || p) in nats; ``math.inf`` unless q << p."""
    _same_space(q.space, p.space)
    on = q.mass > 0
    if np.any(p.mass[on] == 0):
        return math.inf
    qs, ps = q.mass[on], p.mass[on]
    return float(np.sum(qs * (np.log(qs) - np.log(ps))))


def expectation(q: Distribution, g: Sequence[float]) -> float:
    """Expectation of ``g`` under ``q``; values off the support of ``q`` are ignored."""
    g = np.asarray(g, dtype=float)
    if g.shape != q.mass.shape:
        raise ValueError(f"g has shape {g.shape}, expected {q.mass.shape}")
    on = q.mass > 0
    bad = on & ~np.isfinite(g)
    if np.any(bad):
        states = [q.space.labels[i] for i in np.flatnonzero(bad)]
        raise ValueError(f"g is not finite on supported states {states}")
    return float(np.dot(q.mass[on], g[on]))


def bayes_update(p: Distribution, f: Experiment, x: str | int) -> Distribution:
    _same_space(p.space, f.space)
    joint = p.mass * f.likelihood(x)
    marginal = joint.sum()
    if marginal <= 0:
        raise InconsistentScenarioError(
            f"signal {x!r} has zero probability under the prior"
        )
    return Distribution(p.space, joint / marginal)


def exponential_update(
    p: Distribution, f: Experiment, x: str | int, params: ExponentParams = BAYES
) -> Distribution:
    """Posterior proportional to ``p**alpha * f(x|.)**beta``, with 0**c = 0."""
    _same_space(p.space, f.space)
    log_w = params.alpha * _log(p.mass) + params.beta * _log(f.likelihood(x))
    try:
        return Distribution(p.space, normalize_log_weights(log_w))
    except InconsistentScenarioError:
        raise InconsistentScenarioError(
            f"signal {x!r} leaves every state with zero weight"
        ) from None


def gibbs_from_potential(space: StateSpace, g: Sequence[float]) -> Distribution:
    """Distribution proportional to exp(-g); states with g = +inf get mass 0.

    This is the unique minimizer of E_q[g] - H(q) over the simplex.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (len(space),):
        raise ValueError(f"potential has shape {g.shape}, expected {(len(space),)}")
    if np.any(np.isnan(g)) or np.any(g == -np.inf):
        raise ValueError("potential must be a real number or +inf on every state")
    try:
        return Distribution(space, normalize_log_weights(-g))
    except InconsistentScenarioError:
        raise InconsistentScenarioError("potential is +inf on every state") from None


def exponents_to_preferences(params: ExponentParams) -> PreferenceParams:
    return PreferenceParams(lam=params.beta / params.alpha, mu=1.0 - 1.0 / params.alpha)


def preferences_to_exponents(params: PreferenceParams) -> ExponentParams:
    if params.mu >= 1:
        raise DegenerateRegimeError(
            f"mu = {params.mu} >= 1: the objective is concave and the optimum is a "
            "point mass; use solve_concave"
        )
    scale = 1.0 - params.mu
    return ExponentParams(alpha=1.0 / scale, beta=params.lam / scale)


def total_variation(a: Distribution, b: Distribution) -> float:
    _same_space(a.space, b.space)
    return 0.5 * float(np.abs(a.mass - b.mass).sum())
