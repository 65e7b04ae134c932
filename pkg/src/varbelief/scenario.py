"""Scenario (JSON) and dataset (CSV) files.

Scenario schema, a single JSON object::

    {
      "states": ["H", "L"],
      "prior": [0.25, 0.75],
      "signals": ["x", "y"],
      "likelihood": [[0.8, 0.2], [0.2, 0.8]],     # rows = states, columns = signals
      "realized_signal": "x",
      "rule": {"type": "bayes"}
           | {"type": "exponential", "alpha": 2, "beta": 0.5}
           | {"type": "variational", "lambda": 1, "mu": 0}
    }

``rule`` may also be the bare string ``"bayes"``. Probability vectors must sum
to 1 within 1e-9; they are then renormalized, with a logged warning when the
adjustment exceeds 1e-12.

Dataset CSV: optional ``#`` comment lines, then a mandatory header
``p_<state>..., f_<state>..., q_<state>...`` and one row per observation
(prior, likelihood of the realized signal, posterior).
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .beliefs import (
    BAYES,
    Distribution,
    Experiment,
    ExponentParams,
    PreferenceParams,
    StateSpace,
)
from .errors import ScenarioValidationError
from .estimation import UpdateObservation

log = logging.getLogger(__name__)

INPUT_SUM_TOL = 1e-9
WARN_ADJUST = 1e-12

Rule = Union[ExponentParams, PreferenceParams]


@dataclass(frozen=True)
class ScenarioFile:
    states: tuple[str, ...]
    prior: tuple[float, ...]
    signals: tuple[str, ...]
    likelihood: tuple[tuple[float, ...], ...]
    realized_signal: str
    rule_type: str  # "bayes" | "exponential" | "variational"
    rule: Rule

    @property
    def space(self) -> StateSpace:
        return StateSpace(self.states)

    @property
    def prior_distribution(self) -> Distribution:
        return Distribution(self.space, self.prior)

    @property
    def experiment(self) -> Experiment:
        return Experiment(self.space, self.signals, np.array(self.likelihood))


def _labels(raw, field) -> tuple[str, ...]:
    if not isinstance(raw, list) or not raw:
        raise ScenarioValidationError(field, "must be a non-empty list of labels")
    if any(not isinstance(s, str) or not s for s in raw):
        raise ScenarioValidationError(field, "labels must be non-empty strings")
    if len(set(raw)) != len(raw):
        raise ScenarioValidationError(field, "labels must be unique")
    return tuple(raw)


def _number(raw, field) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioValidationError(field, f"expected a number, got {raw!r}")
    x = float(raw)
    if not math.isfinite(x):
        raise ScenarioValidationError(field, "must be finite")
    return x


def validate_probabilities(raw, n: int, field: str) -> tuple[float, ...]:
    """Check a probability vector and renormalize it exactly onto the simplex."""
    if not isinstance(raw, (list, tuple)) or len(raw) != n:
        raise ScenarioValidationError(field, f"expected a list of {n} probabilities")
    v = np.array([_number(x, field) for x in raw])
    if np.any(v < 0):
        raise ScenarioValidationError(field, "negative probability")
    total = float(v.sum())
    if abs(total - 1.0) > INPUT_SUM_TOL:
        raise ScenarioValidationError(field, f"sums to {total!r}, not 1 (tolerance {INPUT_SUM_TOL})")
    if abs(total - 1.0) > WARN_ADJUST:
        log.warning("%s sums to %r; renormalized", field, total)
    return tuple(float(x) for x in v / total)


def _rule(raw) -> tuple[str, Rule]:
    if raw == "bayes":
        raw = {"type": "bayes"}
    if not isinstance(raw, dict) or "type" not in raw:
        raise ScenarioValidationError("rule", "expected an object with a 'type' field")
    kind = raw["type"]
    try:
        if kind == "bayes":
            return kind, BAYES
        if kind == "exponential":
            for k in ("alpha", "beta"):
                if k not in raw:
                    raise ScenarioValidationError(f"rule.{k}", "missing")
            return kind, ExponentParams(_number(raw["alpha"], "rule.alpha"), _number(raw["beta"], "rule.beta"))
        if kind == "variational":
            if "lambda" not in raw:
                raise ScenarioValidationError("rule.lambda", "missing")
            mu = _number(raw.get("mu", 0.0), "rule.mu")
            return kind, PreferenceParams(_number(raw["lambda"], "rule.lambda"), mu)
    except ScenarioValidationError:
        raise
    except ValueError as exc:
        raise ScenarioValidationError("rule", str(exc)) from None
    raise ScenarioValidationError("rule.type", f"unknown rule {kind!r}")


def scenario_from_dict(data: dict) -> ScenarioFile:
    if not isinstance(data, dict):
        raise ScenarioValidationError("scenario", "top level must be a JSON object")
    for key in ("states", "prior", "signals", "likelihood", "realized_signal"):
        if key not in data:
            raise ScenarioValidationError(key, "missing")
    states = _labels(data["states"], "states")
    signals = _labels(data["signals"], "signals")
    prior = validate_probabilities(data["prior"], len(states), "prior")
    lik = data["likelihood"]
    if not isinstance(lik, list) or len(lik) != len(states):
        raise ScenarioValidationError("likelihood", f"expected {len(states)} rows, one per state")
    rows = tuple(
        validate_probabilities(row, len(signals), f"likelihood[{s}]") for s, row in zip(states, lik)
    )
    x = data["realized_signal"]
    if x not in signals:
        raise ScenarioValidationError("realized_signal", f"{x!r} is not one of the signals {list(signals)}")
    rule_type, rule = _rule(data.get("rule", "bayes"))
    return ScenarioFile(states, prior, signals, rows, x, rule_type, rule)


def parse_scenario(path: Union[str, Path]) -> ScenarioFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioValidationError("scenario", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioValidationError("scenario", f"invalid JSON: {exc}") from None
    return scenario_from_dict(data)


def _repr_float(x: float) -> str:
    return repr(float(x))


def write_dataset(
    path: Union[str, Path],
    observations: Sequence[UpdateObservation],
    comments: Iterable[str] = (),
) -> None:
    """Write observations as CSV at full float precision (shortest round-trip repr)."""
    if not observations:
        raise ValueError("no observations to write")
    labels = observations[0].space.labels
    header = [f"{pre}_{s}" for pre in ("p", "f", "q") for s in labels]
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for obs in observations:
            w.writerow(
                [_repr_float(v) for v in obs.prior.mass]
                + [_repr_float(v) for v in obs.likelihood_row]
                + [_repr_float(v) for v in obs.posterior.mass]
            )


def read_dataset(path: Union[str, Path]) -> tuple[StateSpace, list[UpdateObservation]]:
    try:
        with open(path, newline="") as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise ScenarioValidationError("data", f"cannot read {path}: {exc.strerror}") from None
    rows = list(csv.reader(lines))
    if not rows:
        raise ScenarioValidationError("header", "missing header row")
    header = [h.strip() for h in rows[0]]
    if len(header) % 3 or not header:
        raise ScenarioValidationError("header", f"{len(header)} columns is not a multiple of 3")
    n = len(header) // 3
    groups = [header[k * n:(k + 1) * n] for k in range(3)]
    labels: Optional[list[str]] = None
    for pre, cols in zip(("p_", "f_", "q_"), groups):
        if not all(c.startswith(pre) and len(c) > len(pre) for c in cols):
            raise ScenarioValidationError("header", f"expected {n} columns prefixed {pre!r}, got {cols}")
        these = [c[len(pre):] for c in cols]
        if labels is None:
            labels = these
        elif these != labels:
            raise ScenarioValidationError("header", "p_/f_/q_ columns name different states")
    try:
        space = StateSpace(tuple(labels))
    except ValueError as exc:
        raise ScenarioValidationError("header", str(exc)) from None

    observations = []
    for i, row in enumerate(rows[1:], start=1):
        field = f"row {i}"
        if len(row) != 3 * n:
            raise ScenarioValidationError(field, f"has {len(row)} columns, expected {3 * n}")
        try:
            vals = [float(v) for v in row]
        except ValueError:
            raise ScenarioValidationError(field, "non-numeric entry") from None
        prior = validate_probabilities(vals[:n], n, f"{field} prior")
        post = validate_probabilities(vals[2 * n:], n, f"{field} posterior")
        f_row = np.array(vals[n:2 * n])
        if np.any(f_row < 0) or np.any(f_row > 1) or not np.all(np.isfinite(f_row)):
            raise ScenarioValidationError(f"{field} likelihood", "entries must lie in [0, 1]")
        observations.append(
            UpdateObservation(Distribution(space, prior), f_row, Distribution(space, post))
        )
    if not observations:
        raise ScenarioValidationError("data", "no observations")
    return space, observations
