"""
Taste for entropy and the regime flip at mu = 1
===============================================

Adding ``mu * H(q)`` to the objective yields the exponential updating rule
with ``alpha = 1/(1-mu)`` and ``beta = lambda/(1-mu)`` while mu < 1. From
mu = 1 on, the objective is concave and the optimum is a point mass on the
mode of ``p * f**lambda``.
"""

import numpy as np

from varbelief import (
    Distribution,
    Experiment,
    ExponentParams,
    ObjectiveSpec,
    PreferenceParams,
    StateSpace,
    entropy,
    exponents_to_preferences,
    variational_update,
)

space = StateSpace(("H", "L"))
prior = Distribution(space, [0.25, 0.75])
f = Experiment(space, ("x", "y"), np.array([[0.8, 0.2], [0.2, 0.8]]))

print(f"{'mu':>7} {'regime':>8} {'q(H)':>10} {'entropy':>9}")
for mu in (-2.0, -0.5, 0.0, 0.5, 0.9, 0.99, 0.999, 1.0, 1.5):
    spec = ObjectiveSpec(prior, f, "x", PreferenceParams(1.0, mu))
    q, _ = variational_update(spec)
    regime = "convex" if mu < 1 else "concave"
    print(f"{mu:7.3f} {regime:>8} {q['H']:10.6f} {entropy(q):9.6f}")

# %%
# Any observed (alpha, beta) pair reads back as preferences: conservatism
# (alpha < 1) is a taste for uncertainty (mu < 0).
for a, b in [(1, 1), (2, 0.5), (0.5, 1), (0.8, 1.6)]:
    prefs = exponents_to_preferences(ExponentParams(a, b))
    print(f"alpha={a}, beta={b} -> lambda={prefs.lam:.4g}, mu={prefs.mu:.4g}")
