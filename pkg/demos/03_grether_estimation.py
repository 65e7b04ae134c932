"""
Recovering updating biases from data
====================================

Simulate reports from an agent who over-weights the prior (alpha = 2) and
under-weights evidence (beta = 0.5), then fit the intercept-free log-ratio
regression and translate the estimates into (lambda, mu).
"""

import numpy as np

from varbelief import Experiment, ExponentParams, StateSpace, grether_fit, simulate_dataset

space = StateSpace(("fair", "low", "high"))
f = Experiment(
    space,
    ("lo", "mid", "hi"),
    np.array([[1 / 3, 1 / 3, 1 / 3], [0.6, 0.3, 0.1], [0.1, 0.3, 0.6]]),
)
truth = ExponentParams(alpha=2.0, beta=0.5)

for noise in (0.0, 0.05, 0.3):
    obs = simulate_dataset(seed=11, space=space, experiment=f, params=truth, n=500, noise_scale=noise)
    fit = grether_fit(obs)
    prefs = fit.implied_prefs
    print(
        f"noise={noise:<5} alpha_hat={fit.alpha_hat:.6f} beta_hat={fit.beta_hat:.6f} "
        f"rss={fit.residual_sum_squares:.3g} -> lambda={prefs.lam:.4f}, mu={prefs.mu:.4f}"
    )
