"""
When does the order of signals matter?
======================================

Folding the exponential rule over a sequence re-applies the prior exponent
at every step, so with alpha != 1 earlier signals get discounted differently
from later ones. With alpha = 1 the order never matters.
"""

import numpy as np

from varbelief import (
    Distribution,
    Experiment,
    ExponentParams,
    SignalSequence,
    StateSpace,
    order_dependence,
    sequential_update,
)

space = StateSpace(("H", "L"))
# x favors H four to one; y is uninformative
f = Experiment(space, ("x", "y", "z"), np.array([[0.4, 0.25, 0.35], [0.1, 0.25, 0.65]]))
prior = Distribution.uniform(space)

for rule in (ExponentParams(1, 1), ExponentParams(1, 3), ExponentParams(2, 1), ExponentParams(0.5, 1)):
    xy = sequential_update(prior, SignalSequence(f, ("x", "y")), rule)
    yx = sequential_update(prior, SignalSequence(f, ("y", "x")), rule)
    tv = order_dependence(prior, SignalSequence(f, ("x", "y")), rule)
    print(f"alpha={rule.alpha}, beta={rule.beta}: x,y -> {xy}  y,x -> {yx}  TV={tv:.6f}")

# %%
# Longer sequences: maximum TV over all 5! orderings.
seq = SignalSequence(f, ("x", "z", "y", "x", "z"))
for alpha in (0.5, 0.9, 1.0, 1.1, 2.0):
    print(f"alpha={alpha}: max TV over orderings = {order_dependence(prior, seq, ExponentParams(alpha, 1)):.3e}")
