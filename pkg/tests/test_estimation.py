import itertools

import numpy as np
import pytest

from varbelief import (
    BAYES,
    Distribution,
    Experiment,
    ExponentParams,
    InconsistentScenarioError,
    SignalSequence,
    UnidentifiedParametersError,
    UpdateObservation,
    bayes_update,
    exponential_update,
    grether_fit,
    order_dependence,
    sequential_update,
    simulate_dataset,
)
from varbelief.estimation import log_ratio_design

from scenarios import make_space, random_scenario


@pytest.fixture
def three_state_experiment():
    space = make_space(3)
    table = np.array([[0.6, 0.3, 0.1], [0.2, 0.5, 0.3], [0.1, 0.3, 0.6]])
    return Experiment(space, ("lo", "mid", "hi"), table)


# ---- Grether regression ----


def test_recovers_exponents_noiseless(three_state_experiment):
    obs = simulate_dataset(7, three_state_experiment.space, three_state_experiment, ExponentParams(2, 0.5), 20)
    fit = grether_fit(obs)
    assert fit.alpha_hat == pytest.approx(2, abs=1e-9)
    assert fit.beta_hat == pytest.approx(0.5, abs=1e-9)
    assert fit.residual_sum_squares < 1e-20
    assert fit.n_equations == 20 * 2
    assert (fit.implied_prefs.lam, fit.implied_prefs.mu) == pytest.approx((0.25, 0.5), abs=1e-9)


def test_bayes_data_gives_unit_exponents(rng):
    obs = []
    for _ in range(30):
        p, f, x = random_scenario(rng, max_states=6)
        obs.append(UpdateObservation(p, f.likelihood(x), bayes_update(p, f, x)))
    fit = grether_fit(obs)
    assert (fit.alpha_hat, fit.beta_hat) == pytest.approx((1, 1), abs=1e-9)
    assert (fit.implied_prefs.lam, fit.implied_prefs.mu) == pytest.approx((1, 0), abs=1e-9)


def test_single_observation_is_unidentified(prior, experiment):
    q = exponential_update(prior, experiment, "x", ExponentParams(2, 0.5))
    obs = UpdateObservation(prior, experiment.likelihood("x"), q)
    with pytest.raises(UnidentifiedParametersError):
        grether_fit([obs])


def test_collinear_design_is_unidentified(two_states, experiment):
    u = Distribution.uniform(two_states)
    obs = [UpdateObservation(u, experiment.likelihood("x"), bayes_update(u, experiment, "x"))] * 5
    with pytest.raises(UnidentifiedParametersError):
        grether_fit(obs)


def test_zero_entries_rejected(two_states, experiment):
    p = Distribution.dirac(two_states, 0)
    obs = UpdateObservation(p, experiment.likelihood("x"), p)
    with pytest.raises(ValueError, match="observation 0: prior"):
        grether_fit([obs])


def test_fit_matches_lstsq(three_state_experiment):
    obs = simulate_dataset(3, three_state_experiment.space, three_state_experiment, ExponentParams(1.4, 0.7), 50, 0.2)
    X, y = log_ratio_design(obs)
    coef, res, *_ = np.linalg.lstsq(X, y, rcond=None)
    fit = grether_fit(obs)
    np.testing.assert_allclose([fit.alpha_hat, fit.beta_hat], coef, rtol=1e-10)
    assert fit.residual_sum_squares == pytest.approx(res[0], rel=1e-8)


def test_negative_estimate_has_no_implied_prefs(two_states):
    # posterior moves against the evidence
    obs = []
    for a, b in [(0.3, 0.8), (0.6, 0.3), (0.45, 0.65)]:
        p = Distribution(two_states, [a, 1 - a])
        f = np.array([b, 1 - b])
        w = p.mass ** 1.0 * f ** -0.5
        obs.append(UpdateObservation(p, f, Distribution.from_weights(two_states, w)))
    fit = grether_fit(obs)
    assert fit.beta_hat == pytest.approx(-0.5, abs=1e-9)
    assert fit.implied_prefs is None


# ---- simulation ----


def test_simulation_deterministic(three_state_experiment):
    args = (three_state_experiment.space, three_state_experiment, ExponentParams(1.5, 2.0), 25, 0.1)
    a = simulate_dataset(11, *args)
    b = simulate_dataset(11, *args)
    c = simulate_dataset(12, *args)
    for x, y in zip(a, b):
        assert x.prior == y.prior and x.posterior == y.posterior
        assert np.array_equal(x.likelihood_row, y.likelihood_row)
    assert any(x.prior != z.prior for x, z in zip(a, c))


def test_simulated_priors_positive(three_state_experiment):
    for o in simulate_dataset(5, three_state_experiment.space, three_state_experiment, BAYES, 200):
        assert np.all(o.prior.mass >= 1e-6 / 1.0001)


def test_noisy_recovery(three_state_experiment):
    truth = ExponentParams(2, 0.5)
    obs = simulate_dataset(99, three_state_experiment.space, three_state_experiment, truth, 500, 0.05)
    fit = grether_fit(obs)
    assert abs(fit.alpha_hat - 2) < 0.1 and abs(fit.beta_hat - 0.5) < 0.1


# ---- sequences ----


def test_sequential_order_example(two_states):
    # f(x|.) = (0.4, 0.1) is proportional to (0.8, 0.2) and f(y|.) is flat, which is all
    # the rule sees; rows must sum to 1, so the literal (0.8, 0.2) / (0.5, 0.5) columns can't coexist
    f = Experiment(two_states, ("x", "y", "z"), [[0.4, 0.25, 0.35], [0.1, 0.25, 0.65]])
    p = Distribution.uniform(two_states)
    rule = ExponentParams(2, 1)
    xy = sequential_update(p, SignalSequence(f, ("x", "y")), rule)
    yx = sequential_update(p, SignalSequence(f, ("y", "x")), rule)
    np.testing.assert_allclose(xy.mass, [16 / 17, 1 / 17], atol=1e-15)
    np.testing.assert_allclose(yx.mass, [0.8, 0.2], atol=1e-15)
    tv = order_dependence(p, SignalSequence(f, ("x", "y")), rule)
    assert tv == pytest.approx(0.14117647058823529411764705882352941176470588235294, abs=1e-9)


def test_empty_sequence_is_identity(prior, experiment):
    assert sequential_update(prior, SignalSequence(experiment, ()), ExponentParams(3, 2)) == prior


def test_single_step_equals_exponential_update(rng):
    for _ in range(50):
        p, f, x = random_scenario(rng)
        rule = ExponentParams(float(rng.uniform(0.1, 5)), float(rng.uniform(0.1, 5)))
        a = sequential_update(p, SignalSequence(f, (f.signals[x],)), rule)
        assert np.array_equal(a.mass, exponential_update(p, f, x, rule).mass)


def test_bayes_order_invariance(rng):
    for _ in range(30):
        p, f, _ = random_scenario(rng, max_states=8, max_signals=5)
        signals = tuple(f.signals[int(i)] for i in rng.integers(len(f.signals), size=4))
        results = [
            sequential_update(p, SignalSequence(f, perm), BAYES).mass
            for perm in itertools.permutations(signals)
        ]
        assert max(np.abs(r - results[0]).max() for r in results) <= 1e-12


def test_alpha_one_has_no_order_dependence(rng):
    for _ in range(30):
        p, f, _ = random_scenario(rng, max_states=8, max_signals=5)
        signals = tuple(f.signals[int(i)] for i in rng.integers(len(f.signals), size=5))
        rule = ExponentParams(1.0, float(rng.uniform(0.1, 4)))
        assert order_dependence(p, SignalSequence(f, signals), rule) <= 1e-12


def test_identical_signals_exact_zero(prior, experiment):
    seq = SignalSequence(experiment, ("x", "x", "x"))
    assert order_dependence(prior, seq, ExponentParams(3, 0.5)) == 0.0


def test_sampled_permutations_deterministic(rng):
    p, f, _ = random_scenario(rng, max_states=5, max_signals=4)
    signals = tuple(f.signals[i % len(f.signals)] for i in range(7))
    seq = SignalSequence(f, signals)
    rule = ExponentParams(2.5, 1.0)
    a = order_dependence(p, seq, rule, max_permutations=50, seed=3)
    b = order_dependence(p, seq, rule, max_permutations=50, seed=3)
    full = order_dependence(p, seq, rule, max_permutations=5040)
    assert a == b
    assert 0 < a <= full + 1e-15


def test_infeasible_step_named(two_states):
    f = Experiment(two_states, ("x", "y"), [[0.0, 1.0], [0.5, 0.5]])
    p = Distribution.dirac(two_states, 0)
    with pytest.raises(InconsistentScenarioError, match="step 1"):
        sequential_update(p, SignalSequence(f, ("y", "x")), BAYES)


def test_unknown_signal_rejected(experiment):
    with pytest.raises(KeyError):
        SignalSequence(experiment, ("x", "w"))
