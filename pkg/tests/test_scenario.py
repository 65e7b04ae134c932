import json
import logging

import numpy as np
import pytest

from varbelief import ExponentParams, PreferenceParams, ScenarioValidationError, simulate_dataset
from varbelief.scenario import parse_scenario, read_dataset, scenario_from_dict, write_dataset

BASE = {
    "states": ["H", "L"],
    "prior": [0.25, 0.75],
    "signals": ["x", "y"],
    "likelihood": [[0.8, 0.2], [0.2, 0.8]],
    "realized_signal": "x",
    "rule": {"type": "bayes"},
}


def with_(**changes):
    d = json.loads(json.dumps(BASE))
    d.update(changes)
    return d


def test_happy_path(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(BASE))
    sc = parse_scenario(path)
    assert sc.states == ("H", "L")
    assert sc.prior_distribution["H"] == 0.25
    np.testing.assert_array_equal(sc.experiment.likelihood("x"), [0.8, 0.2])
    assert sc.rule_type == "bayes" and sc.rule == ExponentParams(1, 1)


@pytest.mark.parametrize(
    "rule, expected",
    [
        ("bayes", ExponentParams(1, 1)),
        ({"type": "exponential", "alpha": 2, "beta": 0.5}, ExponentParams(2, 0.5)),
        ({"type": "variational", "lambda": 0.5, "mu": -1}, PreferenceParams(0.5, -1)),
    ],
)
def test_rules(rule, expected):
    assert scenario_from_dict(with_(rule=rule)).rule == expected


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"prior": [0.5, 0.43]}, "prior"),
        ({"prior": [1.2, -0.2]}, "prior"),
        ({"prior": [1.0]}, "prior"),
        ({"realized_signal": "w"}, "realized_signal"),
        ({"states": ["H", "H"]}, "states"),
        ({"likelihood": [[0.8, 0.2], [0.3, 0.8]]}, "likelihood[L]"),
        ({"likelihood": [[0.8, 0.2]]}, "likelihood"),
        ({"rule": {"type": "magic"}}, "rule.type"),
        ({"rule": {"type": "exponential", "alpha": 2}}, "rule.beta"),
        ({"rule": {"type": "exponential", "alpha": -1, "beta": 1}}, "rule"),
        ({"rule": {"type": "variational", "lambda": "big"}}, "rule.lambda"),
    ],
)
def test_validation_names_field(changes, field):
    with pytest.raises(ScenarioValidationError) as exc:
        scenario_from_dict(with_(**changes))
    assert exc.value.field == field
    assert str(exc.value).startswith(field)


def test_missing_field():
    d = with_()
    del d["signals"]
    with pytest.raises(ScenarioValidationError, match="signals"):
        scenario_from_dict(d)


def test_renormalizes_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        sc = scenario_from_dict(with_(prior=[0.2500000001, 0.75]))
    assert abs(sum(sc.prior) - 1) < 1e-15
    assert "prior" in caplog.text


def test_no_warning_for_exact_input(caplog):
    with caplog.at_level(logging.WARNING):
        scenario_from_dict(with_())
    assert caplog.text == ""


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ScenarioValidationError):
        parse_scenario(path)


def test_dataset_roundtrip(tmp_path):
    sc = scenario_from_dict(BASE)
    obs = simulate_dataset(1, sc.space, sc.experiment, ExponentParams(2, 0.5), 10, 0.1)
    path = tmp_path / "d.csv"
    write_dataset(path, obs, comments=["seed=1"])
    text = path.read_text().splitlines()
    assert text[0] == "# seed=1"
    assert text[1] == "p_H,p_L,f_H,f_L,q_H,q_L"
    space, back = read_dataset(path)
    assert space == sc.space and len(back) == 10
    for a, b in zip(obs, back):
        np.testing.assert_array_equal(a.likelihood_row, b.likelihood_row)
        np.testing.assert_allclose(a.prior.mass, b.prior.mass, rtol=1e-15)
        np.testing.assert_allclose(a.posterior.mass, b.posterior.mass, rtol=1e-15)


@pytest.mark.parametrize(
    "content, field",
    [
        ("p_H,p_L,f_H,f_L,q_H\n", "header"),
        ("p_H,p_L,f_H,f_L,q_H,q_X\n0.5,0.5,0.5,0.5,0.5,0.5\n", "header"),
        ("p_H,p_L,f_H,f_L,q_H,q_L\n0.5,0.5,0.5,0.5,0.5\n", "row 1"),
        ("p_H,p_L,f_H,f_L,q_H,q_L\n0.5,0.6,0.5,0.5,0.5,0.5\n", "row 1 prior"),
        ("p_H,p_L,f_H,f_L,q_H,q_L\n0.5,0.5,1.5,0.5,0.5,0.5\n", "row 1 likelihood"),
        ("p_H,p_L,f_H,f_L,q_H,q_L\n", "data"),
    ],
)
def test_dataset_validation(tmp_path, content, field):
    path = tmp_path / "d.csv"
    path.write_text(content)
    with pytest.raises(ScenarioValidationError) as exc:
        read_dataset(path)
    assert exc.value.field == field
