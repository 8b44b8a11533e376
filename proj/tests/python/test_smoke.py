import math

import pytest

import xlpc


def test_version_and_defaults():
    assert xlpc.__version__ == "0.1.0"
    p = xlpc.SystemParams()
    assert p.c == 1.0
    assert p.p_max == 0.1


def test_conventional_limit():
    p = xlpc.goodman_mode(xlpc.SystemParams())
    p.b_fixed = 1e-12 * p.p_max
    a = xlpc.ee_crosslayer(p, 3.0, 0.02)
    b = xlpc.ee_goodman(p, 3.0, 0.02)
    assert abs(a / b - 1) < 1e-4


def test_best_response_anchor():
    p = xlpc.goodman_mode(xlpc.SystemParams())
    assert abs(xlpc.optimal_sinr(p, 50.0) - p.c) < 1e-6


def test_nash_and_operating_point():
    p = xlpc.SystemParams()
    gains = xlpc.sample_channel(p, 3)
    ne = xlpc.solve_ne(p, gains)
    assert len(ne["powers"]) == 2
    assert all(0 <= x <= p.p_max for x in ne["powers"])
    op = xlpc.solve_op(p, seed=1, draws=200)
    assert op["alpha"] > 0
    th = xlpc.folk_thresholds(p, gains, draws=200)
    assert th["lambda_max"] is None or 0 <= th["lambda_max"] <= 1


def test_queue_uniform_case():
    r = xlpc.simulate_queue(0.5, 0.5, 10, 200_000, seed=5)
    assert abs(r["full_fraction"] - 1 / 11) < 1e-2


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        xlpc.SystemParams(arrival_q=2.0).validate()
    with pytest.raises(ValueError):
        xlpc.run_scenario("region", draws=5, overrides=["nope=1"])


def test_scenario_is_deterministic():
    args = dict(seed=4, draws=5, overrides=["q_list=0.3,0.7", "n_list=2", "op_draws=30"])
    a = xlpc.run_scenario("lambda_vs_q", **args)
    b = xlpc.run_scenario("lambda_vs_q", **args)
    assert a == b
    assert a.splitlines()[0].startswith("N,L,eta,model")
    assert "lambda_vs_q" in xlpc.scenarios()
    assert not math.isnan(xlpc.loss_probability(xlpc.SystemParams(), 2.0))
