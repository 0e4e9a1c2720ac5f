import math

import numpy as np
import pytest

import reca


def test_shift_rule_moves_a_single_cell():
    assert reca.step(16, "00100", edges="cyclic") == "00010"
    assert reca.evolve(16, "00100", 2, edges="cyclic") == ["00100", "00010", "00001"]
    assert reca.step(16, "00010") == "00000"


def test_rule_algebra():
    assert reca.mirror_rule(110) == 124
    assert reca.complement_rule(110) == 137
    assert len(reca.equivalence_classes()) == 88
    assert reca.rule_category(110) is not None


def test_encoders():
    assert reca.encode_gray(7.5, 4, 0, 16) == "0100"
    code = reca.encode_unary(0.0, 64, -1.0, 1.0)
    assert code.count("1") == 1


def test_pseudoinverse_matches_numpy():
    rng = np.random.default_rng(0)
    s = rng.normal(size=(12, 4)) @ rng.normal(size=(4, 7))
    np.testing.assert_allclose(reca.pseudoinverse(s), np.linalg.pinv(s), atol=1e-9)


def test_nmse_hand_cases():
    assert reca.nmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert reca.nmse([1.0, 2.0], [0.0, 0.0]) == 0.5


def test_run_small_experiment_is_deterministic():
    cfg = reca.default_config("sine_square")
    cfg["task"].update(num_waves=20, points_per_wave=10)
    cfg["training"].update(train=100, test=100)
    cfg["reservoir"].update(proj_rule=90, mem_rule=16, i_p=4, i_m=8)
    a = reca.run(cfg)
    b = reca.run(cfg)
    assert a["metric"] == "accuracy"
    assert 0.0 <= a["test"] <= 1.0
    assert a == b


def test_sweep_and_errors():
    cfg = reca.default_config("sine_square")
    cfg["task"].update(num_waves=10, points_per_wave=10)
    cfg["training"].update(train=50, test=50)
    plan = {"experiment": cfg, "axes": {"proj_rules": [30, 90], "mem_rules": [16], "i_p": [4], "i_m": [8]},
            "trials": 2}
    out = reca.sweep(plan, workers=1)
    assert len(out["records"]) == 4
    assert all(not math.isnan(r["value"]) for r in out["records"])
    cfg["readout"] = {"scheme": "binned", "bins": 3}
    with pytest.raises(reca.ConfigError, match="bins must divide i_p"):
        reca.run(cfg)
