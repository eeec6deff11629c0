import math

import numpy as np
import pytest

import chirpex


def test_flip_condition():
    theta0 = chirpex.theta0_from_cot2(2.0)
    alpha = chirpex.solve_alpha(theta0)
    assert abs(alpha - 1.0472) < 1e-3
    u = chirpex.three_stage_propagator(theta0, alpha)
    assert u.shape == (3, 3)
    assert abs((u @ np.array([0.0, 0.0, 1.0]))[2]) < 1e-9
    assert abs(chirpex.sweep_rate_for(theta0, 1.0) - 2.70) < 0.01
    with pytest.raises(chirpex.DomainError):
        chirpex.solve_alpha(1.0)


def test_presets_and_config():
    assert chirpex.preset_names() == ["fig4a", "fig4b", "fig5"]
    c = chirpex.config({"preset": "fig4b", "grid": {"step_hz": 10000.0}})
    assert c["sequence"] == "chorus"
    assert c["grid"]["step_hz"] == 10000.0
    assert c["half_sweep_hz"] == 150000.0
    with pytest.raises(chirpex.ConfigError):
        chirpex.config({"preset": "fig4b", "bandwidth_hz": 200000.0})
    with pytest.raises(ValueError):
        chirpex.config("fig9")


def test_edge_residual_near_seven_degrees():
    r = chirpex.edge_residual(1000.0, 50000.0, 150000.0)
    assert r == pytest.approx(math.log(2.0) / 5.4, rel=1e-12)


def test_waveform_duration():
    w = chirpex.waveform("fig5")
    assert w["total_duration"] == pytest.approx(7.07e-3, abs=2e-5)
    assert len(w["t"]) == len(w["amplitude"]) == len(w["phase"])
    assert w["amplitude"][0] == 0.0  # tapered edge


def test_simulate_fig4b_coarse():
    r = chirpex.simulate({"preset": "fig4b", "grid": {"step_hz": 10000.0}}, threads=2)
    assert r["corrected"].shape == (11, 3)
    np.testing.assert_allclose(np.linalg.norm(r["raw"], axis=1), 1.0, atol=1e-9)
    assert r["metrics"]["min_mx"] >= 0.95
    assert r["metrics"]["max_abs_phase_dev_deg"] < r["predicted_edge_residual_deg"] + 5.0
    assert r["offsets_hz"][0] == pytest.approx(-50000.0)
    # thread count never changes results
    again = chirpex.simulate({"preset": "fig4b", "grid": {"step_hz": 10000.0}}, threads=1)
    assert np.array_equal(again["raw"], r["raw"])


def test_propagate_on_resonance():
    mx, my, mz = chirpex.propagate("fig4b", 0.0)
    assert math.hypot(mx, my) > 0.98
    assert abs(math.sqrt(mx * mx + my * my + mz * mz) - 1.0) < 1e-9


def test_predict_rows():
    rows = chirpex.predict("fig4b")
    assert rows[0]["excitation_rad"] == 0.0
    assert all(r["status"] == "ok" for r in rows)
    edge = rows[-1]
    assert edge["residual_rad"] == pytest.approx(edge["edge_residual_rad"], rel=1e-9)
