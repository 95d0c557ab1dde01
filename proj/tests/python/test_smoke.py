import math

import numpy as np
import pytest

import ehd


def grid(n):
    x = np.asarray(ehd.nodes(n))
    return np.meshgrid(x, x, x, indexing="ij")


def test_norms_of_cosine():
    x1, _, _ = grid(16)
    f = np.cos(x1)
    assert ehd.lp_norm(f, math.inf) == pytest.approx(1.0, abs=1e-14)
    assert ehd.lp_norm(f, 2.0) ** 2 == pytest.approx(4 * math.pi**3, rel=1e-13)
    assert ehd.sobolev_norm(f, 1.0) ** 2 == pytest.approx(2 * 4 * math.pi**3, rel=1e-13)


def test_band_localizes_cos4():
    x1, _, _ = grid(32)
    f = np.cos(4 * x1)
    assert ehd.band_range(32) == (0, 4)
    assert np.max(np.abs(ehd.band(f, 2) - f)) < 1e-14
    assert np.max(np.abs(ehd.band(f, 1))) < 1e-14
    assert ehd.besov_norm(f, 0.0, math.inf, math.inf) == pytest.approx(1.0, abs=1e-14)


def test_leray_and_poisson():
    x1, x2, x3 = grid(16)
    u = (np.sin(x2), np.sin(x1) + np.cos(x3), np.sin(x1))
    p = ehd.leray_project(u)
    assert ehd.max_divergence(p) < 1e-12
    psi = ehd.solve_poisson(np.cos(2 * x1))
    assert np.max(np.abs(psi + np.cos(2 * x1) / 4)) < 1e-14


def test_criterion_exponents():
    d = ehd.criterion_exponents("PS_u", 6.0)
    assert d["q"] == pytest.approx(4.0)
    assert d["scaling_defect"] < 1e-12
    b = ehd.criterion_exponents("BESOV_ANISO", 3.0)
    assert b["q"] == pytest.approx(2.0) and b["r"] == pytest.approx(2.0)
    with pytest.raises(ehd.EhdError, match="EHD-E"):
        ehd.criterion_exponents("PS_u", 3.0)


def test_taylor_green_step_and_checkpoint(tmp_path):
    s = ehd.advance(ehd.taylor_green(16), 0.01, steps=10)
    exact = ehd.taylor_green(16, s["t"])
    assert s["t"] == pytest.approx(0.1)
    for a, b in zip(s["u"], exact["u"]):
        assert np.max(np.abs(a - b)) < 1e-10
    path = tmp_path / "s.ehds"
    ehd.write_checkpoint(path, s)
    r = ehd.read_checkpoint(path)
    assert r["step_index"] == s["step_index"] and r["t"] == s["t"]
    assert all(np.array_equal(a, b) for a, b in zip(r["u"], s["u"]))


def test_config_errors_are_collected():
    with pytest.raises(ehd.EhdError) as e:
        ehd.validate_config("grid_n = 12\ncfl = 2\n")
    msg = str(e.value)
    assert "EHD-E102" in msg and "grid_n" in msg and "cfl" in msg and "t_end" in msg


def test_run_returns_report(tmp_path):
    rep = ehd.run(f"grid_n = 16\nt_end = 0.05\ninitial_condition = taylor_green\noutput_dir = {tmp_path}\n")
    assert rep["format_version"] == ehd.REPORT_FORMAT_VERSION
    assert rep["run"]["status"] == "completed"
    assert (tmp_path / "report.json").exists()
    assert len(rep["criteria"]) == 4
