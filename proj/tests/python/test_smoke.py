import json
import math

import pytest

import fpcav


def test_geometry_functions():
    assert fpcav.mode_waist(580.8e-9, 25e-6, 5.808e-6) == pytest.approx(1.3970922327e-06, rel=1e-9)
    q1, q2, length, _ = fpcav.double_resonance(580.8e-9, 611e-9)
    assert (q1, q2) == (20, 19)
    assert length == pytest.approx(5.808e-6)
    assert fpcav.finesse(25, 200, 134) == pytest.approx(2 * math.pi / 359e-6)
    assert fpcav.snr(240, 20) == pytest.approx(53.6656, rel=1e-5)


def test_domain_errors_raise_value_error():
    with pytest.raises(ValueError):
        fpcav.mode_waist(580.8e-9, 25e-6, 30e-6)
    with pytest.raises(fpcav.NoSolutionError):
        fpcav.double_resonance(580.8e-9, 611e-9, 10)


def test_reports_are_dicts():
    cav = fpcav.cavity_report()
    assert cav["double_resonance"]["mode_order_1"] == 20
    pur = fpcav.purcell_report(threads=2)
    assert pur["ions"]["total_ions"] == 18118
    assert pur == fpcav.purcell_report(threads=1)


def test_config_override_and_error():
    cfg = fpcav.default_config()
    cfg["seed"] = 7
    x1, y1, meta = fpcav.simulate("decay", cfg)
    x2, y2, _ = fpcav.simulate("decay", json.dumps(cfg))
    assert meta["seed"] == 7
    assert y1 == y2
    del cfg["nanoparticle"]["diameter"]
    with pytest.raises(fpcav.ConfigError, match="/nanoparticle/diameter"):
        fpcav.cavity_report(cfg)


def test_simulate_and_fit_round_trip():
    x, y, meta = fpcav.simulate("decay")
    result = fpcav.fit("exp_decay", x, y, poisson=True)
    assert result["converged"]
    assert result["parameters"]["lifetime"] == pytest.approx(meta["effective_lifetime"], rel=0.02)


def test_fit_rejects_bad_input():
    with pytest.raises(fpcav.InputError):
        fpcav.fit("linear", [0, 0, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        fpcav.fit("gaussian", [0, 1, 2], [1, 2, 3])


def test_plan():
    csv, report = fpcav.plan(mode="contact")
    lines = csv.splitlines()
    assert lines[0] == "d_np_nm,f_rep_hz,mode,rate_cps,snr"
    assert len(lines) - 1 == report["rows"]
    assert report["modes"]["contact"]["max_effective_purcell"] > 5
