import json
import os
import pathlib
import subprocess

import pytest

EXE = os.environ.get("FPCAV_EXE", "fpcav")
SOURCE = pathlib.Path(os.environ.get("FPCAV_SOURCE_DIR", pathlib.Path(__file__).parents[2]))


def run(*args, cwd, env=None, check=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    proc = subprocess.run([EXE, *map(str, args)], cwd=cwd, env=full_env,
                          capture_output=True, text=True)
    if check is not None:
        assert proc.returncode == check, proc.stderr
    return proc


def paper_config():
    return json.loads((SOURCE / "data" / "paper.json").read_text())


def write_config(path, doc):
    path.write_text(json.dumps(doc))
    return path


def test_default_config_is_bundled(tmp_path):
    a = run("cavity", "--json", cwd=tmp_path, check=0).stdout
    b = run("--config", SOURCE / "data" / "paper.json", "cavity", "--json", cwd=tmp_path, check=0).stdout
    assert a == b


def test_text_and_json_agree(tmp_path):
    report = json.loads(run("cavity", "--json", cwd=tmp_path, check=0).stdout)
    text = run("cavity", cwd=tmp_path, check=0).stdout
    values = dict(line.split("  ", 1) for line in text.splitlines())
    assert float(values["open.primary.waist"]) == pytest.approx(report["open"]["primary"]["waist"], rel=1e-5)
    assert float(values["contact.secondary.finesse"]) == pytest.approx(
        report["contact"]["secondary"]["finesse"], rel=1e-5)
    assert values["double_resonance.mode_order_1"] == "20"


def test_config_errors_exit_2(tmp_path):
    doc = paper_config()
    del doc["nanoparticle"]["diameter"]
    proc = run("--config", write_config(tmp_path / "bad.json", doc), "cavity", cwd=tmp_path, check=2)
    assert "/nanoparticle/diameter" in proc.stderr

    doc = paper_config()
    doc["schema_version"] = 2
    run("--config", write_config(tmp_path / "v2.json", doc), "cavity", cwd=tmp_path, check=2)

    doc = paper_config()
    doc["modes"]["contact"]["cavity_length"] = 40e-6
    run("--config", write_config(tmp_path / "unstable.json", doc), "plan", cwd=tmp_path, check=2)

    run("simulate", "raman", cwd=tmp_path, check=2)
    run("fit", "gaussian", SOURCE / "data" / "hole_series.csv", cwd=tmp_path, check=2)
    run("--no-such-flag", "cavity", cwd=tmp_path, check=2)
    run("--config", tmp_path / "missing.json", "cavity", cwd=tmp_path, check=2)


def test_input_errors_exit_3(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n2,oops\n")
    proc = run("fit", "linear", bad, cwd=tmp_path, check=3)
    assert "line 3" in proc.stderr
    run("fit", "linear", tmp_path / "absent.csv", cwd=tmp_path, check=3)
    run("fit", "sqrt_offset", SOURCE / "data" / "hole_series.csv", "--range", "0", "3",
        cwd=tmp_path, check=3)


def test_numerical_failure_exit_4(tmp_path):
    flat = tmp_path / "flat.csv"
    flat.write_text("x,y\n" + "".join(f"{i},5\n" for i in range(20)))
    run("fit", "lorentzian", flat, cwd=tmp_path, check=4)


def test_simulate_writes_csv_and_sidecar(tmp_path):
    run("simulate", "decay", "--out", "decay.csv", cwd=tmp_path, check=0)
    raw = (tmp_path / "decay.csv").read_bytes()
    assert raw.startswith(b"x,y\n")
    assert b"\r" not in raw
    meta = json.loads((tmp_path / "decay.csv.json").read_text())
    assert meta["kind"] == "decay"
    assert (tmp_path / "decay.csv.manifest.json").exists()

    fit = json.loads(run("fit", "exp_decay", "decay.csv", "--poisson", "--json",
                         cwd=tmp_path, check=0).stdout)
    lifetime = fit["parameters"]["lifetime"]
    assert lifetime == pytest.approx(meta["effective_lifetime"], abs=3 * fit["standard_errors"]["lifetime"])


def test_single_tooth_hole_is_flat(tmp_path):
    doc = paper_config()
    doc["simulate"]["hole"]["teeth"] = 1
    doc["simulate"]["hole"]["poisson"] = False
    cfg = write_config(tmp_path / "one.json", doc)
    run("--config", cfg, "simulate", "hole", "--out", "hole.csv", cwd=tmp_path, check=0)
    rows = (tmp_path / "hole.csv").read_text().splitlines()[1:]
    ys = {float(r.split(",")[1]) for r in rows}
    assert max(ys) == pytest.approx(min(ys), rel=1e-12)


def test_hole_series_linewidth(tmp_path):
    fit = json.loads(run("fit", "sqrt_offset", SOURCE / "data" / "hole_series.csv",
                         "--range", "0", "150", "--json", cwd=tmp_path, check=0).stdout)
    assert fit["parameters"]["gamma0"] == pytest.approx(3.3e6, abs=0.6e6)


def test_seed_controls_output(tmp_path):
    a = run("simulate", "ple", "--seed", "5", cwd=tmp_path, check=0).stdout
    b = run("simulate", "ple", "--seed", "5", cwd=tmp_path, check=0).stdout
    c = run("simulate", "ple", "--seed", "6", cwd=tmp_path, check=0).stdout
    assert a == b
    assert a != c


def test_thread_count_does_not_change_results(tmp_path):
    one = run("purcell", "--json", cwd=tmp_path, env={"FPCAV_THREADS": "1"}, check=0).stdout
    many = run("purcell", "--json", cwd=tmp_path, env={"FPCAV_THREADS": "6"}, check=0).stdout
    assert one == many


def test_plan_csv_and_replay(tmp_path):
    run("plan", "--out", "sweep.csv", "--json", cwd=tmp_path, check=0)
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "d_np_nm,f_rep_hz,mode,rate_cps,snr"
    assert {line.split(",")[2] for line in lines[1:]} == {"contact", "open_single", "open_double"}

    manifest = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
    assert manifest["command"] == "plan"
    original = (tmp_path / "sweep.csv").read_bytes()
    (tmp_path / "sweep.csv").unlink()
    proc = run("replay", "sweep.csv.manifest.json", cwd=tmp_path, check=0)
    assert "identical" in proc.stderr
    assert (tmp_path / "sweep.csv").read_bytes() == original


def test_replay_detects_changed_output(tmp_path):
    run("simulate", "saturation", "--out", "sat.csv", cwd=tmp_path, check=0)
    path = tmp_path / "sat.csv.manifest.json"
    manifest = json.loads(path.read_text())
    manifest["outputs"][0]["fnv1a"] = "0000000000000000"
    path.write_text(json.dumps(manifest))
    run("replay", path, cwd=tmp_path, check=4)
