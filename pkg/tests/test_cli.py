import json

import pytest

from levydecay import QuadratureError, cli, models

REL = {"dim": 1, "profile": {"kind": "relativistic", "beta": 1, "m": 1}}
CAUCHY = {"dim": 1, "profile": {"kind": "pure_stable", "beta": 1}}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(tmp_path, command, cfg, *extra):
    out = tmp_path / "out"
    code = cli.main([command, "--config", write(tmp_path, cfg), "--out", str(out), *extra])
    return code, (out.read_text() if out.exists() else None)


def test_psi_csv(tmp_path):
    code, text = run(tmp_path, "psi", {"version": 1, "model": REL, "xi": [0, 1]})
    assert code == 0
    assert text.splitlines() == ["xi,psi,error", "0,0,0", "1,0.41421356237309515,0"]


def test_deterministic_output(tmp_path):
    cfg = {"version": 1, "model": CAUCHY, "t": 1.0, "points": {"start": 0, "stop": 4, "num": 5}}
    _, a = run(tmp_path, "heat", cfg)
    _, b = run(tmp_path, "heat", cfg, "--threads", "2")
    assert a == b and a.startswith("x,value,abs_error,flags\n")


def test_gamma_sweep(tmp_path):
    code, text = run(tmp_path, "gamma-sweep", {"version": 1, "model": REL, "alphas": [0.5, 2]})
    assert code == 0
    rows = [r.split(",") for r in text.splitlines()[1:]]
    assert float(rows[0][1]) == pytest.approx(0.75 ** 0.5) and float(rows[1][1]) == 1.0


def test_resolvent_both(tmp_path):
    cfg = {"version": 1, "model": CAUCHY, "alpha": 1.0, "points": [2.0, 5.0]}
    code, text = run(tmp_path, "resolvent", cfg, "--method", "both")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("x,value_freq,value_time,rel_diff")
    assert all(float(line.split(",")[3]) < 1e-4 for line in lines[1:])


def test_boundstate_zero_potential(tmp_path, capsys):
    cfg = {"version": 1, "model": REL,
           "potential": {"kind": "tabulated", "grid": [-1, 0, 1], "values": [0, 0, 0]}}
    code = cli.main(["boundstate", "--config", write(tmp_path, cfg)])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["bound_state"] is None


def test_kf_and_classify_json(tmp_path):
    model = {"dim": 1, "profile": {"kind": "tempered_stable", "beta": 1, "kappa": 1,
                                   "eta": 0.5, "delta": 0}}
    code, text = run(tmp_path, "kf", {"version": 1, "model": model, "r": [2, 8],
                                      "probes": [1, 5, 20]})
    data = json.loads(text)
    assert code == 0 and data["reports"][0]["kf"] > data["reports"][1]["kf"]
    assert "numpy" in data["versions"]
    code, text = run(tmp_path, "classify", {"version": 1, "model": REL})
    assert json.loads(text)["classification"]["class"] == "exponential"


@pytest.mark.parametrize("cfg", [
    {"model": REL, "xi": [1]},                                  # no version
    {"version": 2, "model": REL, "xi": [1]},                    # wrong version
    {"version": 1, "model": REL, "xi": [1], "extra": 0},        # unknown key
    {"version": 1, "model": {"dim": 1, "profile": {"kind": "pure_stable", "beta": 3}},
     "xi": [1]},                                                # domain error
])
def test_config_errors(tmp_path, cfg):
    assert run(tmp_path, "psi", cfg)[0] == 2


def test_unreadable_config(tmp_path):
    assert cli.main(["psi", "--config", str(tmp_path / "missing.json")]) == 2


def test_unsupported_profile_exit(tmp_path):
    assert run(tmp_path, "omega", {"version": 1, "model": CAUCHY, "xi": [0.5]})[0] == 4


def test_numeric_failure_writes_partial(tmp_path, monkeypatch):
    real = models.psi

    def flaky(model, xi, method="auto"):
        if xi > 1.5:
            raise QuadratureError("forced")
        return real(model, xi, method)

    monkeypatch.setattr(models, "psi", flaky)
    code, text = run(tmp_path, "psi", {"version": 1, "model": REL, "xi": [0, 1, 2]})
    assert code == 3 and text is None
    partial = (tmp_path / "out.partial").read_text().splitlines()
    assert partial == ["xi,psi,error", "0,0,0", "1,0.41421356237309515,0"]
