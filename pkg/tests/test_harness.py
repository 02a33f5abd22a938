import json
import os
import subprocess
import sys

import numpy as np
import pytest

from contractlab.harness import (SCHEMA, ConfigError, InsufficientDataError,
                                 parse_config_text, rate_fit, read_rows, run)


def _cfg(tmp_path, name, body):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


def _wn_config(tmp_path, out="wn", seed=7, extra=""):
    return _cfg(tmp_path, "wn.cfg", f"""
# tiny white-noise sweep
model = white-noise
alpha = 1.0
r = 2
n_list = 2^8..2^11
reps = 25
seed = {seed}
basis = haar
f0_jmax = 8
output = {tmp_path}/{out}
{extra}
""")


# ------------------------------------------------------------------ config

def test_parse_config_defaults_and_types():
    cfg = parse_config_text("model = white-noise\noutput = /tmp/x\nr = inf\n")
    assert cfg.model == "white-noise"
    assert cfg.r == float("inf")
    assert cfg.n_list[0] == 2 ** 10
    assert cfg.basis == "haar"


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ConfigError):
        parse_config_text("model = white-noise\noutput = /tmp/x\nbogus = 1\n")


def test_parse_config_requires_output():
    with pytest.raises(ConfigError):
        parse_config_text("model = white-noise\n")


def test_parse_config_rejects_non_dyadic_n():
    with pytest.raises(ConfigError):
        parse_config_text("model = histogram\noutput = /tmp/x\nn_list = 100,200\n")
    with pytest.raises(ConfigError):
        parse_config_text("model = histogram\noutput = /tmp/x\nn_list = 2^8,2^8\n")


def test_parse_config_rejects_bad_model():
    with pytest.raises(ConfigError):
        parse_config_text("model = mystery\noutput = /tmp/x\n")


def test_parse_n_list_range_syntax():
    cfg = parse_config_text(
        "model = histogram\noutput = /tmp/x\nn_list = 2^4..2^7\n")
    assert cfg.n_list == [16, 32, 64, 128]


# ---------------------------------------------------------------- rate fit

def _synthetic_rows(exponent=-1 / 3, scale=1.0):
    rows = []
    for k in range(10, 18):
        n = 2 ** k
        loss = scale * (n / np.log(n)) ** exponent
        rows.append({"n": n, "loss_median": loss, "loss_q90": 2 * loss})
    return rows


def test_rate_fit_exact_powerlaw():
    fit = rate_fit(_synthetic_rows())
    assert abs(fit.slope - (-1 / 3)) < 1e-9
    assert fit.r_squared > 1 - 1e-12
    assert fit.per_n_quantiles[2 ** 10]["median"] > 0


def test_rate_fit_constant_losses():
    rows = [{"n": 2 ** k, "loss_median": 0.5, "loss_q90": 0.5}
            for k in range(8, 14)]
    fit = rate_fit(rows)
    assert abs(fit.slope) < 1e-12
    assert fit.r_squared == 1.0


def test_rate_fit_scale_invariance():
    s1 = rate_fit(_synthetic_rows(scale=1.0)).slope
    s2 = rate_fit(_synthetic_rows(scale=137.0)).slope
    assert abs(s1 - s2) < 1e-12


def test_rate_fit_insufficient_data():
    with pytest.raises(InsufficientDataError):
        rate_fit(_synthetic_rows()[:3])


# -------------------------------------------------------------------- runs

def test_run_is_deterministic_bytes(tmp_path):
    p1 = parse_config_text(open(_wn_config(tmp_path, out="a")).read())
    p2 = parse_config_text(open(_wn_config(tmp_path, out="b")).read())
    c1, j1 = run(p1)
    c2, j2 = run(p2)
    csv_a = open(c1, "rb").read()
    csv_b = open(c2, "rb").read()
    assert csv_a == csv_b
    assert json.load(open(j1))["fit"] == json.load(open(j2))["fit"]


def test_run_worker_count_does_not_change_bytes(tmp_path, monkeypatch):
    cfg1 = parse_config_text(open(_wn_config(tmp_path, out="w1")).read())
    monkeypatch.delenv("CONTRACTLAB_WORKERS", raising=False)
    c1, _ = run(cfg1)
    monkeypatch.setenv("CONTRACTLAB_WORKERS", "4")
    cfg2 = parse_config_text(open(_wn_config(tmp_path, out="w2")).read())
    c2, _ = run(cfg2)
    assert open(c1, "rb").read() == open(c2, "rb").read()


def test_white_noise_summary_exponent(tmp_path):
    cfg = parse_config_text(
        f"model = white-noise\nalpha = 1\nr = inf\nn_list = 2^8..2^11\n"
        f"reps = 20\nf0_jmax = 8\noutput = {tmp_path}/wn\n")
    _, jpath = run(cfg)
    summary = json.load(open(jpath))
    assert abs(summary["theoretical_exponent"] - 1 / 3) < 1e-15
    assert summary["theoretical_exponent_exact"] == "1/3"
    assert summary["fit"]["slope"] < 0


def test_histogram_summary_exponent(tmp_path):
    cfg = parse_config_text(
        f"model = histogram\nalpha = 0.75\nr = 1\nn_list = 2^8..2^11\n"
        f"reps = 20\nf0_jmax = 8\noutput = {tmp_path}/hg\n")
    cpath, jpath = run(cfg)
    summary = json.load(open(jpath))
    assert abs(summary["theoretical_exponent"] - 0.3) < 1e-15
    assert summary["theoretical_exponent_exact"] == "3/10"
    rows = read_rows(cpath)
    assert [r["model"] for r in rows] == ["histogram"] * len(rows)


def test_csv_headers_are_schema_stable(tmp_path):
    configs = {
        "white-noise": f"model = white-noise\nn_list = 2^8,2^9,2^10,2^11\n"
                       f"reps = 10\nf0_jmax = 8\noutput = {tmp_path}/m1\n",
        "histogram": f"model = histogram\nalpha = 0.75\nr = 1\n"
                     f"n_list = 2^8,2^9,2^10,2^11\nreps = 10\nf0_jmax = 8\n"
                     f"output = {tmp_path}/m2\n",
        "test-power": f"model = test-power\nalpha = 1\nr = inf\n"
                      f"n_list = 2^8,2^9\nreps = 15\nf0_jmax = 8\n"
                      f"output = {tmp_path}/m3\n",
        "moment-check": f"model = moment-check\nalpha = 1\nr = 2\n"
                        f"n_list = 2^8,2^9\nreps = 20\nj_list = 2,3\n"
                        f"f0_jmax = 8\noutput = {tmp_path}/m4\n",
        "small-ball": f"model = small-ball\nalpha = 0.5\nr = inf\n"
                      f"n_list = 2^8\nreps = 120\neps_list = 2.0,1.0\n"
                      f"output = {tmp_path}/m5\n",
        "prior-sample": f"model = prior-sample\nalpha = 0.5\nr = 2\n"
                        f"n_list = 2^8\nreps = 5\nprior = uniform-series\n"
                        f"f0_jmax = 6\noutput = {tmp_path}/m6\n",
    }
    for model, text in configs.items():
        cpath, _ = run(parse_config_text(text))
        header = open(cpath, newline="").readline().strip()
        assert header == ",".join(SCHEMA[model]), model


def test_small_ball_run_flags_degenerate_cells(tmp_path):
    cfg = parse_config_text(
        f"model = small-ball\nalpha = 0.5\nn_list = 2^8\nreps = 150\n"
        f"eps_list = 3.0,1e-9\noutput = {tmp_path}/sb\n")
    _, jpath = run(cfg)
    summary = json.load(open(jpath))
    assert summary["degenerate_cells"] == [1e-9]
    assert summary["shape_fit"] is None


def test_prior_sample_released_ibm_reports_acceptance(tmp_path):
    cfg = parse_config_text(
        f"model = prior-sample\nalpha = 0.5\nn_list = 2^8\nreps = 4\n"
        f"prior = released-ibm\nibm_c = 2.0\ngrid_j = 8\n"
        f"output = {tmp_path}/ps\n")
    cpath, jpath = run(cfg)
    rows = read_rows(cpath)
    assert all(float(r["acceptance_rate"]) > 0 for r in rows)
    assert json.load(open(jpath))["mean_acceptance_rate"] > 0


# --------------------------------------------------------------------- CLI

def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "contractlab", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_cli_exponents_exact_table():
    code, out, _ = _cli("exponents", "--alpha", "1")
    assert code == 0
    lines = dict(line.split(": ") for line in out.strip().splitlines()[1:])
    assert lines["r = 1"] == "1/3"
    assert lines["r = 2"] == "1/3"
    assert lines["r = 4"] == "1/4"
    assert lines["r = inf"] == "1/6"


def test_cli_exponents_single_r():
    code, out, _ = _cli("exponents", "--alpha", "3/4", "--r", "1")
    assert code == 0
    assert out.strip().splitlines()[-1] == "r = 1: 3/10"


def test_cli_run_and_fit_roundtrip(tmp_path):
    cfg_path = _wn_config(tmp_path)
    code, out, err = _cli("run", cfg_path)
    assert code == 0, err
    csv_path, json_path = out.strip().splitlines()
    assert os.path.exists(csv_path) and os.path.exists(json_path)
    code, out, _ = _cli("fit", csv_path)
    assert code == 0
    refit = json.loads(out)
    summary = json.load(open(json_path))
    assert abs(refit["slope"] - summary["fit"]["slope"]) < 1e-12


def test_cli_config_error_exit_code(tmp_path):
    bad = _cfg(tmp_path, "bad.cfg", "model = white-noise\nn_list = 37\n"
                                    f"output = {tmp_path}/x\n")
    code, _, err = _cli("run", bad)
    assert code == 2
    assert "config error" in err


def test_cli_missing_config_file():
    code, _, _ = _cli("run", "/nonexistent/path.cfg")
    assert code == 2


def test_cli_fit_insufficient_rows(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("n,loss_median,loss_q90\r\n1024,0.5,0.6\r\n2048,0.4,0.5\r\n")
    code, _, err = _cli("fit", str(path))
    assert code == 3
    assert "model error" in err


def test_cli_model_error_exit_code(tmp_path):
    cfg = _cfg(tmp_path, "infeasible.cfg",
               f"model = prior-sample\nalpha = 0.5\nn_list = 2^8\nreps = 2\n"
               f"prior = released-ibm\nibm_c = 0.0001\ngrid_j = 8\n"
               f"output = {tmp_path}/inf\n")
    code, _, err = _cli("run", cfg)
    assert code == 3
    assert "model error" in err


def test_prior_spec_config_roundtrip():
    from contractlab.harness import prior_spec_from_config, prior_spec_to_config
    from contractlab.priors import ReleasedIBMPrior, UniformSeriesPrior

    spec = ReleasedIBMPrior(1.5, 0.8, 9)
    keys = prior_spec_to_config(spec)
    body = "model = prior-sample\noutput = /tmp/x\nn_list = 2^8\nr = 2\n" + \
        "".join(f"{k} = {v}\n" for k, v in keys.items())
    assert prior_spec_from_config(parse_config_text(body)) == spec

    spec2 = UniformSeriesPrior(0.5, 1.25, 7)
    keys2 = prior_spec_to_config(spec2)
    body2 = "model = prior-sample\noutput = /tmp/x\nn_list = 2^8\nr = 2\n" + \
        "".join(f"{k} = {v}\n" for k, v in keys2.items())
    back = prior_spec_from_config(parse_config_text(body2))
    assert (back.alpha, back.B, back.Jmax) == (0.5, 1.25, 7)


def test_histogram_rejects_alpha_above_one(tmp_path):
    cfg = parse_config_text(
        f"model = histogram\nalpha = 1.5\nr = 1\nn_list = 2^8..2^11\n"
        f"reps = 10\nf0_jmax = 8\noutput = {tmp_path}/bad\n")
    with pytest.raises(ConfigError):
        run(cfg)


def test_histogram_warns_on_side_condition(tmp_path):
    import warnings as _w

    cfg = parse_config_text(
        f"model = histogram\nalpha = 0.4\nr = 2\nn_list = 2^8..2^11\n"
        f"reps = 5\nf0_jmax = 8\noutput = {tmp_path}/warn\n")
    with _w.catch_warnings(record=True) as caught:
        _w.simplefilter("always")
        run(cfg)
    assert any("alpha > 1/2 or r = 1" in str(c.message) for c in caught)


def test_white_noise_summary_records_truncation_bias(tmp_path):
    cfg = parse_config_text(
        f"model = white-noise\nalpha = 1\nr = 2\nn_list = 2^8..2^11\n"
        f"reps = 10\nf0_jmax = 8\noutput = {tmp_path}/tb\n")
    _, jpath = run(cfg)
    bias = json.load(open(jpath))["metadata"]["truncation_bias_sup"]
    assert set(bias) == {"256", "512", "1024", "2048"}
    assert all(v >= 0 for v in bias.values())
