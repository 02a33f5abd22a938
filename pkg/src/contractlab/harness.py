"""Batch experiment runner: config parsing, sweeps, fitting, CSV/JSON output.

Config files are flat ``key = value`` text ('#' comments).  Every run is a
deterministic function of the config including its seed: each sweep cell
draws from its own generator derived via seeding.derive_seed, rows are
sorted before writing, and CSV numbers use shortest-roundtrip formatting,
so reruns are byte-identical regardless of worker count.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import density_tests as dt
from . import histogram as hg
from . import priors as pr
from . import whitenoise as wn
from .rates import (contraction_exponent_exact, feasibility_flags,
                    make_schedule)
from .seeding import derive_seed, substream
from .spaces import (holder_coeff_radius, lr_norm, make_test_density,
                     make_test_function)
from .wavelets import (Basis, GridFunction, analyze, basis_by_name, project,
                       synthesize)

INF = float("inf")

MODELS = ("white-noise", "histogram", "test-power", "moment-check",
          "small-ball", "prior-sample")

SCHEMA = {
    "white-noise": ["model", "alpha", "r", "n", "eps_n", "delta_n", "J_n",
                    "gamma_power", "radius", "posterior_prob", "loss_median",
                    "loss_q90", "loss_mean", "seed"],
    "test-power": ["model", "alpha", "r", "n", "eps_n", "delta_n", "J_n",
                   "gamma_power", "kind", "j", "reps", "ratio", "U", "sigma2",
                   "bound", "typeI", "typeII", "M0", "skipped", "seed"],
    "small-ball": ["model", "alpha", "r", "n", "eps_n", "delta_n", "J_n",
                   "gamma_power", "eps", "estimate", "ci_lo", "ci_hi", "hits",
                   "reps", "degenerate", "seed"],
    "prior-sample": ["model", "alpha", "r", "n", "eps_n", "delta_n", "J_n",
                     "gamma_power", "prior", "draw", "sup_norm", "integral",
                     "holder_radius", "acceptance_rate", "seed"],
}
SCHEMA["histogram"] = SCHEMA["white-noise"]
SCHEMA["moment-check"] = SCHEMA["test-power"]


class ConfigError(ValueError):
    """Bad config file or option values (CLI exit code 2)."""


class ModelError(RuntimeError):
    """A model failed while running (CLI exit code 3)."""


class InsufficientDataError(ModelError):
    """Too few distinct sample sizes for a rate fit."""


@dataclass
class ExperimentConfig:
    model: str
    alpha: float
    r: float
    n_list: list[int]
    reps: int
    seed: int
    gamma_log_power: float
    basis: str
    output_path: str
    alpha_raw: str = "1"
    r_raw: str = "2"
    extras: dict = field(default_factory=dict)

    def basis_obj(self) -> Basis:
        return basis_by_name(self.basis)


def parse_r(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INF
    try:
        val = float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse r = {text!r}") from exc
    if val < 1:
        raise ConfigError("r must be >= 1 or inf")
    return val


def _parse_int_token(tok: str) -> int:
    tok = tok.strip()
    if "^" in tok:
        base, expo = tok.split("^", 1)
        return int(base) ** int(expo)
    return int(tok)


def parse_n_list(text: str) -> list[int]:
    """Comma-separated sizes; '2^a..2^b' expands to the dyadic range."""
    out: list[int] = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if ".." in tok:
            lo, hi = tok.split("..", 1)
            lo_n, hi_n = _parse_int_token(lo), _parse_int_token(hi)
            k = int(math.log2(lo_n))
            while 2 ** k <= hi_n:
                out.append(2 ** k)
                k += 1
        else:
            out.append(_parse_int_token(tok))
    if not out:
        raise ConfigError("n_list is empty")
    for n in out:
        if n < 2 or (n & (n - 1)) != 0:
            raise ConfigError(f"n_list entries must be dyadic (powers of 2), got {n}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError("n_list must be strictly increasing")
    return out


_KNOWN_KEYS = {
    "model", "alpha", "r", "n_list", "reps", "seed", "gamma_log_power",
    "basis", "output",
    # model-specific tuning knobs (see README)
    "profile", "f0_jmax", "f0_b", "c_res", "radius_mult", "jmax_offset",
    "j_list", "tal_x", "m0_quantile", "cal_reps", "alt_mult", "fixed_threshold",
    "fixed_alternative", "prior", "ibm_c", "grid_j", "eps_list", "workers",
    "p0_kind",
}


def parse_config_text(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = val
    for required in ("model", "output"):
        if required not in raw:
            raise ConfigError(f"missing required key {required!r}")
    model = raw["model"]
    if model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {model!r}")
    try:
        alpha_raw = raw.get("alpha", "1")
        r_raw = raw.get("r", "2")
        cfg = ExperimentConfig(
            model=model,
            alpha=float(alpha_raw),
            r=parse_r(r_raw),
            n_list=parse_n_list(raw.get("n_list", "2^10..2^14")),
            reps=int(raw.get("reps", "200")),
            seed=int(raw.get("seed", "0")),
            gamma_log_power=float(raw.get("gamma_log_power", "0")),
            basis=raw.get("basis", "haar"),
            output_path=raw["output"],
            alpha_raw=alpha_raw,
            r_raw=r_raw,
            extras={k: v for k, v in raw.items() if k not in
                    ("model", "alpha", "r", "n_list", "reps", "seed",
                     "gamma_log_power", "basis", "output")},
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.alpha <= 0:
        raise ConfigError("alpha must be > 0")
    if cfg.reps < 1:
        raise ConfigError("reps must be >= 1")
    cfg.basis_obj()  # validate the basis name early
    return cfg


def parse_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


@dataclass(frozen=True)
class RateFit:
    """OLS of log median loss on log(n / log n)."""

    slope: float
    intercept: float
    r_squared: float
    per_n_quantiles: dict
    theoretical_exponent: float | None = None

    def __post_init__(self):
        if not (-1e-9 <= self.r_squared <= 1 + 1e-9):
            raise ValueError("r_squared must lie in [0, 1]")


def rate_fit(rows, theoretical_exponent: float | None = None) -> RateFit:
    """Fit the log-log rate line through per-n median losses.

    Needs at least 4 distinct n values; the regressor log(n / log n)
    absorbs poly-log factors into the intercept.
    """
    per_n: dict[int, dict] = {}
    for row in rows:
        n = int(row["n"])
        per_n[n] = {"median": float(row["loss_median"]),
                    "q90": float(row["loss_q90"])}
    if len(per_n) < 4:
        raise InsufficientDataError(
            f"rate fit needs >= 4 distinct n, got {len(per_n)}")
    ns = np.array(sorted(per_n))
    med = np.array([per_n[n]["median"] for n in ns])
    if np.any(med <= 0):
        raise InsufficientDataError("median losses must be positive to fit logs")
    x = np.log(ns / np.log(ns))
    y = np.log(med)
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), residual, *_ = np.linalg.lstsq(design, y, rcond=None)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        ss_res = float(residual[0]) if residual.size else float(
            np.sum((y - design @ np.array([slope, intercept])) ** 2))
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return RateFit(float(slope), float(intercept), r2,
                   {int(n): per_n[int(n)] for n in ns}, theoretical_exponent)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value != value:
            return ""
        return repr(value)
    return str(value)


def write_csv(path: str, model: str, rows: list[dict]) -> None:
    cols = SCHEMA[model]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in cols])


def _workers(cfg: ExperimentConfig) -> int:
    env = os.environ.get("CONTRACTLAB_WORKERS")
    if env is not None:
        return max(1, int(env))
    return max(1, int(cfg.extras.get("workers", "1")))


def _map_cells(fn, args_list, workers: int):
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: fn(*a), args_list))


def _exact_exponent(cfg: ExperimentConfig, kind: str) -> tuple[float, str]:
    alpha = Fraction(cfg.alpha_raw)
    if kind == "estimation":
        exact = alpha / (2 * alpha + 1)
    else:
        r = INF if cfg.r == INF else Fraction(cfg.r_raw)
        exact = contraction_exponent_exact(alpha, r)
    return float(exact), str(exact)


def _run_contraction(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    basis = cfg.basis_obj()
    ex = cfg.extras
    profile = ex.get("profile", "seeded-random")
    f0_jmax = int(ex.get("f0_jmax", "12" if cfg.model == "white-noise" else "10"))
    f0_b = float(ex.get("f0_b", "1.0"))
    c_res = float(ex.get("c_res", "1.0"))
    radius_mult = float(ex.get("radius_mult", "2.0"))
    f0_seed = derive_seed(cfg.seed, cfg.model, "truth")

    if cfg.model == "white-noise":
        f0 = make_test_function(cfg.alpha, f0_b, f0_jmax, profile, basis, f0_seed)
        jmax_offset = int(ex.get("jmax_offset", "2"))

        def cell(n):
            rng = substream(cfg.seed, cfg.model, n, 0)
            return wn.white_noise_cell(f0, basis, cfg.alpha, cfg.r, n, cfg.reps,
                                       rng, cfg.gamma_log_power, c_res,
                                       radius_mult, jmax_offset)
        exponent_kind = "estimation"
        truth_radius = holder_coeff_radius(analyze(f0, basis), cfg.alpha)
    else:
        if cfg.alpha > 1:
            raise ConfigError("the histogram prior covers 0 < alpha <= 1")
        if not (cfg.alpha > 0.5 or cfg.r == 1):
            warnings.warn("histogram rate guarantees need alpha > 1/2 or r = 1; "
                          "proceeding anyway", stacklevel=2)
        p0 = make_test_density(cfg.alpha, f0_b, f0_jmax, profile, basis, f0_seed)

        def cell(n):
            rng = substream(cfg.seed, cfg.model, n, 0)
            return hg.contraction_cell(p0, cfg.alpha, cfg.r, n, cfg.reps, rng,
                                       cfg.gamma_log_power, c_res, radius_mult)
        exponent_kind = "contraction"
        truth_radius = None

    rows = _map_cells(cell, [(n,) for n in cfg.n_list], _workers(cfg))
    rows.sort(key=lambda row: row["n"])
    truncation_bias = None
    if cfg.model == "white-noise":
        truncation_bias = {
            str(row["n"]): float(np.max(np.abs(
                (f0 - project(f0, basis, min(row["prior_jmax"], f0.J))).values)))
            for row in rows
        }
    for row in rows:
        row["model"] = cfg.model
        row["seed"] = cfg.seed
    theo, theo_exact = _exact_exponent(cfg, exponent_kind)
    try:
        fit = rate_fit(rows, theo)
        fit_json = {"slope": fit.slope, "intercept": fit.intercept,
                    "r_squared": fit.r_squared,
                    "per_n_quantiles": {str(k): v for k, v in
                                        fit.per_n_quantiles.items()}}
    except InsufficientDataError:
        fit_json = None
    feas = {str(n): feasibility_flags(
        make_schedule(cfg.alpha, cfg.r, n, cfg.gamma_log_power, c_res))
        for n in cfg.n_list}
    summary = {
        "theoretical_exponent": theo,
        "theoretical_exponent_exact": theo_exact,
        "fit": fit_json,
        "feasibility": feas,
        "metadata": {"profile": profile, "f0_jmax": f0_jmax, "f0_b": f0_b,
                     "c_res": c_res, "radius_mult": radius_mult,
                     "truth_holder_radius": truth_radius,
                     "truncation_bias_sup": truncation_bias},
    }
    return rows, summary


def _uniform_density(J: int) -> GridFunction:
    return GridFunction(J, np.ones(2 ** J))


def _p0_for_tests(cfg: ExperimentConfig):
    ex = cfg.extras
    kind = ex.get("p0_kind", "uniform")
    grid_J = int(ex.get("f0_jmax", "10"))
    if kind == "uniform":
        return _uniform_density(grid_J)
    if kind == "test-density":
        seed = derive_seed(cfg.seed, cfg.model, "truth")
        return make_test_density(cfg.alpha, float(ex.get("f0_b", "1.0")),
                                 grid_J, ex.get("profile", "seeded-random"),
                                 cfg.basis_obj(), seed)
    raise ConfigError(f"p0_kind must be 'uniform' or 'test-density', got {kind!r}")


def _run_test_power(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    ex = cfg.extras
    p0 = _p0_for_tests(cfg)
    alt_mult = float(ex.get("alt_mult", "10.0"))
    quantile = float(ex.get("m0_quantile", "0.99"))
    cal_reps = int(ex.get("cal_reps", str(cfg.reps)))
    fixed_threshold = ex.get("fixed_threshold", "false").lower() == "true"
    fixed_alternative = ex.get("fixed_alternative", "false").lower() == "true"

    rows = []
    fixed_m0 = None
    fixed_alt = None
    for n in cfg.n_list:
        sched = make_schedule(cfg.alpha, cfg.r, n, cfg.gamma_log_power)
        rng = substream(cfg.seed, cfg.model, n, 0)
        if fixed_alternative and fixed_alt is not None:
            p1 = fixed_alt
        else:
            p1 = dt.make_sup_alternative(p0, alt_mult * sched.delta_n, sched.J_n)
            fixed_alt = p1
        if fixed_threshold and fixed_m0 is not None:
            M0 = fixed_m0
            t1 = dt.rejection_rate(p0, p0, cfg.r, sched, M0, cfg.reps, rng)
            t2 = 1.0 - dt.rejection_rate(p1, p0, cfg.r, sched, M0, cfg.reps, rng)
            report = dt.TestReport(M0, sched.delta_n, t1,
                                   pr.wilson_interval(round(t1 * cfg.reps), cfg.reps),
                                   t2,
                                   pr.wilson_interval(round(t2 * cfg.reps), cfg.reps),
                                   cfg.reps)
        else:
            report = dt.power_report(p0, p1, cfg.r, sched, cfg.reps, rng,
                                     quantile, cal_reps)
            fixed_m0 = report.M0
        rows.append({
            "model": cfg.model, "alpha": cfg.alpha, "r": cfg.r, "n": n,
            "eps_n": sched.eps_n, "delta_n": sched.delta_n, "J_n": sched.J_n,
            "gamma_power": cfg.gamma_log_power,
            "kind": dt.HAAR_PROJECTION, "j": sched.J_n, "reps": cfg.reps,
            "typeI": report.type1, "typeII": report.type2, "M0": report.M0,
            "skipped": False, "seed": cfg.seed,
        })
    t1s = [row["typeI"] for row in rows]
    t2s = [row["typeII"] for row in rows]
    summary = {
        "reports": {str(row["n"]): {"M0": row["M0"], "typeI": row["typeI"],
                                    "typeII": row["typeII"]} for row in rows},
        "monotone_typeI": all(b <= a + 1e-12 for a, b in zip(t1s, t1s[1:])),
        "monotone_typeII": all(b <= a + 1e-12 for a, b in zip(t2s, t2s[1:])),
        "metadata": {"alt_mult": alt_mult, "m0_quantile": quantile,
                     "cal_reps": cal_reps, "fixed_threshold": fixed_threshold,
                     "fixed_alternative": fixed_alternative},
    }
    return rows, summary


def _run_moment_check(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    ex = cfg.extras
    p0 = _p0_for_tests(cfg)
    j_list = [int(tok) for tok in ex.get("j_list", "2,3,4,5,6,7,8").split(",")]
    tal_x = float(ex.get("tal_x", str(math.log(100.0))))
    p0_norm = lr_norm(p0, cfg.r)

    def rng_for(j, n):
        return substream(cfg.seed, cfg.model, j, n)

    raw = dt.moment_ratio_check(p0, cfg.r, j_list, cfg.n_list, cfg.reps, rng_for)
    rows = []
    for cell in raw:
        U, sigma2, bound = dt.talagrand_envelope(
            dt.KernelSpec(cell["kind"], cell["j"]), cfg.r, p0_norm,
            cell["n"], tal_x)
        sched = make_schedule(cfg.alpha, cfg.r, cell["n"], cfg.gamma_log_power)
        rows.append({
            "model": cfg.model, "alpha": cfg.alpha, "r": cfg.r, "n": cell["n"],
            "eps_n": sched.eps_n, "delta_n": sched.delta_n, "J_n": sched.J_n,
            "gamma_power": cfg.gamma_log_power,
            "kind": cell["kind"], "j": cell["j"], "reps": cell["reps"],
            "ratio": cell["ratio"], "U": U, "sigma2": sigma2, "bound": bound,
            "skipped": cell["skipped"], "seed": cfg.seed,
        })
    kept = [row["ratio"] for row in rows if not row["skipped"]]
    summary = {
        "n_cells": len(rows),
        "n_skipped": sum(row["skipped"] for row in rows),
        "max_ratio": max(kept) if kept else None,
        "min_ratio": min(kept) if kept else None,
        "max_min_ratio": (max(kept) / min(kept)) if kept else None,
        "metadata": {"j_list": j_list, "tal_x": tal_x},
    }
    return rows, summary


def _run_small_ball(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    ex = cfg.extras
    grid_j = int(ex.get("grid_j", "8"))
    c = float(ex.get("ibm_c", "1.0"))
    eps_list = [float(tok) for tok in
                ex.get("eps_list", "0.5,0.35,0.25").split(",")]
    spec = pr.ReleasedIBMPrior(cfg.alpha, c, grid_j)
    center = GridFunction(grid_j, np.zeros(2 ** grid_j))
    rng = substream(cfg.seed, cfg.model, 0, 0)
    estimates = pr.small_ball_curve(spec, center, eps_list, cfg.reps, rng)
    n0 = cfg.n_list[0]
    sched = make_schedule(cfg.alpha, cfg.r, n0, cfg.gamma_log_power)
    rows = [{
        "model": cfg.model, "alpha": cfg.alpha, "r": cfg.r, "n": n0,
        "eps_n": sched.eps_n, "delta_n": sched.delta_n, "J_n": sched.J_n,
        "gamma_power": cfg.gamma_log_power,
        "eps": e, "estimate": est.estimate, "ci_lo": est.ci_low,
        "ci_hi": est.ci_high, "hits": est.hits, "reps": est.reps,
        "degenerate": est.degenerate, "seed": cfg.seed,
    } for e, est in zip(eps_list, estimates)]
    degenerate = [row["eps"] for row in rows if row["degenerate"]]
    shape = None
    if not degenerate:
        x = np.array([e ** (-1.0 / cfg.alpha) for e in eps_list])
        y = -np.log(np.array([row["estimate"] for row in rows]))
        slope, intercept = np.polyfit(x, y, 1)
        pred = slope * x + intercept
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum((y - pred) ** 2)) / ss_tot
        shape = {"slope": float(slope), "intercept": float(intercept),
                 "r_squared": r2}
    summary = {
        "estimates": {str(row["eps"]): row["estimate"] for row in rows},
        "degenerate_cells": degenerate,
        "shape_fit": shape,
        "metadata": {"grid_j": grid_j, "ibm_c": c, "exponent": 1.0 / cfg.alpha},
    }
    return rows, summary


def prior_spec_from_config(cfg: ExperimentConfig) -> pr.PriorSpec:
    """Build the configured prior; keys: prior, f0_b, f0_jmax, ibm_c, grid_j."""
    ex = cfg.extras
    which = ex.get("prior", "uniform-series")
    jmax = int(ex.get("f0_jmax", "8"))
    try:
        if which == "uniform-series":
            return pr.UniformSeriesPrior(cfg.alpha, float(ex.get("f0_b", "1.0")),
                                         jmax, cfg.basis_obj())
        if which == "diag-gaussian":
            return pr.DiagGaussianPrior(cfg.alpha, jmax, cfg.basis_obj())
        if which == "released-ibm":
            return pr.ReleasedIBMPrior(cfg.alpha, float(ex.get("ibm_c", "1.0")),
                                       int(ex.get("grid_j", "8")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown prior {which!r}")


def prior_spec_to_config(spec: pr.PriorSpec) -> dict[str, str]:
    """Config keys that reproduce the given prior under prior_spec_from_config."""
    if isinstance(spec, pr.UniformSeriesPrior):
        return {"prior": "uniform-series", "alpha": repr(spec.alpha),
                "f0_b": repr(spec.B), "f0_jmax": str(spec.Jmax),
                "basis": spec.basis.family if spec.basis.family == "haar"
                else f"db{spec.basis.order}"}
    if isinstance(spec, pr.DiagGaussianPrior):
        return {"prior": "diag-gaussian", "alpha": repr(spec.alpha),
                "f0_jmax": str(spec.Jmax),
                "basis": spec.basis.family if spec.basis.family == "haar"
                else f"db{spec.basis.order}"}
    if isinstance(spec, pr.ReleasedIBMPrior):
        return {"prior": "released-ibm", "alpha": repr(spec.alpha),
                "ibm_c": repr(spec.c), "grid_j": str(spec.grid_J)}
    raise TypeError(f"unknown prior spec {type(spec).__name__}")


def _run_prior_sample(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    ex = cfg.extras
    basis = cfg.basis_obj()
    which = ex.get("prior", "uniform-series")
    spec = prior_spec_from_config(cfg)
    n0 = cfg.n_list[0]
    sched = make_schedule(cfg.alpha, cfg.r, n0, cfg.gamma_log_power)
    rows = []
    acc_rates = []
    for i in range(cfg.reps):
        rng = substream(cfg.seed, cfg.model, n0, i)
        acc = ""
        if isinstance(spec, pr.UniformSeriesPrior):
            draw = pr.sample_uniform_series(spec, rng)
        elif isinstance(spec, pr.DiagGaussianPrior):
            draw = synthesize(pr.sample_diag_gaussian(spec, rng))
        else:
            stats: dict = {}
            try:
                draw = pr.sample_released_ibm(spec, rng, stats=stats)
            except pr.ConditioningInfeasibleError as exc:
                raise ModelError(str(exc)) from exc
            acc = stats["acceptance_rate"]
            acc_rates.append(acc)
        radius = holder_coeff_radius(analyze(draw, basis), cfg.alpha) \
            if which != "released-ibm" else ""
        rows.append({
            "model": cfg.model, "alpha": cfg.alpha, "r": cfg.r, "n": n0,
            "eps_n": sched.eps_n, "delta_n": sched.delta_n, "J_n": sched.J_n,
            "gamma_power": cfg.gamma_log_power,
            "prior": which, "draw": i,
            "sup_norm": float(np.max(np.abs(draw.values))),
            "integral": draw.integral(),
            "holder_radius": radius, "acceptance_rate": acc, "seed": cfg.seed,
        })
    summary = {
        "prior": which,
        "mean_sup_norm": float(np.mean([row["sup_norm"] for row in rows])),
        "mean_acceptance_rate": (float(np.mean(acc_rates)) if acc_rates else None),
        "metadata": {"spec": prior_spec_to_config(spec)},
    }
    return rows, summary


_RUNNERS = {
    "white-noise": _run_contraction,
    "histogram": _run_contraction,
    "test-power": _run_test_power,
    "moment-check": _run_moment_check,
    "small-ball": _run_small_ball,
    "prior-sample": _run_prior_sample,
}


def run(cfg: ExperimentConfig) -> tuple[str, str]:
    """Execute the configured sweep; returns (csv_path, json_path)."""
    try:
        rows, summary = _RUNNERS[cfg.model](cfg)
    except (ConfigError, ModelError):
        raise
    except pr.ConditioningInfeasibleError as exc:
        raise ModelError(str(exc)) from exc
    base = cfg.output_path
    if base.endswith(".csv"):
        base = base[:-4]
    os.makedirs(os.path.dirname(os.path.abspath(base)), exist_ok=True)
    csv_path, json_path = base + ".csv", base + ".json"
    write_csv(csv_path, cfg.model, rows)
    payload = {
        "model": cfg.model,
        "alpha": cfg.alpha,
        "r": "inf" if cfg.r == INF else cfg.r,
        "n_list": cfg.n_list,
        "reps": cfg.reps,
        "seed": cfg.seed,
        "gamma_log_power": cfg.gamma_log_power,
        "basis": cfg.basis,
    }
    payload.update(summary)
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
