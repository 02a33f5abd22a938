"""Command line front end.

    contractlab run <config-file>        execute a sweep, write CSV + JSON
    contractlab fit <csv>                refit the rate line from raw rows
    contractlab exponents --alpha A      exact contraction-exponent table

Exit codes: 0 success, 2 config/usage error, 3 model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .harness import (ConfigError, InsufficientDataError, ModelError,
                      parse_config, rate_fit, read_rows, run)
from .rates import contraction_exponent_exact

INF = float("inf")

_DEFAULT_R_GRID = ("1", "2", "4", "inf")


def _cmd_run(args) -> int:
    cfg = parse_config(args.config)
    csv_path, json_path = run(cfg)
    print(csv_path)
    print(json_path)
    return 0


def _cmd_fit(args) -> int:
    rows = read_rows(args.csv)
    rows = [row for row in rows if row.get("loss_median", "") != ""]
    fit = rate_fit(rows)
    print(json.dumps({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "per_n_quantiles": {str(k): v for k, v in fit.per_n_quantiles.items()},
    }, indent=2, sort_keys=True))
    return 0


def _parse_fraction_r(text: str):
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INF
    return Fraction(text)


def _cmd_exponents(args) -> int:
    alpha = Fraction(args.alpha)
    if alpha <= 0:
        raise ConfigError("alpha must be > 0")
    rs = [args.r] if args.r is not None else list(_DEFAULT_R_GRID)
    print(f"alpha = {alpha}")
    for rtext in rs:
        r = _parse_fraction_r(rtext)
        expo = contraction_exponent_exact(alpha, r)
        label = "inf" if r == INF else str(r)
        print(f"r = {label}: {expo}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="contractlab",
        description="Contraction-rate simulation sweeps on [0,1]")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a sweep from a config file")
    p_run.add_argument("config")
    p_run.set_defaults(fn=_cmd_run)

    p_fit = sub.add_parser("fit", help="refit the rate line from a sweep CSV")
    p_fit.add_argument("csv")
    p_fit.set_defaults(fn=_cmd_fit)

    p_exp = sub.add_parser("exponents",
                           help="exact L^r contraction exponent table")
    p_exp.add_argument("--alpha", required=True,
                       help="smoothness, as an exact fraction like 1 or 3/4")
    p_exp.add_argument("--r", default=None,
                       help="loss index (1, 2, 4/3, inf); default: a table")
    p_exp.set_defaults(fn=_cmd_exponents)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ModelError, InsufficientDataError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ZeroDivisionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
