import csv
import json
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("n", "loss_median")


class SchemaError(ValueError):
    """Input files do not look like contractlab sweep output."""


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    summary_path: str
    output_path: str
    title: str | None = None


def _load_rows(csv_path: str) -> list[dict]:
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"CSV is missing required columns: "
                              f"{', '.join(missing)}")
        rows = [row for row in reader if row.get("loss_median", "") != ""]
    if not rows:
        raise SchemaError("CSV contains no data rows")
    return rows


def _load_summary(summary_path: str) -> dict:
    with open(summary_path, "r", encoding="utf-8") as fh:
        summary = json.load(fh)
    fit = summary.get("fit")
    if not fit or "slope" not in fit or "intercept" not in fit:
        raise SchemaError("JSON summary has no fitted rate line "
                          "(missing fit.slope / fit.intercept)")
    if "theoretical_exponent" not in summary:
        raise SchemaError("JSON summary is missing theoretical_exponent")
    return summary


def render(spec: PlotSpec) -> list[str]:
    """Write the chart and return the legend labels that were drawn."""
    rows = _load_rows(spec.csv_path)
    summary = _load_summary(spec.summary_path)
    ns = [int(row["n"]) for row in rows]
    med = [float(row["loss_median"]) for row in rows]
    slope = summary["fit"]["slope"]
    intercept = summary["fit"]["intercept"]
    theo = summary["theoretical_exponent"]

    # the fit lives in log(n / log n) coordinates; the reference line is
    # anchored at the first data point
    xs = [n / math.log(n) for n in ns]
    fit_line = [math.exp(intercept) * x ** slope for x in xs]
    ref_line = [med[0] * (x / xs[0]) ** (-theo) for x in xs]

    labels = [
        "posterior median loss",
        f"fit slope {slope:.3f} (R^2 {summary['fit']['r_squared']:.3f})",
        f"reference slope {-theo:.3f}",
    ]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(ns, med, "o", color="tab:blue", label=labels[0])
    ax.loglog(ns, fit_line, "-", color="tab:orange", label=labels[1])
    ax.loglog(ns, ref_line, "--", color="tab:gray", label=labels[2])
    ax.set_xlabel("n")
    ax.set_ylabel("median loss")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=120)
    plt.close(fig)
    return labels
