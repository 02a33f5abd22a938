"""Log-log contraction plots from contractlab sweep outputs.

Reads the raw-row CSV and the JSON summary written by `contractlab run`
and renders one chart: median loss against n on log-log axes, the fitted
rate line, and a dashed reference line with the theoretical exponent.
Every number in the legend is taken verbatim from the JSON summary; the
only computation done here is drawing.
"""

from .render import PlotSpec, SchemaError, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "render"]
