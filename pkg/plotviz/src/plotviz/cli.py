"""CLI: plotviz <csv> <json> <out.png> [--title T].

Exit codes: 0 success, 2 schema or file problems.
"""

import argparse
import sys

from .render import PlotSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render a contractlab sweep into a log-log rate plot")
    parser.add_argument("csv")
    parser.add_argument("summary_json")
    parser.add_argument("output_image")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    spec = PlotSpec(args.csv, args.summary_json, args.output_image, args.title)
    try:
        render(spec)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"plotviz: {exc}", file=sys.stderr)
        return 2
    print(args.output_image)
    return 0


if __name__ == "__main__":
    sys.exit(main())
