"""Command line entry point: dickelab-plot render --spec <json>."""

from __future__ import annotations

import argparse
import json
import sys

from .render import FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="dickelab-plot")
    sub = parser.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("render", help="render one figure from a JSON spec")
    rp.add_argument("--spec", required=True, help="path to the figure spec JSON")
    args = parser.parse_args(argv)

    with open(args.spec, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        out = render(FigureSpec.from_dict(data))
    except (SchemaError, FileNotFoundError) as exc:
        print(f"dickelab-plot: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
