"""`render-fig` command-line entry point."""
from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render-fig",
        description="Render a figure from simulator CSV output.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="figure family to render")
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="CSV", help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default="", help="figure title")
    parser.add_argument("--label", dest="labels", action="append", default=[],
                        metavar="TEXT", help="panel label, one per input CSV")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          out=args.out, title=args.title,
                          labels=tuple(args.labels))
        path = render(spec)
    except (SchemaError, ValueError) as exc:
        print(f"render-fig: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
