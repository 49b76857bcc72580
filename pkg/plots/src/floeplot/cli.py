"""CLI: render figures from a completed run directory.

    floeplot render --run DIR --figure {particle|concentration} --out PATH

Exit codes: 0 success, 2 bad arguments, 3 schema error in the run outputs.
"""

from __future__ import annotations

import argparse
import sys

from .artifacts import SchemaError, load_run
from .render import render_concentration_figure, render_particle_figure


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="floeplot")
    sub = ap.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render a figure from a run directory")
    render.add_argument("--run", required=True, help="completed run directory")
    render.add_argument("--figure", required=True,
                        choices=("particle", "concentration"))
    render.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)

    try:
        art = load_run(args.run)
        if args.figure == "particle":
            render_particle_figure(art, args.out)
        else:
            render_concentration_figure(art, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    print(args.out)
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
