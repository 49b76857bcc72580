#!/usr/bin/env python3
"""Run every bundled scenario into runs/<name>.

The paper-scale comparison (10000 floes, ~4 min) is skipped unless
--paper-scale is given.  Each run is fully determined by its scenario file;
rerunning overwrites byte-identical outputs.
"""

import argparse
import sys
from pathlib import Path

from floeflow.cli import main as floeflow_main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs", help="output root (default runs/)")
    ap.add_argument("--paper-scale", action="store_true",
                    help="also run the 10000-floe comparison")
    args = ap.parse_args(argv)

    names = ["fig2_constant_ocean", "fig3_vortex", "fig4_stochastic",
             "drag_free_energy", "fig7_compare"]
    if args.paper_scale:
        names.append("fig7_paper_scale")
    for name in names:
        cfg = SCENARIOS / f"{name}.ini"
        out = Path(args.out) / name
        print(f"== {name} -> {out}")
        code = floeflow_main(["--config", str(cfg), "--out", str(out)])
        if code != 0:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
