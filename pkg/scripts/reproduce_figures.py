"""Write the -EL arrow figures and text reports for every scenario.

    python3 scripts/reproduce_figures.py [--out figures] [--grid-points M]
"""

import argparse
from pathlib import Path

from pathgrad import scenarios
from pathgrad.svg import SvgSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--grid-points", type=int, default=None)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for sid in scenarios.ids():
        report = scenarios.run(sid, args.grid_points)
        (out / f"{sid}.svg").write_text(report.svg(SvgSpec()))
        (out / f"{sid}.txt").write_text(report.text())
        print(f"{sid:<14} {'PASS' if report.passed else 'FAIL'}  -> {out / sid}.svg")


if __name__ == "__main__":
    main()
