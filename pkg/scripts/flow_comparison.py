"""Compare the L2 and H1 gradient flows on the scenarios that have flows.

For each start path, runs both metrics and reports iterations, final action,
final residual, how the run ended, and (for euclidean) the nodewise and
geometric distances to the segment, which separate parametrization drift from
genuine error.

    python3 scripts/flow_comparison.py [--max-iters 5000] [--trace-dir traces]
"""

import argparse
import time
from pathlib import Path

from pathgrad import scenarios
from pathgrad.flow import FlowError, FlowOptions, descend, write_trace_csv
from pathgrad.pathspace import FixedEndpointPath, sup_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-iters", type=int, default=5000)
    ap.add_argument("--trace-dir", default=None)
    args = ap.parse_args()
    tdir = Path(args.trace_dir) if args.trace_dir else None
    if tdir:
        tdir.mkdir(parents=True, exist_ok=True)
    print(f"{'scenario/start':<22}{'metric':>7}{'iters':>7}{'action':>20}{'residual':>12}{'end':>10}{'nodewise':>11}{'trace':>11}{'sec':>7}")
    for sid in scenarios.ids():
        s = scenarios.get(sid)
        if s.analysis_only or not s.flows:
            continue
        grid = s.grid()
        lag = s.lagrangian()
        for fs in s.flows:
            start = FixedEndpointPath(s.sample(fs.start, grid))
            for metric in ("l2", "h1"):
                t0 = time.perf_counter()
                try:
                    tr = descend(lag, start, FlowOptions(metric=metric, max_iters=args.max_iters))
                    end = "converged" if tr.converged else "max_iters"
                except FlowError as exc:
                    tr, end = exc.trace, "stalled"
                dt = time.perf_counter() - t0
                nodewise = trace = float("nan")
                if fs.target is not None:
                    target = s.sample(fs.target, grid)
                    nodewise = sup_distance(tr.final.path, target)
                    if target.dim > 1:
                        trace = scenarios.trace_distance(tr.final.path, target)
                print(
                    f"{sid + '/' + fs.start:<22}{metric:>7}{tr.iterations:>7}{tr.final_action:>20.12f}"
                    f"{tr.final_residual:>12.3e}{end:>10}{nodewise:>11.3e}{trace:>11.3e}{dt:>7.2f}"
                )
                if tdir:
                    write_trace_csv(tr, tdir / f"{sid}_{fs.start}_{metric}.csv")


if __name__ == "__main__":
    main()
