"""Grid refinement of the EL closed-form errors and of the length constraint.

Prints one row per grid size with the max nodewise EL error for each scenario
that has a closed form, followed by observed convergence orders.

    python3 scripts/convergence_study.py [--grids 50 100 200 400 800]
"""

import argparse
import math

import numpy as np

from pathgrad import scenarios
from pathgrad.lagrangian import action, euclidean_length
from pathgrad.variation import el_path


def closed_form_errors(m):
    out = {}
    for sid in scenarios.ids():
        s = scenarios.get(sid)
        grid = s.grid(m)
        lag = s.lagrangian()
        for ex in s.expected:
            if ex.which != "L":
                continue
            want = np.asarray(ex.fn(grid.t), dtype=float).reshape(grid.n_nodes, -1)
            got = el_path(lag, s.sample(ex.path, grid)).samples
            out[f"{sid}/{ex.path}"] = float(np.max(np.abs(got - want)))
    s = scenarios.get("isoperimetric")
    grid = s.grid(m)
    out["isoperimetric length"] = abs(action(euclidean_length(), s.sample("gamma0", grid)) - 2 * math.pi)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[50, 100, 200, 400, 800])
    args = ap.parse_args()
    rows = {m: closed_form_errors(m) for m in args.grids}
    keys = list(rows[args.grids[0]])
    print("m".rjust(10) + "".join(k.rjust(24) for k in keys))
    for m, r in rows.items():
        print(f"{m:10d}" + "".join(f"{r[k]:24.3e}" for k in keys))
    print("\nobserved order log2(e(m)/e(2m)); values near roundoff are not meaningful")
    for m0, m1 in zip(args.grids, args.grids[1:]):
        cells = []
        for k in keys:
            a, b = rows[m0][k], rows[m1][k]
            cells.append(f"{math.log(a / b, m1 / m0):24.2f}" if a > 1e-13 and b > 1e-13 else " " * 21 + "n/a")
        print(f"{m0}->{m1}".rjust(10) + "".join(cells))


if __name__ == "__main__":
    main()
