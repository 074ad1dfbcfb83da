"""Solver against backward induction and Monte Carlo on the unit-claim fixture.

    python3 scripts/fixture_comparison.py --d 0 1 2 --u-max 15 --paths 200000
"""

from __future__ import annotations

import argparse
import csv
import sys

from gerbershiu import penalty as pen
from gerbershiu.gs_threshold import solve_threshold
from gerbershiu.model import ModelParams
from gerbershiu.oracle import dp_values, simulate
from gerbershiu.pmf import Pmf


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--d", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--u-max", type=int, default=15)
    ap.add_argument("--horizon", type=int, default=400)
    ap.add_argument("--paths", type=int, default=0, help="Monte Carlo paths per u (0 skips)")
    ap.add_argument("--mc-horizon", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    base = ModelParams(p=0.3, theta=0.5, alpha=0.1, nu=0.9, f=Pmf.point(1), g=Pmf.point(1))
    w = pen.const1()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["d", "u", "solver", "dp", "abs_diff", "mc", "mc_stderr"])
    for d in args.d:
        m = base.with_(d=d)
        sol = solve_threshold(m, w, max(args.u_max, 30))
        dp, _, _ = dp_values(m, w, args.u_max, args.horizon)
        for u in range(args.u_max + 1):
            mc = se = ""
            if args.paths:
                est = simulate(m, w, u, args.paths, args.seed, args.mc_horizon)
                mc, se = repr(est.value), repr(est.stderr)
            out.writerow([d, u, repr(float(sol.m[u])), repr(float(dp[u])),
                          f"{abs(sol.m[u] - dp[u]):.3e}", mc, se])


if __name__ == "__main__":
    main()
