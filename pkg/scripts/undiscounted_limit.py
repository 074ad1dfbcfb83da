"""Ruin probability without discounting: recursion near nu = 1 next to simulation at nu = 1.

    python3 scripts/undiscounted_limit.py --u-max 5 --paths 100000
"""

from __future__ import annotations

import argparse

from gerbershiu.model import ModelParams
from gerbershiu.pmf import Pmf
from gerbershiu.quantities import undiscounted_ruin_probability


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--u-max", type=int, default=5)
    ap.add_argument("--paths", type=int, default=100_000)
    ap.add_argument("--horizon", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    m = ModelParams(p=0.3, theta=0.5, alpha=0.1, nu=0.9, f=Pmf.point(1), g=Pmf.point(1))
    res = undiscounted_ruin_probability(m, args.u_max, args.paths, args.seed, args.horizon)
    print(f"recursion at nu = {res['recursion_nu']}, simulation at nu = 1 over {res['mc_horizon']} periods")
    print("u,recursion,mc,mc_stderr")
    for row in zip(res["u"], res["recursion"], res["mc"], res["mc_stderr"]):
        print(",".join(repr(x) for x in row))


if __name__ == "__main__":
    main()
