"""Audit both collapsed d = 0 recursions against the one-step solver.

    python3 scripts/run_collapsed_audit.py --out results/collapsed_audit.json
"""

from __future__ import annotations

import argparse
import json

import numpy as np

from gerbershiu import penalty as pen
from gerbershiu.gs_zero import collapsed_audit
from gerbershiu.model import ModelParams
from gerbershiu.pmf import Pmf


def fixtures(n: int, seed: int):
    rng = np.random.default_rng(seed)
    base = ModelParams(p=0.3, theta=0.5, alpha=0.1, nu=0.9, f=Pmf.point(1), g=Pmf.point(1))
    yield base, pen.const1()
    kinds = [pen.const1(), pen.deficit_pgf(0.5), pen.surplus_indicator(1)]
    made = 1
    while made < n:
        f = Pmf(np.concatenate([[0.0], rng.dirichlet(np.ones(3))]))
        g = Pmf(np.concatenate([[0.0], rng.dirichlet(np.ones(2))]))
        m = base.with_(p=float(rng.uniform(0.05, 0.3)), theta=float(rng.uniform()),
                       alpha=float(rng.uniform(0, 0.3)), nu=float(rng.uniform(0.8, 0.99)), f=f, g=g)
        if m.loading_margin > 0.05:
            yield m, kinds[made % 3]
            made += 1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1010)
    ap.add_argument("--u-max", type=int, default=50)
    ap.add_argument("--out", default="results/collapsed_audit.json")
    args = ap.parse_args()
    reports = [collapsed_audit(m, w, args.u_max) for m, w in fixtures(args.n, args.seed)]
    with open(args.out, "w") as fh:
        json.dump(reports, fh, indent=2)
    for i, r in enumerate(reports):
        v = r["variants"]
        print(f"{i:2d} printed max diff {v['printed']['max_abs_diff']:.3e}  "
              f"corrected max diff {v['corrected']['max_abs_diff']:.3e}")


if __name__ == "__main__":
    main()
