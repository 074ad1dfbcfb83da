"""Command-line front end.

    gerbershiu <command> --config run.yaml [options]

Commands: validate, solve, quantities, mu, oracle, simulate, compare, gamma,
audit. The config is a single YAML (or JSON) file:

    model:   {p | beta1: [a, b], theta | beta2, alpha | beta3, nu, d, f, g}
    penalty: {kind: const1 | zero | deficit_indicator | deficit_pgf |
              surplus_indicator | total_claim_indicator | joint_indicator, ...}
    run:     {command, u_max, horizon, paths, seed, workers, tolerance, out, format}

Command-line flags override ``run``. Exit status: 0 success, 1 invalid
input, 2 numerical failure or failed comparison.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import penalty as penalty_mod
from .gs_threshold import mu_joint, solve_threshold
from .gs_zero import DEFAULT_U, SolverError, collapsed_audit
from .model import ModelError, ModelParams, from_config, validate
from .oracle import StateSpaceError, dp_values, simulate
from .penalty import Penalty, SeriesTruncationError
from .quantities import READING, QuantityRequest, compute_quantity
from .roots import RootError, find_root_z0, gamma_grid

COMMANDS = ("validate", "solve", "quantities", "mu", "oracle", "simulate",
            "compare", "gamma", "audit")

HEADERS = {
    "solve": ["u", "m", "m_aux", "residual"],
    "solve_d": ["u", "m_d", "m_d_aux", "residual"],
    "quantities": ["u", "value"],
    "mu": ["v1", "v2", "mass"],
    "oracle": ["u", "value", "bound", "horizon"],
    "simulate": ["u", "value", "stderr", "paths", "seed", "horizon"],
    "compare": ["u", "solver", "dp", "dp_bound", "mc", "mc_stderr", "pass_dp", "pass_mc"],
    "gamma": ["z", "gamma1", "gamma2"],
}


@dataclass
class RunConfig:
    model: ModelParams
    penalty: Penalty
    run: dict = field(default_factory=dict)


def load_config(path: str | Path) -> dict:
    with open(path) as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict):
        raise ModelError("config", "top level must be a mapping")
    return cfg


def parse_config(cfg: dict) -> RunConfig:
    model_cfg = cfg.get("model", cfg)
    model = from_config(model_cfg)
    try:
        pen = penalty_mod.from_spec(cfg.get("penalty", {"kind": "const1"}))
    except ValueError as exc:
        raise ModelError("penalty", str(exc)) from None
    run = dict(cfg.get("run", {}))
    return RunConfig(model, pen, run)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return repr(float(x))


def _emit(rows, header, fmt: str, out) -> None:
    if fmt == "jsonl":
        for row in rows:
            rec = {k: (v.item() if hasattr(v, "item") else v) for k, v in zip(header, row)}
            out.write(json.dumps(rec, sort_keys=False) + "\n")
    else:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gerbershiu", description=__doc__.split("\n")[0])
    ap.add_argument("command_pos", nargs="?", choices=COMMANDS, metavar="command",
                    help=f"one of {', '.join(COMMANDS)}")
    ap.add_argument("--command", choices=COMMANDS)
    ap.add_argument("--config", required=True)
    ap.add_argument("--u-max", type=int)
    ap.add_argument("--u", type=int, help="start level for simulate")
    ap.add_argument("--kind")
    ap.add_argument("--y", type=int)
    ap.add_argument("--r", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--paths", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--horizon", type=int)
    ap.add_argument("--points", type=int, help="grid size for gamma")
    ap.add_argument("--tolerance", type=float)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "jsonl"))
    return ap


def _settings(args, run: dict) -> dict:
    s = {
        "command": run.get("command"),
        "u_max": run.get("u_max", 20),
        "u": run.get("u", 0),
        "horizon": run.get("horizon", 400),
        "paths": run.get("paths", 0),
        "seed": run.get("seed", 0),
        "workers": run.get("workers", 1),
        "points": run.get("points", 101),
        "tolerance": float(run.get("tolerance", 1e-8)),
        "out": run.get("out"),
        "format": run.get("format", "csv"),
        "kind": run.get("kind"),
        "y": run.get("y"),
        "r": run.get("r"),
    }
    for key in ("u_max", "u", "horizon", "paths", "seed", "workers", "points", "tolerance",
                "out", "format", "kind", "y", "r"):
        v = getattr(args, key)
        if v is not None:
            s[key] = v
    s["command"] = args.command_pos or args.command or s["command"]
    return s


def _run(cfg: RunConfig, s: dict, out) -> int:
    m, w, cmd, fmt = cfg.model, cfg.penalty, s["command"], s["format"]
    if cmd is None:
        raise ModelError("command", "no command given")
    validate(m)
    U = int(s["u_max"])
    if cmd == "validate":
        _emit([(m.loading_margin, find_root_z0(m).z0)], ["loading_margin", "z0"], fmt, out)
        return 0
    if cmd == "solve":
        sol = solve_threshold(m, w, U)
        res = np.concatenate([np.maximum(np.abs(sol.residual_m), np.abs(sol.residual_aux)), [0.0]])
        rows = [(u, sol.m[u], sol.m_aux[u], res[u]) for u in range(U + 1)]
        _emit(rows, HEADERS["solve_d" if m.d else "solve"], fmt, out)
        return 0
    if cmd == "quantities":
        kind = s["kind"] or "ruin_probability"
        y = None if s["y"] is None else int(s["y"])
        r = None if s["r"] is None else float(s["r"])
        try:
            req = QuantityRequest(kind, y, r)
        except ValueError as exc:
            raise ModelError("quantity", str(exc)) from None
        res = compute_quantity(m, req, U)
        if fmt == "jsonl":
            out.write(json.dumps({"metadata": {**res.metadata, "reading": READING}}) + "\n")
        _emit([(u, res.values[u]) for u in range(U + 1)], HEADERS["quantities"], fmt, out)
        return 0
    if cmd == "mu":
        _emit(list(mu_joint(m.with_(d=0)).rows()), HEADERS["mu"], fmt, out)
        return 0
    if cmd == "oracle":
        plain, _, bound = dp_values(m, w, U, int(s["horizon"]))
        _emit([(u, plain[u], bound, s["horizon"]) for u in range(U + 1)], HEADERS["oracle"], fmt, out)
        return 0
    if cmd == "simulate":
        paths = int(s["paths"]) or 100_000
        est = simulate(m, w, int(s["u"]), paths, int(s["seed"]), int(s["horizon"]),
                       workers=int(s["workers"]))
        _emit([(s["u"], est.value, est.stderr, paths, s["seed"], s["horizon"])],
              HEADERS["simulate"], fmt, out)
        return 0
    if cmd == "compare":
        return _compare(m, w, U, s, out)
    if cmd == "gamma":
        _emit([tuple(r) for r in gamma_grid(m, int(s["points"]))], HEADERS["gamma"], fmt, out)
        return 0
    if cmd == "audit":
        if m.d != 0:
            raise ModelError("d", "audit compares d = 0 recursions")
        out.write(json.dumps(collapsed_audit(m, w, U, float(s["tolerance"])), indent=2) + "\n")
        return 0
    raise ModelError("command", f"unknown command {cmd!r}")


def _compare(m, w, U, s, out) -> int:
    sol = solve_threshold(m, w, max(U, DEFAULT_U // 4))
    plain, _, bound = dp_values(m, w, U, int(s["horizon"]))
    err = sol.error_bound()
    paths = int(s["paths"])
    tol = float(s["tolerance"])
    rows = []
    ok = True
    for u in range(U + 1):
        pass_dp = abs(sol.m[u] - plain[u]) <= tol + bound + err[u]
        mc = se = None
        pass_mc = True
        if paths > 0:
            est = simulate(m, w, u, paths, int(s["seed"]), int(s["horizon"]), int(s["workers"]))
            mc, se = est.value, est.stderr
            pass_mc = abs(est.value - plain[u]) <= 3.0 * se + bound
        ok &= bool(pass_dp and pass_mc)
        rows.append((u, sol.m[u], plain[u], bound, mc, se, bool(pass_dp), bool(pass_mc)))
    _emit(rows, HEADERS["compare"], s["format"], out)
    return 0 if ok else 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(load_config(args.config))
        s = _settings(args, cfg.run)
        if s["out"]:
            with open(s["out"], "w", newline="") as out:
                return _run(cfg, s, out)
        return _run(cfg, s, sys.stdout)
    except (ModelError, FileNotFoundError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, RootError, SeriesTruncationError, StateSpaceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
