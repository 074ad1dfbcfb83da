"""Ruin quantities obtained by specialising the penalty.

All values are discounted: E[nu^tau w(capital, deficit) 1{tau < inf} | S_0 = u].
The undiscounted probabilities are the nu -> 1 limits of these; see
:func:`undiscounted_ruin_probability`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import penalty
from .gs_threshold import solve_threshold
from .gs_zero import DEFAULT_U, GsSolution
from .model import ModelParams, validate
from .oracle import simulate

KINDS = ("ruin_probability", "deficit_distribution", "deficit_pgf",
         "surplus_before_ruin", "claim_causing_ruin")

READING = ("discounted: E[nu^tau * w * 1{tau < inf} | S_0 = u]; "
           "undiscounted quantities are the nu -> 1 limit")


@dataclass(frozen=True)
class QuantityRequest:
    kind: str
    y: int | None = None
    r: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown quantity {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("deficit_distribution", "claim_causing_ruin"):
            if self.y is None or self.y < 1:
                raise ValueError(f"{self.kind} needs an integer level y >= 1")
        if self.kind == "surplus_before_ruin" and (self.y is None or self.y < 0):
            raise ValueError("surplus_before_ruin needs an integer level y >= 0")
        if self.kind == "deficit_pgf" and (self.r is None or not 0.0 < self.r <= 1.0):
            raise ValueError("deficit_pgf needs r in (0, 1]")

    def penalty(self) -> penalty.Penalty:
        if self.kind == "ruin_probability":
            return penalty.const1()
        if self.kind == "deficit_distribution":
            return penalty.deficit_indicator(self.y)
        if self.kind == "deficit_pgf":
            return penalty.deficit_pgf(self.r)
        if self.kind == "surplus_before_ruin":
            return penalty.surplus_indicator(self.y)
        return penalty.total_claim_indicator(self.y)


@dataclass
class QuantityResult:
    values: np.ndarray
    solution: GsSolution
    request: QuantityRequest
    metadata: dict = field(default_factory=dict)


def compute_quantity(m: ModelParams, q: QuantityRequest, U: int = DEFAULT_U) -> QuantityResult:
    validate(m)
    sol = solve_threshold(m, q.penalty(), U)
    meta = {"kind": q.kind, "y": q.y, "r": q.r, "nu": m.nu, "d": m.d,
            "reading": READING, "trusted_u": sol.trusted_u}
    return QuantityResult(sol.m.copy(), sol, q, meta)


def undiscounted_ruin_probability(m: ModelParams, u_max: int, paths: int = 100_000,
                                  seed: int = 0, horizon: int = 2000,
                                  nu_limit: float = 1.0 - 1e-6) -> dict:
    """Ruin probability without discounting, reported two ways.

    The recursion needs nu < 1, so it is run at ``nu_limit``; the simulator
    runs at nu = 1 over a finite horizon (a lower bound on the ultimate
    probability).
    """
    rec = compute_quantity(m.with_(nu=nu_limit), QuantityRequest("ruin_probability"), u_max)
    undiscounted = m.with_(nu=1.0)
    mc = [simulate(undiscounted, penalty.const1(), u, paths, seed, horizon) for u in range(u_max + 1)]
    return {
        "u": list(range(u_max + 1)),
        "recursion": rec.values.tolist(),
        "recursion_nu": nu_limit,
        "mc": [e.value for e in mc],
        "mc_stderr": [e.stderr for e in mc],
        "mc_horizon": horizon,
    }
