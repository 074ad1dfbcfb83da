"""Characteristic functions of the d = 0 recursion and their root in (0, 1).

With c(z) = (1 - alpha) + alpha z:

    gamma1(z) = z - nu p (1 - theta) c(z) F(z) G(z)
    gamma2(z) = z - nu c(z) ((1 - p) + p F(z) G(z))

gamma1 is the denominator left after solving the auxiliary equation for its
generating function; gamma2 is what remains after substituting back, and its
root z0 pins the initial value. gamma2 carries no (1 - theta) factor: that is
what elimination produces, and it is the only form with
gamma2(0) = -nu (1 - alpha)(1 - p) and gamma2(1) = 1 - nu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .pmf import pgf_eval_array


class RootError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootResult:
    z0: float
    residual: float
    iterations: int
    bracket_width: float


def _dividend_factor(m: ModelParams, z):
    return (1.0 - m.alpha) + m.alpha * z


def gamma1(m: ModelParams, z):
    z = np.asarray(z, dtype=float)
    fg = pgf_eval_array(m.f, z) * pgf_eval_array(m.g, z)
    out = z - m.nu * m.p * (1.0 - m.theta) * _dividend_factor(m, z) * fg
    return float(out) if out.ndim == 0 else out


def gamma2(m: ModelParams, z):
    z = np.asarray(z, dtype=float)
    fg = pgf_eval_array(m.f, z) * pgf_eval_array(m.g, z)
    out = z - m.nu * _dividend_factor(m, z) * (m.q + m.p * fg)
    return float(out) if out.ndim == 0 else out


def find_root_z0(m: ModelParams, xtol: float = 1e-12, max_iter: int = 200) -> RootResult:
    """Bisection for the unique root of gamma2 in (0, 1)."""
    lo, hi = 0.0, 1.0
    g_lo, g_hi = gamma2(m, lo), gamma2(m, hi)
    if not (g_lo < 0.0 < g_hi):
        raise RootError(f"gamma2 has no sign change on [0, 1]: ({g_lo:.3g}, {g_hi:.3g})")
    it = 0
    while hi - lo > xtol:
        if it >= max_iter:
            raise RootError(f"bisection did not converge in {max_iter} iterations")
        mid = 0.5 * (lo + hi)
        if gamma2(m, mid) < 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    z0 = 0.5 * (lo + hi)
    return RootResult(z0=z0, residual=abs(gamma2(m, z0)), iterations=it, bracket_width=hi - lo)


def gamma_grid(m: ModelParams, n: int = 101) -> np.ndarray:
    """Rows (z, gamma1(z), gamma2(z)) on an even grid of ``n`` points over [0, 1]."""
    z = np.linspace(0.0, 1.0, n)
    return np.column_stack([z, gamma1(m, z), gamma2(m, z)])
