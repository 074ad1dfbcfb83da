"""Gerber-Shiu function for the surplus process with and without a pending by-claim.

Notation used below: q = 1 - p, beta = 1 - alpha, h = f*g, and for capital c

    Cm(c) = q m(c) + p theta (m*h)(c) + p (1-theta) (ma*f)(c) + p A(c)
    Ca(c) = q (m*g)(c) + p theta (m*h*g)(c) + p (1-theta) (ma*h)(c) + B(c)

Conditioning on the first period, with a_u = alpha * [u >= d],

    m(u)  = nu [(1 - a_u) Cm(u + 1) + a_u Cm(u)]
    ma(u) = nu [(1 - a_u) Ca(u + 1) + a_u Ca(u)]

Because claim sizes are at least 1, ma(u) is explicit in m(0..u), ma(0..u-1)
and the first equation can be solved for m(u + 1). This one-step system is
the reference; everything else is checked against its residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, validate
from .penalty import Penalty, PenaltySequences, build_sequences
from .pmf import convolve, pgf_eval
from .roots import RootResult, find_root_z0, gamma1

DEFAULT_U = 200
TRUST_TOL = 1e-8
_EPS = np.finfo(float).eps


class SolverError(RuntimeError):
    """Numerical failure: singular denominators, bad residuals, conditioning."""


@dataclass
class GsSolution:
    m: np.ndarray
    m_aux: np.ndarray
    z0: RootResult | None
    error_budget: float
    method: str
    d: int = 0
    residual_m: np.ndarray = field(default_factory=lambda: np.zeros(0))
    residual_aux: np.ndarray = field(default_factory=lambda: np.zeros(0))
    # growth of an initial-value perturbation of size 1 under the upward recursion
    amplification: np.ndarray = field(default_factory=lambda: np.zeros(0))
    trusted_u: int = 0
    info: dict = field(default_factory=dict)

    @property
    def U(self) -> int:
        return self.m.size - 1

    @property
    def max_residual(self) -> float:
        r = np.concatenate([np.abs(self.residual_m), np.abs(self.residual_aux)])
        return float(r.max()) if r.size else 0.0

    def error_bound(self) -> np.ndarray:
        """Per-u error estimate: initial-value error and rounding carried by the
        recursion's amplification."""
        scale = max(1.0, float(np.max(np.abs(self.m[: self.trusted_u + 1]), initial=0.0)))
        return self.amplification * (self.error_budget + 64 * _EPS * scale)


@dataclass(frozen=True)
class _Kernels:
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    hg: np.ndarray


def _kernels(m: ModelParams) -> _Kernels:
    fg = convolve(m.f, m.g)
    return _Kernels(m.f.masses, m.g.masses, fg.masses, convolve(fg, m.g).masses)


def _conv_at(x: np.ndarray, kernel: np.ndarray, c: int) -> float:
    """``sum_{k>=1} kernel[k] x[c - k]`` (kernel mass at 0 never matters here)."""
    top = min(c, kernel.size - 1)
    if top < 1:
        return 0.0
    return float(np.dot(kernel[1 : top + 1], x[c - top : c][::-1]))


class OneStep:
    """Evaluates the continuation terms Cm, Ca for one model and penalty."""

    def __init__(self, model: ModelParams, A: np.ndarray, B: np.ndarray):
        self.model = model
        self.k = _kernels(model)
        self.A = A
        self.B = B

    def _seq(self, s: np.ndarray, c: int) -> float:
        return float(s[c]) if c < s.size else 0.0

    def rest_m(self, m, ma, c):
        """Cm(c) without the q m(c) term."""
        mdl, k = self.model, self.k
        return (mdl.p * mdl.theta * _conv_at(m, k.h, c)
                + mdl.p * (1.0 - mdl.theta) * _conv_at(ma, k.f, c)
                + mdl.p * self._seq(self.A, c))

    def cm(self, m, ma, c):
        return self.model.q * m[c] + self.rest_m(m, ma, c)

    def ca(self, m, ma, c):
        mdl, k = self.model, self.k
        return (mdl.q * _conv_at(m, k.g, c)
                + mdl.p * mdl.theta * _conv_at(m, k.hg, c)
                + mdl.p * (1.0 - mdl.theta) * _conv_at(ma, k.h, c)
                + self._seq(self.B, c))

    def div_prob(self, u: int) -> float:
        return self.model.alpha if u >= self.model.d else 0.0

    def aux_value(self, m, ma, u):
        a = self.div_prob(u)
        return self.model.nu * ((1.0 - a) * self.ca(m, ma, u + 1) + a * self.ca(m, ma, u))

    def next_m(self, m, ma, u):
        """Solve the m(u) equation for m(u + 1)."""
        mdl = self.model
        a = self.div_prob(u)
        denom = (1.0 - a) * mdl.q
        if denom == 0.0:
            raise SolverError("upward recursion needs p < 1 and alpha < 1")
        num = m[u] / mdl.nu - a * self.cm(m, ma, u) - (1.0 - a) * self.rest_m(m, ma, u + 1)
        return num / denom

    def march(self, m: np.ndarray, ma: np.ndarray, start: int) -> None:
        """Fill m[start+1:], ma[start:] in place given m[:start+1], ma[:start]."""
        U = m.size - 1
        for u in range(start, U):
            ma[u] = self.aux_value(m, ma, u)
            m[u + 1] = self.next_m(m, ma, u)
        ma[U] = self.aux_value(m, ma, U)

    def residuals(self, m, ma):
        """Residuals of both one-step equations for u = 0..U-1."""
        U = m.size - 1
        nu = self.model.nu
        rm = np.empty(U)
        ra = np.empty(U)
        for u in range(U):
            a = self.div_prob(u)
            rm[u] = m[u] - nu * ((1.0 - a) * self.cm(m, ma, u + 1) + a * self.cm(m, ma, u))
            ra[u] = ma[u] - self.aux_value(m, ma, u)
        return rm, ra


def _amplification(model: ModelParams, U: int, start_values: int) -> np.ndarray:
    """Running max of |m_hom(u)| over unit perturbations of the initial values."""
    step = OneStep(model, np.zeros(1), np.zeros(1))
    amp = np.zeros(U + 1)
    for j in range(start_values + 1):
        m = np.zeros(U + 1)
        ma = np.zeros(U + 1)
        m[j] = 1.0
        step.march(m, ma, start_values)
        amp = np.maximum(amp, np.maximum.accumulate(np.maximum(np.abs(m), np.abs(ma))))
    return amp


def _trusted(amp: np.ndarray, budget: float, scale: float, tol: float) -> int:
    err = amp * (budget + 64 * _EPS * max(scale, 1.0))
    ok = np.flatnonzero(err > tol)
    return int(ok[0] - 1) if ok.size else amp.size - 1


def initial_value_from_sequences(model: ModelParams, seqs: PenaltySequences) -> tuple[float, float]:
    """m(0) from the root z0 and the penalty series, plus an error bound.

    m(0) = (p/q) {[1 + z0 alpha/(1-alpha)] A~(z0) - A(0)}
         + (p/q) nu (1-theta)(1-alpha) F(z0) [1 + z0 alpha/(1-alpha)] / gamma1(z0)
           * {[1 + z0 alpha/(1-alpha)] B~(z0) - B(0)}
    """
    p, q, theta, alpha, nu = model.p, model.q, model.theta, model.alpha, model.nu
    if p == 0.0 or seqs.sup_bound == 0.0:
        return 0.0, 0.0
    z0 = seqs.z0
    beta = 1.0 - alpha
    lift = 1.0 + z0 * alpha / beta
    g1 = gamma1(model, z0)
    if g1 == 0.0:
        raise SolverError(f"gamma1 vanishes at z0 = {z0!r}")
    coupling = nu * (1.0 - theta) * beta * pgf_eval(model.f, z0) * lift / g1
    m0 = (p / q) * (lift * seqs.A_tilde - seqs.A[0]) \
        + (p / q) * coupling * (lift * seqs.B_tilde - seqs.B[0])
    series = seqs.series_error + seqs.pmf_error / (1.0 - z0)
    err = (p / q) * (lift * series + seqs.pmf_error) * (1.0 + abs(coupling))
    return float(m0), float(err)


def initial_value_m0(model: ModelParams, w: Penalty, U: int = DEFAULT_U) -> float:
    validate(model)
    root = find_root_z0(model)
    return initial_value_from_sequences(model, build_sequences(model, w, U, root.z0))[0]


def _check_solvable(model: ModelParams, U: int) -> None:
    validate(model)
    if U < 0:
        raise ValueError("U must be nonnegative")
    if model.p >= 1.0 or model.alpha >= 1.0:
        raise SolverError("degenerate model: p = 1 or alpha = 1")


def solve(model: ModelParams, w: Penalty, U: int = DEFAULT_U,
          trust_tol: float = TRUST_TOL) -> GsSolution:
    """m(0..U) and m_aux(0..U) for dividend threshold 0."""
    _check_solvable(model, U)
    if model.d != 0:
        raise ValueError("gs_zero.solve handles d = 0; use gs_threshold.solve_threshold")
    root = find_root_z0(model)
    seqs = build_sequences(model, w, U, root.z0)
    m0, m0_err = initial_value_from_sequences(model, seqs)
    step = OneStep(model, seqs.A, seqs.B)
    m = np.zeros(U + 1)
    ma = np.zeros(U + 1)
    m[0] = m0
    step.march(m, ma, 0)
    rm, ra = step.residuals(m, ma)
    budget = m0_err + seqs.pmf_error
    amp = _amplification(model, U, 0)
    return GsSolution(
        m=m, m_aux=ma, z0=root, error_budget=budget, method="one-step", d=0,
        residual_m=rm, residual_aux=ra, amplification=amp,
        trusted_u=_trusted(amp, budget, w.sup_bound, trust_tol),
    )


def solve_collapsed(model: ModelParams, w: Penalty, U: int = DEFAULT_U,
                    variant: str = "printed", trust_tol: float = TRUST_TOL) -> GsSolution:
    """m(0..U) from the recursion in m alone obtained by eliminating m_aux.

    ``variant="printed"`` applies the alpha**2 (f * .)(u) term to the A
    sequence, as the recursion is usually stated; ``"corrected"`` applies it
    to B, which is what the elimination actually produces.
    m_aux is not produced by this route and is returned as NaN.
    """
    if variant not in ("printed", "corrected"):
        raise ValueError("variant must be 'printed' or 'corrected'")
    _check_solvable(model, U)
    if model.d != 0:
        raise ValueError("collapsed recursion is only defined for d = 0")
    root = find_root_z0(model)
    seqs = build_sequences(model, w, U + 2, root.z0)
    m0, m0_err = initial_value_from_sequences(model, seqs)
    p, q, theta, alpha, nu = model.p, model.q, model.theta, model.alpha, model.nu
    beta = 1.0 - alpha
    k = _kernels(model)
    f, h = k.f, k.h
    A, B = seqs.A, seqs.B
    last_term = A if variant == "printed" else B

    def full_conv(x, kernel, n):
        # sum_{k=0}^{n} kernel[k] x[n-k]
        top = min(n, kernel.size - 1)
        return float(np.dot(kernel[: top + 1], x[n - top : n + 1][::-1]))

    def at(s, n):
        return float(s[n]) if 0 <= n < s.size else 0.0

    m = np.zeros(U + 1)
    m[0] = m0
    for u in range(U):
        acc = (1.0 - nu * alpha * q) * m[u]
        acc -= nu * p * (beta * full_conv(m, h, u + 1) + alpha * full_conv(m, h, u))
        # nu p^2 (1-theta) * alpha / (p (1-theta)) simplifies to nu p alpha
        acc -= nu * p * (alpha * A[u] + beta * A[u + 1])
        acc += nu ** 2 * p ** 2 * (1.0 - theta) * (
            2.0 * alpha * beta * full_conv(A, h, u + 1)
            + alpha ** 2 * full_conv(A, h, u)
            + beta ** 2 * full_conv(A, h, u + 2))
        acc -= nu ** 2 * p * (1.0 - theta) * (
            alpha ** 2 * full_conv(last_term, f, u)
            + beta ** 2 * full_conv(B, f, u + 2)
            + 2.0 * alpha * beta * full_conv(B, f, u + 1))
        h_pair = beta * at(h, u + 2) + alpha * at(h, u + 1)
        f_pair = beta * at(f, u + 2) + alpha * at(f, u + 1)
        acc -= nu ** 2 * beta * q * (1.0 - theta) * p * h_pair * m0
        acc -= nu ** 2 * p ** 2 * (1.0 - theta) * beta * h_pair * A[0]
        acc += nu ** 2 * p * (1.0 - theta) * beta * f_pair * B[0]
        m[u + 1] = acc / (nu * q * beta)
    budget = m0_err + seqs.pmf_error
    amp = _amplification(model, U, 0)
    return GsSolution(
        m=m, m_aux=np.full(U + 1, np.nan), z0=root, error_budget=budget,
        method=f"collapsed-{variant}", d=0, amplification=amp,
        trusted_u=_trusted(amp, budget, w.sup_bound, trust_tol),
    )


def collapsed_audit(model: ModelParams, w: Penalty, U: int = 50, tol: float = 1e-8) -> dict:
    """Compare both collapsed variants with the one-step solution.

    Returns a JSON-ready record listing, per variant, every index where the
    difference exceeds ``tol + error_budget`` within the trusted range.
    """
    ref = solve(model, w, U)
    limit = min(U, ref.trusted_u)
    report = {"model": model.to_config(), "penalty": w.to_config(), "U": U,
              "trusted_u": limit, "tolerance": tol, "variants": {}}
    for variant in ("printed", "corrected"):
        alt = solve_collapsed(model, w, U, variant=variant)
        diff = np.abs(alt.m[: limit + 1] - ref.m[: limit + 1])
        thresh = tol + ref.error_budget
        bad = np.flatnonzero(diff > thresh)
        report["variants"][variant] = {
            "max_abs_diff": float(diff.max()) if diff.size else 0.0,
            "agrees": bool(bad.size == 0),
            "divergences": [{"u": int(i), "one_step": float(ref.m[i]),
                             "collapsed": float(alt.m[i]), "abs_diff": float(diff[i])}
                            for i in bad],
        }
    return report
