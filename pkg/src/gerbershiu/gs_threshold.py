"""Gerber-Shiu function with a positive dividend threshold d.

Below d no dividends are paid, so the one-step equations at u = 0..d-1 lose
their alpha terms. Those 2d equations involve the 2d + 1 unknowns
m_d(0..d), m_d_aux(0..d-1); the last equation comes from the joint law of
(capital, deficit) at ruin for the d = 0 process started at 0.

From level d the threshold process behaves like the d = 0 process shifted up
by d until it first falls below d. If the drop exceeds d that is ruin, with
penalty w(v1 + d, v2 - d). Otherwise the process resumes at d - v2, with or
without a pending by-claim depending on how the drop happened. The joint
mass is therefore kept split by that pending status.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gs_zero import (DEFAULT_U, TRUST_TOL, GsSolution, OneStep, SolverError,
                      _amplification, _check_solvable, _kernels, _trusted, solve)
from .model import ModelParams
from .penalty import Penalty, build_sequences
from .pmf import convolve, pgf_eval
from .roots import RootResult, find_root_z0, gamma1

COND_LIMIT = 1e12


@dataclass(frozen=True)
class JointRuinPmf:
    """Discounted joint mass mu(v1, v2) of (capital, deficit) at ruin from 0, d = 0.

    Arrays are indexed ``[v1, v2]`` with column 0 (deficit 0) always zero.
    ``plain`` and ``pending`` split mu by whether the ruin-causing period
    leaves a by-claim pending (a main claim whose by-claim was deferred).
    """

    plain: np.ndarray
    pending: np.ndarray
    z0: float
    truncation_bound: float

    @property
    def mu(self) -> np.ndarray:
        return self.plain + self.pending

    @property
    def total(self) -> float:
        return float(self.mu.sum())

    def rows(self):
        """(v1, v2, mass) triples with positive mass."""
        mu = self.mu
        for v1, v2 in zip(*np.nonzero(mu)):
            yield int(v1), int(v2), float(mu[v1, v2])


def _sub_laws(m: ModelParams):
    """Claim-total sub-laws of the two first-period cases, split by pending status.

    Returns ((A_plain, B_plain), (A_pending, B_pending)) as mass arrays.
    """
    f, g = m.f, m.g
    h = convolve(f, g)
    hg = convolve(h, g)
    n = max(hg.masses.size, h.masses.size, g.masses.size)
    fa, ga, ha, hga = f.padded(n), g.padded(n), h.padded(n), hg.padded(n)
    a_plain = m.theta * ha
    a_pend = (1.0 - m.theta) * fa
    b_plain = m.q * ga + m.p * m.theta * hga
    b_pend = m.p * (1.0 - m.theta) * ha
    return (a_plain, b_plain), (a_pend, b_pend)


def mu_joint(m: ModelParams, root: RootResult | None = None, V1: int | None = None,
             V2: int | None = None) -> JointRuinPmf:
    """Closed-form joint mass of (capital, deficit) at ruin.

    mu(v1, v2) = (p/q) z0^v1 [lift Z_A(v1 + v2) - [v1 = 0] Z_A(v2)]
               + (p/q) kappa z0^v1 [lift Z_B(v1 + v2) - [v1 = 0] Z_B(v2)]

    with lift = 1 + z0 alpha/(1 - alpha) and
    kappa = nu (1 - theta)(1 - alpha) F(z0) lift / gamma1(z0). Z_A, Z_B are the
    claim-total laws without and with a pending by-claim. Both vanish beyond
    their finite support, so v1 and v2 never exceed it.
    """
    if root is None:
        root = find_root_z0(m)
    z0 = root.z0
    (ap, bp), (aq, bq) = _sub_laws(m)
    S = ap.size - 1
    V1 = S if V1 is None else V1
    V2 = S if V2 is None else V2
    p, q, alpha = m.p, m.q, m.alpha
    beta = 1.0 - alpha
    lift = 1.0 + z0 * alpha / beta
    g1 = gamma1(m, z0)
    if g1 == 0.0:
        raise SolverError(f"gamma1 vanishes at z0 = {z0!r}")
    kappa = m.nu * (1.0 - m.theta) * beta * pgf_eval(m.f, z0) * lift / g1

    v1 = np.arange(V1 + 1)[:, None]
    v2 = np.arange(V2 + 1)[None, :]
    idx = v1 + v2
    first = (v1 == 0) & (v2 >= 1)

    def at(arr, k):
        return np.where(k <= S, arr[np.minimum(k, S)], 0.0)

    def part(za, zb):
        term_a = lift * at(za, idx) - np.where(first, at(za, v2), 0.0)
        term_b = lift * at(zb, idx) - np.where(first, at(zb, v2), 0.0)
        out = (p / q) * z0 ** v1 * (term_a + kappa * term_b)
        out[:, 0] = 0.0
        return out

    plain = part(ap, bp)
    pending = part(aq, bq)
    # mass left outside the grid: rows beyond V1 and columns beyond V2, plus truncated claim mass
    dropped = 0.0
    if V1 < S or V2 < S:
        full = mu_joint(m, root)
        dropped = full.total - float((plain + pending).sum())
    deficit = m.f.truncation_deficit + 2.0 * m.g.truncation_deficit
    bound = abs(dropped) + (p / q) * (lift + abs(kappa) * lift) * deficit / (1.0 - z0)
    return JointRuinPmf(plain, pending, z0, float(bound))


def initial_system(m: ModelParams, w: Penalty, closure: str = "split",
                   root: RootResult | None = None):
    """Initial values m_d(0..d), m_d_aux(0..d-1) by a dense linear solve.

    ``closure="split"`` resumes from m_d or m_d_aux after a drop according to
    whether a by-claim is pending. ``"printed"`` always resumes from m_d, the
    unsplit closure; it is kept for comparison only.

    Returns ``(m_init, aux_init, info)`` where ``info`` holds the condition
    number and the residual of the assembled system.
    """
    if closure not in ("split", "printed"):
        raise ValueError("closure must be 'split' or 'printed'")
    d = int(m.d)
    if d < 1:
        raise ValueError("initial_system needs d >= 1")
    if root is None:
        root = find_root_z0(m)
    seqs = build_sequences(m, w, d + 1, root.z0)
    A, B = seqs.A, seqs.B
    k = _kernels(m)
    p, q, theta, nu = m.p, m.q, m.theta, m.nu
    n = 2 * d + 1
    M = np.zeros((n, n))
    rhs = np.zeros(n)

    def mi(j):  # column of m_d(j)
        return j

    def ai(j):  # column of m_d_aux(j)
        return d + 1 + j

    def kern(arr, j):
        return float(arr[j]) if j < arr.size else 0.0

    for u in range(d):
        r = u
        M[r, mi(u)] += 1.0
        M[r, mi(u + 1)] -= nu * q
        for j in range(1, u + 2):
            M[r, mi(u + 1 - j)] -= nu * p * theta * kern(k.h, j)
            M[r, ai(u + 1 - j)] -= nu * p * (1.0 - theta) * kern(k.f, j)
        rhs[r] = nu * p * A[u + 1]
        r = d + u
        M[r, ai(u)] += 1.0
        for j in range(1, u + 2):
            M[r, mi(u + 1 - j)] -= nu * (q * kern(k.g, j) + p * theta * kern(k.hg, j))
            M[r, ai(u + 1 - j)] -= nu * p * (1.0 - theta) * kern(k.h, j)
        rhs[r] = nu * B[u + 1]

    jp = mu_joint(m, root)
    mu = jp.mu
    r = 2 * d
    M[r, mi(d)] += 1.0
    for v2 in range(1, min(d, mu.shape[1] - 1) + 1):
        if closure == "split":
            M[r, mi(d - v2)] -= jp.plain[:, v2].sum()
            M[r, ai(d - v2)] -= jp.pending[:, v2].sum()
        else:
            M[r, mi(d - v2)] -= mu[:, v2].sum()
    if mu.shape[1] - 1 > d:
        v1 = np.arange(mu.shape[0])[:, None]
        v2 = np.arange(d + 1, mu.shape[1])[None, :]
        rhs[r] = float((mu[:, d + 1 :] * w.evaluate(v1 + d, v2 - d)).sum())

    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SolverError(f"initial system is ill-conditioned (condition number {cond:.3g})")
    x = np.linalg.solve(M, rhs)
    info = {"condition": cond, "system_residual": float(np.abs(M @ x - rhs).max()),
            "closure": closure, "mu_bound": jp.truncation_bound}
    return x[: d + 1], x[d + 1 :], info


def solve_threshold(m: ModelParams, w: Penalty, U: int = DEFAULT_U, closure: str = "split",
                    trust_tol: float = TRUST_TOL) -> GsSolution:
    """m_d(0..U), m_d_aux(0..U) for threshold d (d = 0 delegates to gs_zero)."""
    _check_solvable(m, U)
    d = int(m.d)
    if d == 0:
        return solve(m, w, U, trust_tol=trust_tol)
    root = find_root_z0(m)
    m_init, a_init, info = initial_system(m, w, closure=closure, root=root)
    U_eff = max(U, d)
    seqs = build_sequences(m, w, U_eff, root.z0)
    step = OneStep(m, seqs.A, seqs.B)
    mv = np.zeros(U_eff + 1)
    ma = np.zeros(U_eff + 1)
    mv[: d + 1] = m_init
    ma[:d] = a_init
    step.march(mv, ma, d)
    rm, ra = step.residuals(mv, ma)
    budget = info["mu_bound"] * max(w.sup_bound, 1.0) + seqs.pmf_error
    amp = _amplification(m, U_eff, d)
    return GsSolution(
        m=mv[: U + 1], m_aux=ma[: U + 1], z0=root, error_budget=budget,
        method=f"threshold-{closure}", d=d, residual_m=rm[:U], residual_aux=ra[:U],
        amplification=amp[: U + 1], trusted_u=min(U, _trusted(amp, budget, w.sup_bound, trust_tol)),
        info=info,
    )
