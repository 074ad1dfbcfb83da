"""Independent ground truth for the recursions.

The surplus process is run as a Markov chain on (level, pending by-claim):
each period the insurer collects a unit premium, pays a unit dividend with
probability alpha if the previous surplus is at least d, settles the
by-claim deferred from the previous period, and faces a main claim with
probability p whose by-claim is settled now (probability theta) or carried
into the next period.

At ruin the penalty is charged on (capital, deficit), where capital is the
surplus after premium and dividend, i.e. the amount on hand when the
ruin-causing claims arrive.

Two estimators are provided: exact backward induction over a finite
horizon (`dp_values`) and a seeded Monte Carlo simulator (`simulate`).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .penalty import Penalty

STATE_CAP = 20_000_000
BLOCK_PATHS = 1 << 14


class StateSpaceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SurplusState:
    level: int
    pending: int = 0
    ruined: bool = False
    # (capital when the ruin-causing claims arrived, deficit)
    ruin_record: tuple[int, int] | None = None


def step(s: SurplusState, m: ModelParams, draws: tuple[int, int, int, int, int]) -> SurplusState:
    """Advance one period given realised (K, W, V, X, Y)."""
    if s.ruined:
        raise ValueError("cannot step an absorbed (ruined) state")
    k, w, v, x, y = draws
    capital = s.level + 1 - (v if s.level >= m.d else 0)
    total = s.pending + k * (x + w * y)
    level = capital - total
    pending = k * (1 - w) * y
    if level < 0:
        return SurplusState(level, pending, True, (capital, -level))
    return SurplusState(level, pending)


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    bound: float = 0.0  # rigorous error bound (DP) or 0
    stderr: float = 0.0  # standard error (MC) or 0
    method: str = "dp"
    settings: dict | None = None


# -- dynamic programming ------------------------------------------------------

def _branches(m: ModelParams):
    """(weight, claim law on the main-claim part, leaves-pending) per period outcome."""
    f, g = m.f.masses, m.g.masses
    fg = np.convolve(f, g)
    return [
        (m.q, np.array([1.0]), False),
        (m.p * m.theta, fg, False),
        (m.p * (1.0 - m.theta), f, True),
    ]


def _ruin_penalty(law: np.ndarray, w: Penalty, n: int) -> np.ndarray:
    """r(c) = sum_{s > c} law(s) w(c, s - c) for capital c = 0..n-1, by direct loop."""
    out = np.zeros(n)
    for s in np.flatnonzero(law):
        c = np.arange(min(s, n))
        out[: c.size] += law[s] * w.evaluate(c, s - c)
    return out


def dp_values(m: ModelParams, w: Penalty, u_max: int, T: int,
              cap: int = STATE_CAP) -> tuple[np.ndarray, np.ndarray, float]:
    """Finite-horizon expected discounted penalty for every start level.

    Returns ``(plain, aux, bound)``: values for u = 0..u_max starting without a
    pending by-claim and with one pending by-claim distributed as Y, plus a
    bound on the distance to the infinite-horizon, untruncated value.
    """
    if T < 1:
        raise ValueError("horizon must be at least 1")
    g = m.g.masses
    pend = [0] + [int(j) for j in np.flatnonzero(g)]
    L = u_max + T + 2
    if L * len(pend) > cap:
        raise StateSpaceError(f"state space {L} x {len(pend)} exceeds cap {cap}")
    branches = _branches(m)
    # claim-total law and ruin penalty per (pending amount, branch)
    laws = {}
    ruin = {}
    for j in pend:
        for b, (wt, law, _) in enumerate(branches):
            shifted = np.concatenate([np.zeros(j), law])
            laws[j, b] = shifted
            ruin[j, b] = wt * _ruin_penalty(shifted, w, L + 1)
    levels = np.arange(L)
    a = np.where(levels >= m.d, m.alpha, 0.0)
    V = np.zeros((len(pend), L))  # V[i, level] for pending pend[i]
    for _ in range(T):
        Vg = sum(g[j] * V[i] for i, j in enumerate(pend) if j > 0)
        nxt = np.zeros_like(V)
        for i, j in enumerate(pend):
            cont = np.zeros(L + 1)  # value as a function of capital c = 0..L
            for b, (wt, _, leaves) in enumerate(branches):
                target = Vg if leaves else V[0]
                conv = np.convolve(target, laws[j, b])[: L + 1]
                cont[: conv.size] += wt * conv
                cont += ruin[j, b]
            nxt[i] = m.nu * ((1.0 - a) * cont[1 : L + 1] + a * cont[:L])
        V = nxt
    plain = V[0, : u_max + 1].copy()
    aux = sum(g[j] * V[i, : u_max + 1] for i, j in enumerate(pend) if j > 0)
    delta = m.f.truncation_deficit + 2.0 * m.g.truncation_deficit
    bound = w.sup_bound * (m.nu ** T + delta * m.nu / (1.0 - m.nu))
    return plain, np.asarray(aux, dtype=float), float(bound)


def dp_value(m: ModelParams, w: Penalty, u: int, T: int) -> OracleEstimate:
    plain, _, bound = dp_values(m, w, u, T)
    return OracleEstimate(float(plain[u]), bound=bound, method="dp",
                          settings={"u": u, "horizon": T})


# -- Monte Carlo --------------------------------------------------------------

def _sampler(masses: np.ndarray):
    support = np.flatnonzero(masses)
    if support.size == 1:
        k = int(support[0])
        return lambda rng, n: np.full(n, k, dtype=np.int64)
    cdf = np.cumsum(masses[support])
    cdf /= cdf[-1]
    return lambda rng, n: support[np.minimum(np.searchsorted(cdf, rng.random(n), side="right"),
                                            support.size - 1)]


def _block_rng(seed: int, block: int) -> np.random.Generator:
    # Philox is counter-based; each block of paths gets its own key
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(args) -> tuple[float, float]:
    m, w, u, n, seed, block, T = args
    rng = _block_rng(seed, block)
    draw_x, draw_y = _sampler(m.f.masses), _sampler(m.g.masses)
    level = np.full(n, u, dtype=np.int64)
    pending = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    value = np.zeros(n)
    disc = 1.0
    for _ in range(T):
        if idx.size == 0:
            break
        disc *= m.nu
        k_ = idx.size
        v = (rng.random(k_) < m.alpha) & (level >= m.d)
        k = rng.random(k_) < m.p
        wd = rng.random(k_) < m.theta
        x = draw_x(rng, k_)
        y = draw_y(rng, k_)
        capital = level + 1 - v
        total = pending + k * (x + wd * y)
        new = capital - total
        pending = k * (~wd) * y
        dead = new < 0
        if dead.any():
            value[idx[dead]] = disc * w.evaluate(capital[dead], -new[dead])
            keep = ~dead
            idx, level, pending = idx[keep], new[keep], pending[keep]
        else:
            level = new
    return float(value.sum()), float(np.dot(value, value))


def simulate(m: ModelParams, w: Penalty, u: int, paths: int, seed: int, T: int,
             workers: int = 1) -> OracleEstimate:
    """Monte Carlo estimate of the horizon-T discounted penalty from level u.

    Paths are split into fixed blocks of ``BLOCK_PATHS``; block b draws from
    Philox keyed by (seed, b) and partial sums are reduced in block order, so
    the result is bit-identical for any ``workers``.
    """
    if paths < 1:
        raise ValueError("paths must be >= 1")
    sizes = [BLOCK_PATHS] * (paths // BLOCK_PATHS)
    if paths % BLOCK_PATHS:
        sizes.append(paths % BLOCK_PATHS)
    jobs = [(m, w, u, n, seed, b, T) for b, n in enumerate(sizes)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as ex:
            parts = list(ex.map(_simulate_block, jobs))
    else:
        parts = [_simulate_block(j) for j in jobs]
    s = 0.0
    s2 = 0.0
    for a, b in parts:
        s += a
        s2 += b
    mean = s / paths
    var = max(s2 / paths - mean * mean, 0.0) * paths / max(paths - 1, 1)
    return OracleEstimate(mean, stderr=float(np.sqrt(var / paths)), method="mc",
                          settings={"u": u, "paths": paths, "seed": seed, "horizon": T})
