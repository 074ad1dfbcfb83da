from __future__ import annotations

import numpy as np
import pytest

from gerbershiu.model import ModelParams
from gerbershiu.pmf import Pmf


def fixture_model(**changes) -> ModelParams:
    """f = g = point mass at 1, p = 0.3, theta = 0.5, alpha = 0.1, nu = 0.9, d = 0."""
    m = ModelParams(p=0.3, theta=0.5, alpha=0.1, nu=0.9, f=Pmf.point(1), g=Pmf.point(1))
    return m.with_(**changes) if changes else m


def random_pmf(rng: np.random.Generator, max_k: int) -> Pmf:
    k = int(rng.integers(1, max_k + 1))
    w = rng.dirichlet(np.ones(k))
    return Pmf.from_mapping({i + 1: float(x) for i, x in enumerate(w)})


def random_model(rng: np.random.Generator, d: int = 0, max_k: int = 3,
                 nu_range=(0.8, 0.99)) -> ModelParams:
    """A validated model with small random claim laws and positive loading."""
    while True:
        f, g = random_pmf(rng, max_k), random_pmf(rng, max_k)
        m = ModelParams(
            p=float(rng.uniform(0.02, 0.4)),
            theta=float(rng.uniform(0.0, 1.0)),
            alpha=float(rng.uniform(0.0, 0.3)),
            nu=float(rng.uniform(*nu_range)),
            f=f, g=g, d=d,
        )
        if m.loading_margin > 0.05:
            return m


def classical_dp(p: float, h: np.ndarray, nu: float, w, u_max: int, T: int) -> np.ndarray:
    """Compound binomial model with claim law h, no dividends, no by-claims.

    Backward induction: V(u) = nu [q V(u+1) + p sum_k h(k) (V(u+1-k) or w(u+1, k-u-1))].
    """
    L = u_max + T + 2
    V = np.zeros(L + 1)
    for _ in range(T):
        nxt = np.zeros_like(V)
        for u in range(L):
            c = u + 1
            acc = (1.0 - p) * V[c]
            for k in range(1, h.size):
                if h[k] == 0.0:
                    continue
                if k <= c:
                    acc += p * h[k] * V[c - k]
                else:
                    acc += p * h[k] * w(c, k - c)
            nxt[u] = nu * acc
        V = nxt
    return V[: u_max + 1]


@pytest.fixture
def fixture():
    return fixture_model()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def _conv_loop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(a.size + b.size - 1)
    for i in range(a.size):
        for j in range(b.size):
            out[i + j] += a[i] * b[j]
    return out


def table_residuals(m: ModelParams, w, mv: np.ndarray, ma: np.ndarray):
    """Residuals of the first-period expectation equations for the plain and
    auxiliary processes, assembled case by case with explicit loops.

    Returns arrays for u = 0..len(mv)-2.
    """
    f, g = m.f.masses, m.g.masses
    h = _conv_loop(f, g)
    hg = _conv_loop(h, g)
    p, q, th = m.p, m.q, m.theta

    def branch(law, target, c):
        acc = 0.0
        for k in range(1, law.size):
            if law[k] == 0.0:
                continue
            acc += law[k] * (target[c - k] if k <= c else w(c, k - c))
        return acc

    U = mv.size - 1
    rm, ra = np.zeros(U), np.zeros(U)
    for u in range(U):
        a = m.alpha if u >= m.d else 0.0
        em = ea = 0.0
        for v, pv in ((0, 1.0 - a), (1, a)):
            if pv == 0.0:
                continue
            c = u + 1 - v
            em += pv * (q * mv[c] + p * th * branch(h, mv, c) + p * (1 - th) * branch(f, ma, c))
            ea += pv * (q * branch(g, mv, c) + p * th * branch(hg, mv, c)
                        + p * (1 - th) * branch(h, ma, c))
        rm[u] = mv[u] - m.nu * em
        ra[u] = ma[u] - m.nu * ea
    return rm, ra


# criterion id -> (passed, detail); filled by test_acceptance, printed at session end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
