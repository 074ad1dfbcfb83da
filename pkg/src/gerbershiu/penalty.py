"""Penalty functions and the tail-expectation sequences built from them.

A penalty ``w(v1, v2)`` is charged at ruin, where ``v1`` is the capital on hand
when the ruin-causing claim arrives (surplus after premium and dividend) and
``v2 >= 1`` is the deficit. For a claim-total law Z the tail expectation is

    E_Z(u) = sum_{k > u} w(u, k - u) P(Z = k),

the expected penalty when capital ``u`` meets a claim total drawn from Z.
Two laws matter: X + W*Y (no pending by-claim) and K(X + W*Y) + Y_hat (one
pending by-claim); their sequences are called A and B throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .model import ModelParams
from .pmf import Pmf, convolve, mixture

PenaltyFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class SeriesTruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Penalty:
    """Bounded nonnegative penalty.

    ``func`` must accept broadcastable integer arrays ``(v1, v2)`` and return
    an array of the broadcast shape with entries in ``[0, sup_bound]``.
    """

    func: PenaltyFn
    sup_bound: float
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.sup_bound) or self.sup_bound < 0:
            raise ValueError("penalty must declare a finite nonnegative sup_bound")

    def evaluate(self, v1, v2) -> np.ndarray:
        v1, v2 = np.broadcast_arrays(np.asarray(v1), np.asarray(v2))
        return np.asarray(self.func(v1, v2), dtype=float) * np.ones(v1.shape)

    def __call__(self, v1: int, v2: int) -> float:
        return float(self.evaluate(v1, v2))

    def to_config(self) -> dict:
        return {"kind": self.name, **self.params}

    def __reduce__(self):
        # named penalties are rebuilt from their spec so they cross process boundaries
        if self.name in _KINDS:
            return (from_spec, (self.to_config(),))
        return super().__reduce__()


def zero() -> Penalty:
    return Penalty(lambda v1, v2: np.zeros(np.shape(v1)), 0.0, "zero")


def const1() -> Penalty:
    return Penalty(lambda v1, v2: np.ones(np.shape(v1)), 1.0, "const1")


def deficit_indicator(y: int) -> Penalty:
    return Penalty(lambda v1, v2: (v2 == y).astype(float), 1.0, "deficit_indicator", {"y": y})


def deficit_pgf(r: float) -> Penalty:
    if not 0.0 < r <= 1.0:
        raise ValueError(f"deficit pgf argument must lie in (0, 1], got {r}")
    return Penalty(lambda v1, v2: np.power(r, v2, dtype=float), 1.0, "deficit_pgf", {"r": r})


def surplus_indicator(y: int) -> Penalty:
    return Penalty(lambda v1, v2: (v1 == y).astype(float), 1.0, "surplus_indicator", {"y": y})


def total_claim_indicator(y: int) -> Penalty:
    return Penalty(lambda v1, v2: (v1 + v2 == y).astype(float), 1.0,
                   "total_claim_indicator", {"y": y})


def joint_indicator(v1: int, v2: int) -> Penalty:
    a, b = v1, v2
    return Penalty(lambda x1, x2: ((x1 == a) & (x2 == b)).astype(float), 1.0,
                   "joint_indicator", {"v1": v1, "v2": v2})


_KINDS = {
    "zero": (zero, ()),
    "const1": (const1, ()),
    "deficit_indicator": (deficit_indicator, ("y",)),
    "deficit_pgf": (deficit_pgf, ("r",)),
    "surplus_indicator": (surplus_indicator, ("y",)),
    "total_claim_indicator": (total_claim_indicator, ("y",)),
    "joint_indicator": (joint_indicator, ("v1", "v2")),
}


def from_spec(spec: Mapping) -> Penalty:
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"unknown penalty kind {kind!r}; expected one of {sorted(_KINDS)}")
    ctor, names = _KINDS[kind]
    missing = [n for n in names if n not in spec]
    if missing:
        raise ValueError(f"penalty {kind!r} needs parameter(s) {missing}")
    args = [float(spec[n]) if n == "r" else int(spec[n]) for n in names]
    return ctor(*args)


# -- claim-total laws ---------------------------------------------------------

def claim_mix_same_period(m: ModelParams) -> Pmf:
    """Law of X + W*Y: theta*(f*g) + (1-theta)*f."""
    return mixture([m.theta, 1.0 - m.theta], [convolve(m.f, m.g), m.f])


def claim_mix_with_deferred(m: ModelParams) -> Pmf:
    """Law of K(X + W*Y) + Y_hat: (1-p) g + p(1-theta) (f*g) + p theta (f*g*g)."""
    fg = convolve(m.f, m.g)
    return mixture([m.q, m.p * (1.0 - m.theta), m.p * m.theta], [m.g, fg, convolve(fg, m.g)])


def tail_expectation_array(masses: np.ndarray, w: Penalty, n: int) -> np.ndarray:
    """``E_Z(u)`` for u = 0..n-1 with Z given by (possibly defective) masses."""
    masses = np.asarray(masses, dtype=float)
    out = np.zeros(n)
    top = masses.size - 1
    rows = min(n, max(top, 0))
    if rows == 0 or w.sup_bound == 0.0:
        return out
    u = np.arange(rows)[:, None]
    delta = np.arange(1, top + 1)[None, :]
    k = u + delta
    zk = np.where(k <= top, masses[np.minimum(k, top)], 0.0)
    out[:rows] = (w.evaluate(u, delta) * zk).sum(axis=1)
    return out


def tail_expectation(Z: Pmf, w: Penalty, u: int) -> float:
    """``sum_{k > u} w(u, k - u) Z(k)``; the truncated mass adds at most
    ``w.sup_bound * Z.truncation_deficit``."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    return float(tail_expectation_array(Z.masses, w, u + 1)[u])


@dataclass(frozen=True)
class PenaltySequences:
    """Tail-expectation sequences A, B and their power series at ``z0``.

    ``A`` and ``B`` cover u = 0..len-1 and vanish identically beyond the
    support of the claim laws (up to truncated mass). ``A_tilde``/``B_tilde``
    are ``sum_u z0**u A(u)``; ``series_error`` bounds the neglected remainder
    and ``pmf_error`` bounds each entry's error from truncated claim mass.
    """

    A: np.ndarray
    B: np.ndarray
    z0: float
    A_tilde: float
    B_tilde: float
    series_error: float
    pmf_error: float
    sup_bound: float


def sequences_from_laws(law_a: np.ndarray, law_b: np.ndarray, w: Penalty, U: int,
                        z0: float, deficit_a: float = 0.0, deficit_b: float = 0.0,
                        tol: float = 1e-9) -> PenaltySequences:
    """Generic builder: A, B against arbitrary (sub-)probability laws.

    Used directly for the split of the joint ruin mass by whether a by-claim
    is left pending, hence the raw-array inputs.
    """
    if not 0.0 < z0 < 1.0:
        raise ValueError("z0 must lie in (0, 1)")
    n = max(U + 2, len(law_a), len(law_b))
    A = tail_expectation_array(law_a, w, n)
    B = tail_expectation_array(law_b, w, n)
    powers = z0 ** np.arange(n)
    deficit = max(deficit_a, deficit_b)
    series_error = w.sup_bound * deficit * z0 ** n / (1.0 - z0)
    if series_error > tol:
        raise SeriesTruncationError(
            f"series remainder bound {series_error:.3g} exceeds tolerance {tol:.3g}")
    return PenaltySequences(
        A=A, B=B, z0=z0,
        A_tilde=float(powers @ A), B_tilde=float(powers @ B),
        series_error=series_error,
        pmf_error=w.sup_bound * deficit,
        sup_bound=w.sup_bound,
    )


def build_sequences(m: ModelParams, w: Penalty, U: int, z0: float,
                    tol: float = 1e-9) -> PenaltySequences:
    za, zb = claim_mix_same_period(m), claim_mix_with_deferred(m)
    return sequences_from_laws(za.masses, zb.masses, w, U, z0,
                               za.truncation_deficit, zb.truncation_deficit, tol)
