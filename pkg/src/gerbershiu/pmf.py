"""Finitely supported probability mass functions on the nonnegative integers.

Masses are stored densely from index 0; infinite families are truncated once
the retained mass reaches ``1 - eps`` and the discarded mass is carried along
as ``truncation_deficit`` so downstream error bounds stay auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.special import zeta as _zeta

DEFAULT_EPS = 1e-12
MAX_SUPPORT = 100_000
ZETA_MAX_SUPPORT = 1_000
_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Pmf:
    """Dense pmf ``masses[k] = P(Z = k)`` with a tracked truncation deficit."""

    masses: np.ndarray
    truncation_deficit: float = 0.0

    def __post_init__(self):
        m = np.array(self.masses, dtype=float).ravel()
        if m.size == 0:
            m = np.zeros(1)
        if np.any(~np.isfinite(m)) or np.any(m < 0):
            raise ValueError("pmf masses must be finite and nonnegative")
        nz = np.flatnonzero(m)
        m = m[: nz[-1] + 1] if nz.size else m[:1]
        deficit = float(self.truncation_deficit)
        if deficit < 0:
            raise ValueError("truncation_deficit must be nonnegative")
        total = float(m.sum()) + deficit
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"pmf mass plus deficit is {total!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "truncation_deficit", deficit)

    # -- constructors --------------------------------------------------------
    @classmethod
    def point(cls, k: int) -> "Pmf":
        if k < 0:
            raise ValueError("support must be nonnegative")
        m = np.zeros(k + 1)
        m[k] = 1.0
        return cls(m)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "Pmf":
        items = {int(k): float(v) for k, v in mapping.items()}
        if not items:
            raise ValueError("empty pmf mapping")
        if min(items) < 0:
            raise ValueError("support must be nonnegative")
        m = np.zeros(max(items) + 1)
        for k, v in items.items():
            m[k] += v
        return cls(m)

    @classmethod
    def _truncated(cls, masses: np.ndarray, eps: float) -> "Pmf":
        cum = np.cumsum(masses)
        hit = np.flatnonzero(cum >= 1.0 - eps)
        n = hit[0] + 1 if hit.size else masses.size
        kept = masses[:n]
        return cls(kept, truncation_deficit=max(0.0, 1.0 - float(kept.sum())))

    @classmethod
    def geometric(cls, success: float, eps: float = DEFAULT_EPS) -> "Pmf":
        """Geometric law on {1, 2, ...}: P(k) = (1 - success)**(k - 1) * success."""
        if not 0.0 < success <= 1.0:
            raise ValueError("geometric success probability must lie in (0, 1]")
        if success == 1.0:
            return cls.point(1)
        # smallest n with (1-s)^n <= eps
        n = int(np.ceil(np.log(eps) / np.log1p(-success))) + 1
        n = min(max(n, 1), MAX_SUPPORT)
        k = np.arange(1, n + 1)
        masses = np.concatenate([[0.0], success * (1.0 - success) ** (k - 1)])
        return cls._truncated(masses, eps)

    @classmethod
    def zeta(cls, s: float, eps: float = DEFAULT_EPS, max_support: int = ZETA_MAX_SUPPORT) -> "Pmf":
        """Zeta law on {1, 2, ...}: P(k) = k**(-s) / zeta(s).

        Requires s > 2 so the mean is finite. Heavy tails usually hit
        ``max_support`` before ``eps``; the remainder is kept as deficit.
        """
        if s <= 2.0:
            raise ValueError("zeta exponent must exceed 2 for a finite mean")
        k = np.arange(1, max_support + 1, dtype=float)
        masses = np.concatenate([[0.0], k ** (-s) / _zeta(s)])
        return cls._truncated(masses, eps)

    # -- properties ----------------------------------------------------------
    @property
    def max_support(self) -> int:
        return self.masses.size - 1

    @property
    def min_support(self) -> int:
        nz = np.flatnonzero(self.masses)
        return int(nz[0]) if nz.size else 0

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.masses.size), self.masses))

    def __call__(self, k: int) -> float:
        return float(self.masses[k]) if 0 <= k < self.masses.size else 0.0

    def padded(self, n: int) -> np.ndarray:
        """Masses on 0..n-1, zero-filled or cut."""
        out = np.zeros(n)
        m = min(n, self.masses.size)
        out[:m] = self.masses[:m]
        return out

    def __repr__(self) -> str:
        return (
            f"Pmf(support={self.min_support}..{self.max_support}, "
            f"deficit={self.truncation_deficit:.3g})"
        )


def _derived(masses, deficit) -> Pmf:
    # results of exact operations on valid pmfs; skips the normalisation check
    # so rounding in long convolution chains cannot trip it
    m = np.clip(np.asarray(masses, dtype=float), 0.0, None)
    nz = np.flatnonzero(m)
    m = m[: nz[-1] + 1] if nz.size else m[:1]
    m.setflags(write=False)
    obj = object.__new__(Pmf)
    object.__setattr__(obj, "masses", m)
    object.__setattr__(obj, "truncation_deficit", max(0.0, float(deficit)))
    return obj


def convolve(a: Pmf, b: Pmf) -> Pmf:
    """Law of the sum of independent draws from ``a`` and ``b``.

    Deficits add, which upper-bounds the mass lost by the truncated factors.
    """
    masses = np.convolve(a.masses, b.masses)
    deficit = a.truncation_deficit + b.truncation_deficit
    # keep total + deficit == 1 exactly despite the product term a.def * b.def
    deficit = max(deficit, 1.0 - float(masses.sum()))
    return _derived(masses, deficit)


def mixture(weights, pmfs) -> Pmf:
    """Finite mixture ``sum_i weights[i] * pmfs[i]`` (weights summing to 1)."""
    weights = [float(w) for w in weights]
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("mixture weights must be nonnegative and sum to 1")
    n = max(p.masses.size for p in pmfs)
    masses = sum(w * p.padded(n) for w, p in zip(weights, pmfs))
    deficit = sum(w * p.truncation_deficit for w, p in zip(weights, pmfs))
    return _derived(masses, deficit)


def pgf_eval(p: Pmf, z: float) -> float:
    """Probability generating function ``sum_k z**k p(k)`` for z in [0, 1]."""
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"pgf argument {z!r} outside [0, 1]")
    return float(np.polynomial.polynomial.polyval(z, p.masses))


def pgf_eval_array(p: Pmf, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(z > 1):
        raise ValueError("pgf argument outside [0, 1]")
    return np.polynomial.polynomial.polyval(z, p.masses)


def tail(p: Pmf, n: int) -> float:
    """Survival ``P(Z > n)``, counting the truncation deficit as tail mass."""
    if n < 0:
        raise ValueError("tail index must be nonnegative")
    return float(p.masses[n + 1 :].sum()) + p.truncation_deficit


def from_spec(spec) -> Pmf:
    """Build a pmf from a config literal.

    Accepts a mapping ``{support: mass}`` or a named family such as
    ``{"family": "geometric", "success": 0.5, "eps": 1e-12}``,
    ``{"family": "point", "k": 1}`` or ``{"family": "zeta", "s": 3.0}``.
    """
    if isinstance(spec, Pmf):
        return spec
    if not isinstance(spec, Mapping):
        raise ValueError(f"pmf spec must be a mapping, got {type(spec).__name__}")
    if "family" not in spec:
        return Pmf.from_mapping(spec)
    family = spec["family"]
    eps = float(spec.get("eps", DEFAULT_EPS))
    if family == "point":
        return Pmf.point(int(spec["k"]))
    if family == "geometric":
        return Pmf.geometric(float(spec["success"]), eps)
    if family == "zeta":
        return Pmf.zeta(float(spec["s"]), eps, int(spec.get("max_support", ZETA_MAX_SUPPORT)))
    raise ValueError(f"unknown pmf family {family!r}")


def to_spec(p: Pmf) -> dict:
    return {int(k): float(v) for k, v in enumerate(p.masses) if v > 0}
