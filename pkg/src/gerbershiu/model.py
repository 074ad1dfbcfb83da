"""Model parameters for the compound Beta-Binomial risk model.

Occurrence probabilities of main claims, same-period by-claim settlement and
unit dividends may be given directly or as Beta(a, b) parameters. Every
result depends on them only through their means, with draws independent
across periods.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .pmf import Pmf, from_spec, to_spec


class ModelError(ValueError):
    """Raised when a model violates one of its admissibility conditions."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class BetaParams:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ModelError("beta", f"Beta parameters must be positive, got ({self.a}, {self.b})")


def effective_prob(bp: BetaParams) -> float:
    """Mean of Beta(a, b), i.e. P(K = 1) once the random probability is integrated out."""
    return bp.a / (bp.a + bp.b)


@dataclass(frozen=True)
class ModelParams:
    """All model inputs.

    p      probability of a main claim in a period
    theta  probability that the induced by-claim is settled in the same period
    alpha  probability of paying a unit dividend when the surplus is >= d
    nu     discount factor per period, strictly inside (0, 1)
    d      dividend threshold
    f, g   main-claim and by-claim size laws (the deferred by-claim reuses g)
    """

    p: float
    theta: float
    alpha: float
    nu: float
    f: Pmf
    g: Pmf
    d: int = 0

    @classmethod
    def from_beta(cls, claim: BetaParams, settle: BetaParams, dividend: BetaParams,
                  nu: float, f: Pmf, g: Pmf, d: int = 0) -> "ModelParams":
        return cls(effective_prob(claim), effective_prob(settle), effective_prob(dividend),
                   nu, f, g, d)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def mean_claim(self) -> float:
        """E[X] + E[Y]."""
        return self.f.mean + self.g.mean

    @property
    def loading_margin(self) -> float:
        return (1.0 - self.alpha) - self.p * self.mean_claim

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_config(self) -> dict:
        return {"p": self.p, "theta": self.theta, "alpha": self.alpha, "nu": self.nu,
                "d": self.d, "f": to_spec(self.f), "g": to_spec(self.g)}


def validate(m: ModelParams) -> ModelParams:
    """Return ``m`` unchanged if admissible, otherwise raise :class:`ModelError`."""
    for name in ("p", "theta", "alpha"):
        v = getattr(m, name)
        if not 0.0 <= v <= 1.0:
            raise ModelError(name, f"probability must lie in [0, 1], got {v}")
    if not 0.0 < m.nu < 1.0:
        raise ModelError("nu", f"discount factor must satisfy nu in (0,1), got {m.nu}")
    if int(m.d) != m.d or m.d < 0:
        raise ModelError("d", f"dividend threshold must be a nonnegative integer, got {m.d}")
    for name in ("f", "g"):
        pmf = getattr(m, name)
        if pmf(0) > 0:
            raise ModelError(name, "claim sizes must be positive integers (mass at 0)")
    if m.loading_margin <= 0:
        raise ModelError(
            "loading",
            f"security loading violated: 1 - alpha = {1 - m.alpha:.6g} is not greater than "
            f"p * E[X + Y] = {m.p * m.mean_claim:.6g}",
        )
    return m


def _prob(cfg: Mapping, direct: str, beta: str) -> float:
    if direct in cfg and beta in cfg:
        raise ModelError(direct, f"give either {direct!r} or {beta!r}, not both")
    if direct in cfg:
        return float(cfg[direct])
    if beta in cfg:
        a, b = cfg[beta]
        return effective_prob(BetaParams(float(a), float(b)))
    raise ModelError(direct, f"missing {direct!r} (or {beta!r})")


def from_config(cfg: Mapping) -> ModelParams:
    """Parse ``{"p"|"beta1", "theta"|"beta2", "alpha"|"beta3", "nu", "d", "f", "g"}``."""
    try:
        nu = float(cfg["nu"])
    except KeyError:
        raise ModelError("nu", "missing discount factor 'nu'") from None
    for name in ("f", "g"):
        if name not in cfg:
            raise ModelError(name, f"missing claim pmf {name!r}")
    try:
        f, g = from_spec(cfg["f"]), from_spec(cfg["g"])
    except ValueError as exc:
        raise ModelError("f/g", str(exc)) from None
    return ModelParams(
        p=_prob(cfg, "p", "beta1"),
        theta=_prob(cfg, "theta", "beta2"),
        alpha=_prob(cfg, "alpha", "beta3"),
        nu=nu,
        f=f,
        g=g,
        d=int(cfg.get("d", 0)),
    )
