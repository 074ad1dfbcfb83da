"""Gerber-Shiu recursions for the compound Beta-Binomial risk model with
delayed by-claims and randomized dividends."""

from .gs_threshold import JointRuinPmf, initial_system, mu_joint, solve_threshold
from .gs_zero import GsSolution, initial_value_m0, solve, solve_collapsed
from .model import BetaParams, ModelError, ModelParams, effective_prob, validate
from .oracle import dp_value, dp_values, simulate, step
from .penalty import Penalty, build_sequences
from .pmf import Pmf, convolve, pgf_eval, tail
from .quantities import QuantityRequest, compute_quantity
from .roots import find_root_z0, gamma1, gamma2

__all__ = [
    "BetaParams", "GsSolution", "JointRuinPmf", "ModelError", "ModelParams", "Penalty",
    "Pmf", "QuantityRequest", "build_sequences", "compute_quantity", "convolve",
    "dp_value", "dp_values", "effective_prob", "find_root_z0", "gamma1", "gamma2",
    "initial_system", "initial_value_m0", "mu_joint", "pgf_eval", "simulate", "solve",
    "solve_collapsed", "solve_threshold", "step", "tail", "validate",
]
