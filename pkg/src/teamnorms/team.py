"""Agent compensation and the one-bit proposal/decision rule.

Compensation is a convex combination of own performance and the mean
performance of everyone else (the residual).  Each period an agent draws one
uniformly random bit of its own block as a candidate flip and keeps the
option maximizing w1 * incentive + w2 * norm compliance, evaluated with all
other agents' bits frozen at their previous values; exact ties retain the
status quo.
"""

from dataclasses import dataclass

from .errors import ParameterError
from .landscape import agent_performance
from .norms import compliance

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class IncentiveScheme:
    """Linear compensation weights: alpha on own, beta on residual performance."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ParameterError(f"incentive weights must be non-negative, "
                                 f"got ({self.alpha}, {self.beta})")
        if abs(self.alpha + self.beta - 1.0) > _WEIGHT_TOL:
            raise ParameterError(f"alpha + beta must equal 1, got {self.alpha + self.beta!r}")


@dataclass(frozen=True)
class DecisionWeights:
    """Objective weights: w1 on compensation, w2 on norm compliance."""

    w1: float
    w2: float

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0:
            raise ParameterError(f"decision weights must be non-negative, "
                                 f"got ({self.w1}, {self.w2})")
        if abs(self.w1 + self.w2 - 1.0) > _WEIGHT_TOL:
            raise ParameterError(f"w1 + w2 must equal 1, got {self.w1 + self.w2!r}")


def residual_performance(land, p, cfg):
    """Mean performance of every agent other than p."""
    count = land.structure.p
    if count < 2:
        raise ParameterError("residual performance is undefined for a single agent")
    acc = 0.0
    for q in range(count):
        if q != p:
            acc += agent_performance(land, q, cfg)
    return acc / (count - 1)


def incentive_payoff(land, p, cfg, scheme):
    """alpha * own performance + beta * residual performance."""
    own = agent_performance(land, p, cfg)
    res = residual_performance(land, p, cfg) if scheme.beta != 0.0 else 0.0
    return scheme.alpha * own + scheme.beta * res


def propose_flip(p, cfg, rng):
    """Flip one uniformly drawn bit inside agent p's block (never more:
    multi-bit long jumps are excluded)."""
    pos = int(rng.integers(0, cfg.n))
    return cfg.with_flip(p * cfg.n + pos)


def choose(p, status_quo, candidate, land, scheme, weights, memory, t, t_l):
    """Pick the option with the larger w1*incentive + w2*compliance objective.

    Both options must differ only inside agent p's block and are evaluated
    against the same frozen outside bits; compliance is read from the
    agent's current memory.  An exact tie keeps the status quo.
    """
    inc_sq = incentive_payoff(land, p, status_quo, scheme)
    inc_cd = incentive_payoff(land, p, candidate, scheme)
    soc_sq = compliance(status_quo.social(p), memory, t, t_l)
    soc_cd = compliance(candidate.social(p), memory, t, t_l)
    obj_sq = weights.w1 * inc_sq + weights.w2 * soc_sq
    obj_cd = weights.w1 * inc_cd + weights.w2 * soc_cd
    return candidate if obj_cd > obj_sq else status_quo
