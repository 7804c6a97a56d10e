# Pipeline Parameters
"""
Exponents, expansion orders and neighbourhood radii shared by the pipelines.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, NamedTuple, Optional

from lfun.config import config
from lfun.errors import ParameterError


@dataclass(frozen=True)
class PipelineParams:
    """
    Parameters of one pipeline run.

    Attributes:
        T: Height (integer >= 1 for the Fourier pipeline, nonzero for L-values)
        gamma: Target error exponent, error O(T^{-γ})
        epsilon: Budget exponent
        eta: Segment exponent in (0, 1/3), segments have length ~T^η
        d: Expansion order; chosen per group when None
        precision: "double" or "extended"
        threads: Worker threads (None: LFUN_THREADS or machine parallelism)
        delta: Grouping radius override; derived from T, R and M when None
        order: Taylor order override for the grid integrator
    """
    T: float
    gamma: float = config.DEFAULT_GAMMA
    epsilon: float = config.DEFAULT_EPSILON
    eta: float = config.DEFAULT_ETA
    d: Optional[int] = None
    precision: str = config.PRECISION
    threads: Optional[int] = None
    delta: Optional[float] = None
    order: Optional[int] = None

    def __post_init__(self):
        if not math.isfinite(self.T) or self.T == 0:
            raise ParameterError(f"T must be finite and nonzero, got {self.T}")
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.eta < 1 / 3:
            raise ParameterError(f"eta must lie in (0, 1/3), got {self.eta}")
        if not self.epsilon < 1 - 3 * self.eta:
            raise ParameterError(
                f"epsilon must be below 1 - 3·eta = {1 - 3 * self.eta:.6g}, got {self.epsilon}"
            )
        if self.d is not None and not 0 <= self.d <= config.MAX_EXPANSION_ORDER:
            raise ParameterError(
                f"expansion order must lie in 0..{config.MAX_EXPANSION_ORDER}, got {self.d}"
            )
        if self.delta is not None and not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if self.threads is not None and self.threads < 1:
            raise ParameterError(f"threads must be >= 1, got {self.threads}")
        config.get_precision_policy(self.precision)

    def grouping_radius(self, scale: float, growth: Optional[float] = None,
                        length: float = 0.0) -> float:
        """
        Neighbourhood radius δ for grouping segment starts.

        T̃^{-(2η+ε)} unless overridden. Given the derivative scale R and the
        segment length M, δ is shrunk until a member displaced by at most
        δ·(2 + M + M²) over its segment meets T^{-γ} within the group order
        cap, so no member of a group is evaluated on its own.
        """
        if self.delta is not None:
            return self.delta
        radius = scale ** (-(2 * self.eta + self.epsilon))
        if growth is None:
            return radius
        cap = self.d if self.d is not None else min(config.MAX_EXPANSION_ORDER, config.MAX_GROUP_ORDER)
        rate = max_offset_rate(scale, self.gamma, cap)
        return min(radius, rate / (2 * growth * (2 + length + length * length)))

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def fourier_segment_length(T: int, eta: float) -> int:
    """M = ⌊T^η⌋, at least 1."""
    return max(1, math.floor(T ** eta + 1e-9))


def auto_expansion_order(T: float, gamma: float, epsilon: float,
                         cap: int = config.MAX_EXPANSION_ORDER) -> int:
    """
    Smallest d with 2^d·d³·T^{-dε/2}·(d+1)⁴ <= T^{-γ}, capped.
    """
    log_T = math.log(max(abs(T), 2.0))
    for d in range(1, cap + 1):
        lhs = d * math.log(2) + 3 * math.log(d) - d * epsilon / 2 * log_T + 4 * math.log(d + 1)
        if lhs <= -gamma * log_T:
            return d
    return cap


def max_offset_rate(T: float, gamma: float, d: int) -> float:
    """Largest ρR with (ρR)^{d+1}·(d+1)⁴ <= T^{-γ}."""
    log_target = -gamma * math.log(max(abs(T), 2.0))
    return math.exp((log_target - 4 * math.log(d + 1)) / (d + 1))


def required_order(offset: float, growth: float, T: float, gamma: float,
                   cap: int) -> Optional[int]:
    """
    Smallest d with (ρR)^{d+1}·(d+1)⁴ <= T^{-γ} for a member at offset ρ.

    Returns:
        The order, or None when no d <= cap suffices
    """
    if offset == 0:
        return 0
    rate = offset * growth
    if rate >= 1:
        return None
    log_target = -gamma * math.log(max(abs(T), 2.0))
    for d in range(cap + 1):
        if (d + 1) * math.log(rate) + 4 * math.log(d + 1) <= log_target:
            return d
    return None


class PipelineResult(NamedTuple):
    """
    Output of a pipeline run.

    Attributes:
        value: f̂(T) or L(f, 1/2 + iT)
        abs_error_estimate: Advisory absolute error
        jet_evals: Number of curve-jet evaluations
        groups: Number of segment groups (0 for direct runs)
        segments: Number of segments (0 for direct runs)
        params: The parameters of the run
    """
    value: complex
    abs_error_estimate: float
    jet_evals: int
    groups: int
    segments: int
    params: PipelineParams
