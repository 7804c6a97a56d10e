# Taylor Grid Quadrature
"""
Taylor grid integration of real-analytic integrands.

Algorithm:
1. Split [start, start + L] into cells of width h = min(1, T^{-ε}/R)
2. Ask the provider for the order-N Taylor jet at each cell's left end
3. Integrate the jet termwise: c_k contributes c_k·w^{k+1}/(k+1)
4. Accumulate cells in ascending order with compensated summation

N = ⌈(1 + l/γ)·γ/ε⌉ for integrands with |∂ⁿg(u)| ≤ n!(lR)ⁿ(1 + u^l),
capped at MAX_QUADRATURE_ORDER.

Pros:
- Error decays like (hR)^N per cell with no oscillation penalty
- One provider evaluation per cell serves every integrand of a family

Cons:
- Needs jets, not point values
- Cell count grows linearly with R
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from lfun.config import config
from lfun.errors import ParameterError
from lfun.jets import Jet1


logger = logging.getLogger(__name__)

Value = Union[complex, np.ndarray]


class QuadratureResult(NamedTuple):
    value: Value
    err_est: float


class QuadratureSpec(NamedTuple):
    """
    Integration request over [start, start + length].

    scale is the ambient T used for the cell width T^{-ε}/R; order
    overrides the automatic Taylor order.
    """
    length: float
    gamma: float
    epsilon: float
    scale: float
    order: Optional[int] = None
    start: float = 0.0

    def validate(self) -> None:
        if not self.length >= 0:
            raise ParameterError(f"interval length must be >= 0, got {self.length}")
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not self.scale > 0:
            raise ParameterError(f"scale must be positive, got {self.scale}")
        if self.order is not None and self.order < 2:
            raise ParameterError(f"quadrature order must be >= 2, got {self.order}")


# ============================================================================
# Providers
# ============================================================================

class IntegrandProvider(ABC):
    """
    Integrand given by its Taylor jets.

    Attributes:
        growth: Derivative scale R
        degree: Polynomial growth degree l
        jet_evals: Number of jets served so far
    """

    def __init__(self, growth: float = 1.0, degree: int = 0):
        if not growth > 0:
            raise ParameterError(f"growth R must be positive, got {growth}")
        self.growth = float(growth)
        self.degree = int(degree)
        self.jet_evals = 0

    @abstractmethod
    def jet(self, u0: float, order: int) -> Jet1:
        """Order-`order` Taylor jet at u0."""


class CallableProvider(IntegrandProvider):
    """Provider backed by a function (u0, order) -> Jet1."""

    def __init__(self, fn: Callable[[float, int], Jet1], growth: float = 1.0, degree: int = 0):
        super().__init__(growth, degree)
        self.fn = fn

    def jet(self, u0: float, order: int) -> Jet1:
        self.jet_evals += 1
        return self.fn(u0, order)


class FactoredIntegrandProvider(IntegrandProvider):
    """
    Family g_{a,b}(u) = left_a(u)·right_b(u).

    factors(u0, order) returns Taylor tables left (A, N+1) and right (B, N+1);
    the family integrates to an (A, B) matrix.
    """

    @abstractmethod
    def factors(self, u0: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
        """Left and right Taylor tables at u0."""

    def jet(self, u0: float, order: int) -> Jet1:
        """Jet of the (0, 0) member."""
        left, right = self.factors(u0, order)
        return Jet1(np.convolve(left[0], right[0])[: order + 1])


def spot_check_growth(provider: IntegrandProvider, points: Sequence[float], order: int) -> bool:
    """
    Check the declared (R, l) against jets at a few points, within factor 4.

    |c_n(u)| <= 4·S·(max(1, l)·R)^n·(1 + u^l) with S the largest |c_0| seen.
    """
    jets = [(u, provider.jet(u, order).coeffs) for u in points]
    scale = max((abs(c[0]) for _, c in jets), default=0.0)
    if scale == 0:
        return True
    rate = max(1, provider.degree) * provider.growth
    n = np.arange(order + 1)
    for u, coeffs in jets:
        bound = 4 * scale * rate ** n * (1 + abs(u) ** provider.degree)
        if np.any(np.abs(coeffs) > bound):
            logger.warning("declared growth R=%.4g, l=%d violated at u=%.6g",
                           provider.growth, provider.degree, u)
            return False
    return True


# ============================================================================
# Integration
# ============================================================================

def _kahan_add(total: Value, carry: Value, term: Value) -> Tuple[Value, Value]:
    y = term - carry
    t = total + y
    return t, (t - total) - y


def quadrature_order(degree: int, gamma: float, epsilon: float) -> int:
    """N = ⌈(1 + l/γ)·γ/ε⌉, capped at MAX_QUADRATURE_ORDER."""
    order = math.ceil((1 + degree / gamma) * gamma / epsilon - 1e-9)
    return max(4, min(order, config.MAX_QUADRATURE_ORDER))


def cell_width(spec: QuadratureSpec, growth: float) -> float:
    return min(1.0, spec.scale ** (-spec.epsilon) / growth)


def _power_weights(width: float, order: int) -> np.ndarray:
    k = np.arange(order + 1)
    return width ** (k + 1) / (k + 1)


def _bilinear_weights(width: float, order: int) -> np.ndarray:
    k = np.arange(order + 1)
    total = k[:, None] + k[None, :]
    weights = width ** (total + 1) / (total + 1)
    weights[total > order] = 0
    return weights


def taylor_grid_integrate(provider: IntegrandProvider, spec: QuadratureSpec) -> QuadratureResult:
    """
    Integrate a provider's integrand over [spec.start, spec.start + spec.length].

    Args:
        provider: Jet provider; FactoredIntegrandProvider yields a matrix
        spec: Interval and exponents

    Returns:
        QuadratureResult(value, err_est); err_est is advisory

    Raises:
        ParameterError: On an invalid QuadratureSpec
    """
    spec.validate()
    factored = isinstance(provider, FactoredIntegrandProvider)
    if spec.length == 0:
        if factored:
            left, right = provider.factors(spec.start, 0)
            return QuadratureResult(np.zeros((left.shape[0], right.shape[0]), dtype=complex), 0.0)
        return QuadratureResult(0j, 0.0)

    h = cell_width(spec, provider.growth)
    order = spec.order or quadrature_order(provider.degree, spec.gamma, spec.epsilon)
    cells = max(1, math.ceil(spec.length / h - 1e-12))

    total: Value = 0j
    carry: Value = 0j
    diff_sum = 0.0
    head = 0.0
    for i in range(cells):
        u0 = spec.start + i * h
        width = min(h, spec.length - i * h)
        if factored:
            left, right = provider.factors(u0, order)
            weights = _bilinear_weights(width, order)
            part = left @ weights @ right.T
            lower = left[:, : order - 1] @ _bilinear_weights(width, order - 2) @ right[:, : order - 1].T
            diff = float(np.max(np.abs(part - lower)))
            head = max(head, float(np.max(np.abs(left[:, 0]))) * float(np.max(np.abs(right[:, 0]))))
        else:
            coeffs = provider.jet(u0, order).coeffs
            weights = _power_weights(width, order)
            part = complex(coeffs @ weights)
            diff = abs(complex(coeffs[order - 1 :] @ weights[order - 1 :]))
            head = max(head, abs(coeffs[0]))
        total, carry = _kahan_add(total, carry, part)
        diff_sum += diff

    ratio = min(h * provider.growth, 1.0)
    tail = cells * h * head * ratio ** (order + 1)
    logger.debug("taylor grid: %d cells, width %.4g, order %d", cells, h, order)
    return QuadratureResult(total, diff_sum + tail)
