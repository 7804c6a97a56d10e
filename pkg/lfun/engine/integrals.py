# Segment Integral Tables
"""
Tables of segment integrals at a group representative v.

    I_l(v, ∂^β f̃) = ∫₀^M t^l·∂^β f̃(v·n(t))·e(-t) dt
    L_l(v, ∂^β f̃) = ∫₀^M u^l·∂^β f̃(v·ω(u))·(1 + u/T̃)^{ν-k/2-1} du

Every (β, l) pair comes from one factored provider: left factors are the
curve jets of ∂^β f̃, right factors the jets of the l-th weight.
"""

import math
from typing import Callable, NamedTuple, Sequence, Tuple

import numpy as np

from lfun.engine.params import PipelineParams
from lfun.forms.lift import Curve, LogFlow, NFlow, OmegaFlow, curve_taylor_table
from lfun.forms.spec import CuspFormSpec
from lfun.geomfe import ContourSpec
from lfun.geometry import Mat2, MultiIndex, multi_indices
from lfun.jets import Jet1
from lfun.quadrature import FactoredIntegrandProvider, QuadratureSpec, taylor_grid_integrate


TWO_PI = 2 * math.pi

WeightFn = Callable[[Jet1], Jet1]


class IntegralTable(NamedTuple):
    """values[row, l] for betas[row], l = 0..d."""
    betas: Tuple[MultiIndex, ...]
    values: np.ndarray
    err_est: float
    jet_evals: int

    def entry(self, beta, l: int) -> complex:
        return complex(self.values[self.betas.index(MultiIndex(*beta)), l])


class CurveProvider(FactoredIntegrandProvider):
    """
    Left factors ∂^β f̃(x·curve(u)), right factors u^l·weight(u).
    """

    def __init__(self, form: CuspFormSpec, base: Mat2, betas: Sequence[MultiIndex],
                 curve: Curve, weight: WeightFn, powers: int, growth: float):
        super().__init__(growth=growth, degree=powers)
        self.form = form
        self.base = base
        self.betas = tuple(betas)
        self.curve = curve
        self.weight = weight
        self.powers = powers

    def factors(self, u0: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
        self.jet_evals += 1
        left = curve_taylor_table(self.form, self.base, self.betas, self.curve, u0, order)
        u = Jet1.variable(u0, order)
        w = self.weight(u)
        right = np.zeros((self.powers + 1, order + 1), dtype=complex)
        for l in range(self.powers + 1):
            right[l] = w.coeffs
            w = w * u
        return left, right


def _growth(form: CuspFormSpec, frequency: float) -> float:
    return max(form.deriv_bound or 1.0, frequency)


def _integrate(provider: CurveProvider, length: float, params: PipelineParams,
               scale: float) -> IntegralTable:
    spec = QuadratureSpec(length=length, gamma=params.gamma, epsilon=params.epsilon,
                          scale=scale, order=params.order)
    result = taylor_grid_integrate(provider, spec)
    return IntegralTable(provider.betas, np.asarray(result.value), result.err_est, provider.jet_evals)


def horocycle_phase(u: Jet1) -> Jet1:
    """e(-u)."""
    return (u * (-TWO_PI * 1j)).exp()


def batch_I(v: Mat2, d: int, M: float, form: CuspFormSpec, params: PipelineParams) -> IntegralTable:
    """
    I_l(v, ∂^β f̃) for |β| <= d and l <= d.

    Args:
        v: Representative
        d: Expansion order
        M: Segment length (0 gives an all-zero table)
        form: Cusp form
        params: Exponents for the grid integrator

    Returns:
        IntegralTable with one row per β
    """
    provider = CurveProvider(form, v, multi_indices(d), NFlow(), horocycle_phase, d,
                             _growth(form, TWO_PI))
    return _integrate(provider, M, params, abs(params.T))


def contour_weight(contour: ContourSpec) -> WeightFn:
    """u -> (1 + u/T̃)^{ν-k/2-1}."""
    exponent = contour.nu - contour.weight / 2 - 1

    def weight(u: Jet1) -> Jet1:
        return (u / contour.scale + 1).pow(exponent)

    return weight


def batch_L(v: Mat2, d: int, M: float, contour: ContourSpec, form: CuspFormSpec,
            params: PipelineParams) -> IntegralTable:
    """L_l(v, ∂^β f̃) for |β| <= d and l <= d along ω(u)."""
    curve = OmegaFlow(contour.scale, contour.direction)
    frequency = 1 + abs(contour.nu) / contour.scale
    provider = CurveProvider(form, v, multi_indices(d), curve, contour_weight(contour), d,
                             _growth(form, frequency))
    return _integrate(provider, M, params, contour.scale)


def arclength_weight(contour: ContourSpec) -> WeightFn:
    """v -> e^{(ν-k/2)·v/T̃}, the factor (t/t0)^{ν-k/2} along t = t0·e^{v/T̃}."""
    rate = (contour.nu - contour.weight / 2) / contour.scale

    def weight(v: Jet1) -> Jet1:
        return (v * rate).exp()

    return weight


def contour_integral(base: Mat2, length: float, contour: ContourSpec, form: CuspFormSpec,
                     params: PipelineParams) -> IntegralTable:
    """∫₀^length f̃(base·c(v))·e^{(ν-k/2)v/T̃} dv along the arclength flow."""
    curve = LogFlow(contour.scale, contour.direction)
    frequency = 1 + abs(contour.nu) / contour.scale
    provider = CurveProvider(form, base, (MultiIndex(0, 0, 0),), curve, arclength_weight(contour),
                             0, _growth(form, frequency))
    return _integrate(provider, length, params, contour.scale)


def horocycle_integral(base: Mat2, length: float, form: CuspFormSpec,
                       params: PipelineParams) -> IntegralTable:
    """∫₀^length f̃(base·n(t))·e(-t) dt."""
    provider = CurveProvider(form, base, (MultiIndex(0, 0, 0),), NFlow(), horocycle_phase, 0,
                             _growth(form, TWO_PI))
    return _integrate(provider, length, params, abs(params.T))
