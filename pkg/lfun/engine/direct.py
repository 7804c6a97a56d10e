# Direct Pipelines
"""
O(T^{1+ε}) reference computations: one Taylor-grid integral along the
whole horocycle or contour, reducing the curve point in every cell.
"""

import logging
import math

from lfun.engine.integrals import contour_integral, horocycle_integral
from lfun.engine.params import PipelineParams, PipelineResult
from lfun.engine.segments import segment_weight
from lfun.errors import ParameterError
from lfun.forms.spec import CuspFormSpec
from lfun.geomfe import assemble_L, contour_for
from lfun.geometry import a_matrix, kappa_matrix
from lfun.specfun import bessel_k


logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


def fourier_scale(form: CuspFormSpec, T: int) -> complex:
    """
    Factor turning ∫₀^T f̃(a(-log T)n(t))e(-t)dt into f̂(T):
    e^{2π}·T^{k/2-1} (holomorphic) or T^{-1}/K_{ir}(2π) (Maass).
    """
    if form.is_holomorphic:
        return math.exp(TWO_PI + (form.weight / 2 - 1) * math.log(T))
    return 1 / (T * complex(bessel_k(form.r, TWO_PI)))


def check_fourier_index(T) -> int:
    if int(T) != T or T < 1:
        raise ParameterError(f"the Fourier pipeline needs a positive integer T, got {T}")
    return int(T)


def fourier_direct(form: CuspFormSpec, T: int, params: PipelineParams) -> PipelineResult:
    """
    f̂(T) from a single integral over [0, T].

    Args:
        form: Cusp form
        T: Positive integer index
        params: Exponents for the grid integrator

    Returns:
        PipelineResult with groups = segments = 0
    """
    T = check_fourier_index(T)
    table = horocycle_integral(a_matrix(-math.log(T)), float(T), form, params)
    scale = fourier_scale(form, T)
    value = scale * complex(table.values[0, 0])
    logger.info("fourier_direct T=%d: %d jet evaluations", T, table.jet_evals)
    return PipelineResult(value, abs(scale) * table.err_est, table.jet_evals, 0, 0, params)


def lvalue_direct(form: CuspFormSpec, T: float, params: PipelineParams) -> PipelineResult:
    """
    L(f, 1/2 + iT) from one integral over the window along κ.

    The contour is traversed by arclength v = T̃·log(t/t0).
    """
    contour = contour_for(form, T, params.gamma, params.precision)
    return lvalue_direct_on(form, contour, params)


def lvalue_direct_on(form: CuspFormSpec, contour, params: PipelineParams) -> PipelineResult:
    t0 = contour.window.t0
    base = kappa_matrix(t0, contour.scale, contour.direction)
    table = contour_integral(base, contour.log_span, contour, form, params)
    weight = segment_weight(contour, t0).to_complex()
    integral = weight * complex(table.values[0, 0])
    value, err_note = assemble_L(contour, integral, abs(weight) * table.err_est)
    logger.info("lvalue_direct T=%g: %d jet evaluations", contour.T, table.jet_evals)
    return PipelineResult(value, err_note, table.jet_evals, 0, 0, params)
