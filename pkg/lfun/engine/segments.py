# Segmentation
"""
Cutting the long horocycle (Fourier pipeline) and the contour {α̃t}
(L-value pipeline) into short pieces.

Fourier: ∫₀^T g(x₀n(t))dt = Σ_j ∫₀^M g(x₀n(jM)n(t))dt + remainder, with
x₀ = a(-log T) and M = ⌊T^η⌋ an integer, so e(-jM) = 1.

L-value: b_j = t0·(1 + T̃^{-1+η})^j and κ(b_j)ω(u) = κ(b_j(1 + u/T̃)), so
each piece is u ∈ [0, T̃^η] after the weight a_y = T̃^{k/2-1}·b_j^{ν-k/2}.
"""

import logging
import math
from typing import List, NamedTuple

from lfun.engine.params import fourier_segment_length
from lfun.errors import ParameterError
from lfun.geomfe import ContourSpec
from lfun.geometry import Mat2, a_matrix, kappa_matrix, n_matrix
from lfun.specfun import LogComplex


logger = logging.getLogger(__name__)


class Segment(NamedTuple):
    """
    One piece of the integration path.

    Attributes:
        index: Position j along the path
        base: Unreduced starting point x_j
        weight: Scalar factor a_y in log space (one for Fourier segments)
        length: Length of the inner variable range
        start: Path coordinate of the start (jM or b_j)
    """
    index: int
    base: Mat2
    weight: LogComplex
    length: float
    start: float


class FourierPlan(NamedTuple):
    x0: Mat2
    segment_length: int
    segments: List[Segment]
    remainder: Segment


class LValuePlan(NamedTuple):
    segment_length: float
    ratio: float
    segments: List[Segment]
    remainder: Segment


def plan_fourier_segments(T: int, eta: float) -> FourierPlan:
    """
    ⌊T/M⌋ full segments x₀n(jM) plus a remainder of length T - ⌊T/M⌋M.

    Args:
        T: Positive integer index of the coefficient
        eta: Segment exponent

    Returns:
        FourierPlan; the remainder has length 0 when M divides T
    """
    if int(T) != T or T < 1:
        raise ParameterError(f"the Fourier pipeline needs a positive integer T, got {T}")
    T = int(T)
    M = fourier_segment_length(T, eta)
    x0 = a_matrix(-math.log(T))
    count = T // M
    one = LogComplex.one()
    segments = [Segment(j, x0 @ n_matrix(j * M), one, float(M), float(j * M)) for j in range(count)]
    tail_start = count * M
    remainder = Segment(count, x0 @ n_matrix(tail_start), one, float(T - tail_start), float(tail_start))
    logger.info("Fourier plan: T=%d, M=%d, %d segments, remainder %d", T, M, count, T - tail_start)
    return FourierPlan(x0, M, segments, remainder)


def segment_weight(contour: ContourSpec, b: float) -> LogComplex:
    """a_y = T̃^{k/2-1}·b^{ν-k/2}."""
    half = contour.weight / 2
    return LogComplex.from_log((half - 1) * math.log(contour.scale) + (contour.nu - half) * math.log(b))


def plan_lvalue_segments(contour: ContourSpec, eta: float) -> LValuePlan:
    """
    Geometric ladder b_j from t0 with ratio 1 + T̃^{-1+η} while b_{j+1} <= t1.

    The last partial piece [b_J, t1] is returned as the remainder with
    u-length T̃(t1/b_J - 1).
    """
    scale = contour.scale
    M = scale ** eta
    ratio = 1 + M / scale
    t0, t1 = contour.window.t0, contour.window.t1
    count = max(0, math.floor(math.log(t1 / t0) / math.log(ratio) + 1e-12))
    while count > 0 and t0 * ratio ** count > t1:
        count -= 1

    def piece(j: int, b: float, length: float) -> Segment:
        base = kappa_matrix(b, scale, contour.direction)
        return Segment(j, base, segment_weight(contour, b), length, b)

    segments = [piece(j, t0 * ratio ** j, M) for j in range(count)]
    b_last = t0 * ratio ** count
    remainder = piece(count, b_last, max(0.0, scale * (t1 / b_last - 1)))
    logger.info("L-value plan: T̃=%.6g, M=%.4g, %d segments", scale, M, count)
    return LValuePlan(M, ratio, segments, remainder)
