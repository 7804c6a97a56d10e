# Geometric Functional Equation
"""
Contours, truncation windows and prefactors that turn L(f, 1/2 + iT) into
an integral of f along a line through the origin.

Holomorphic (weight k), ν = s + (k-1)/2:
    L(f, s) = (2π)^ν (-α̃i)^ν / Γ(ν) · ∫₀^∞ f(α̃t) t^{ν-1} dt,   α̃ = -1 + i/T

Even Maass, ν = s - 1/2:
    L(f, s) = (2π)^s / (2·T₁^{s-1/2}·C(T₁)) · ∫₀^∞ f(α̃t) t^{ν-1} dt,   α̃ = -1 + i/T₁

For T < 0 the mirrored contour α̃ = 1 + i/|T| is used so the prefactor
stays of moderate size.
"""

import cmath
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import mpmath
import numpy as np
from scipy.special import factorial

from lfun.config import config
from lfun.errors import ParameterError, PrecisionModeRequiredError
from lfun.forms.lift import AFlow, curve_taylor_table
from lfun.forms.spec import CuspFormSpec
from lfun.geometry import IDENTITY, MultiIndex
from lfun.quadrature import FactoredIntegrandProvider, QuadratureSpec, taylor_grid_integrate
from lfun.specfun import LOG_2PI, LogComplex, log_gamma, select_T1


logger = logging.getLogger(__name__)

HOLO = "holo"
MAASS = "maass"


@dataclass(frozen=True)
class TruncationWindow:
    """
    [t0, t1] outside of which the contour integral is below tail.

    c is the window constant: t1 = c·T*·log T*, t0 = min(1, C1)/(c·T*·log T*).
    """
    t0: float
    t1: float
    c: float
    tail: float


@dataclass(frozen=True)
class ContourSpec:
    """
    Everything needed to turn a contour integral into an L-value.

    Attributes:
        kind: "holo" or "maass"
        T: Signed height, s = 1/2 + iT
        scale: Contour parameter T̃ (|T| or T₁)
        direction: σ = -sgn(T); κ(t) = n(σt)a(log(t/T̃))
        alpha: α̃ = σ + i/T̃
        nu: Exponent of the integrand f(α̃t)·t^{ν-1}
        weight: Weight k of the form
        prefactor: Log of the factor in front of the integral
        window: Truncation window
        precision: Arithmetic mode used for the prefactor
        T1: Maass scale, None for holomorphic contours
        mellin: C(T₁), None for holomorphic contours
    """
    kind: str
    T: float
    scale: float
    direction: int
    alpha: complex
    nu: complex
    weight: int
    prefactor: LogComplex
    window: TruncationWindow
    precision: str = "double"
    T1: Optional[float] = None
    mellin: Optional[LogComplex] = None

    @property
    def s(self) -> complex:
        return complex(0.5, self.T)

    @property
    def log_span(self) -> float:
        """Length of the window in the arclength variable v = T̃·log(t/t0)."""
        return self.scale * math.log(self.window.t1 / self.window.t0)

    def widened(self, factor: float = 2.0) -> "ContourSpec":
        """Same contour with t0 divided and t1 multiplied by factor."""
        w = self.window
        window = TruncationWindow(w.t0 / factor, w.t1 * factor, w.c, w.tail)
        return replace(self, window=window)


def _check_height(T: float) -> None:
    if T == 0 or not math.isfinite(T):
        raise ParameterError(f"T must be finite and nonzero, got {T}")


def _direction(T: float) -> int:
    return -1 if T > 0 else 1


# ============================================================================
# Truncation window
# ============================================================================

def _decay_rate(form: CuspFormSpec) -> float:
    return 2 * math.pi * form.coefficients.first_nonzero()


def truncation_window(form: CuspFormSpec, T: float, gamma: float,
                      scale: Optional[float] = None) -> TruncationWindow:
    """
    Window [t0, t1] cutting the contour integral with error O(T^{-γ}).

    Args:
        form: Cusp form (decay rate a = 2π·first nonzero index, Fricke C1)
        T: Height (sign ignored)
        gamma: Target exponent
        scale: Contour parameter T̃ when it differs from |T|

    Returns:
        TruncationWindow with t0 <= 1/(c·T*·log T*) and t1 >= c·T*·log T*
    """
    _check_height(T)
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    height = max(abs(T), scale or 0.0, math.e)
    log_height = math.log(height)
    a = _decay_rate(form)
    re_nu = form.weight / 2 if form.is_holomorphic else 0.0
    s0 = max(re_nu, form.weight + 1 - re_nu)

    c_prime = 1.0
    for _ in range(100):
        updated = max(1.0, 2 * (s0 - 1) / a * math.log(c_prime * height * log_height) / log_height)
        if abs(updated - c_prime) < 1e-12:
            break
        c_prime = updated
    c = 2 * (c_prime + 1) * (1 + 1 / a) * (1 + gamma)
    reach = c * height * log_height
    t1 = reach
    t0 = min(1.0, form.fricke_c1) / reach

    upper = (2 * height / a) * math.exp(-a * t1 / (2 * height))
    # mirrored through f(-C1/z) = C2·z^k·f(z)
    lower = upper * max(1.0, form.fricke_c1 ** s0) / abs(form.fricke_c2)
    return TruncationWindow(t0=t0, t1=t1, c=c, tail=upper + lower)


# ============================================================================
# Contours
# ============================================================================

def holo_contour(form: CuspFormSpec, T: float, gamma: float,
                 precision: Optional[str] = None) -> ContourSpec:
    """
    Contour and prefactor (2π)^ν(-α̃i)^ν/Γ(ν) for a holomorphic form.

    The e^{π|T|/2} growth of (-α̃i)^ν and the Γ(ν) decay cancel in log space.
    """
    _check_height(T)
    if not form.is_holomorphic:
        raise ParameterError("holo_contour needs a holomorphic form")
    precision = config.get_precision_policy(precision).name
    scale = abs(T)
    direction = _direction(T)
    alpha = complex(direction, 1 / scale)
    nu = complex(0.5, T) + (form.weight - 1) / 2
    log_prefactor = nu * LOG_2PI + nu * cmath.log(-1j * alpha) - log_gamma(nu, precision).log_value()
    return ContourSpec(
        kind=HOLO,
        T=T,
        scale=scale,
        direction=direction,
        alpha=alpha,
        nu=nu,
        weight=form.weight,
        prefactor=LogComplex.from_log(log_prefactor),
        window=truncation_window(form, T, gamma),
        precision=precision,
    )


def maass_contour(form: CuspFormSpec, T: float, gamma: float,
                  precision: Optional[str] = None) -> ContourSpec:
    """
    Contour and prefactor (2π)^s/(2·T₁^{s-1/2}·C(T₁)) for an even Maass form.

    Raises:
        SelectionFailureError: If no T₁ gives |C(T₁)|·T >= T1_THRESHOLD
    """
    _check_height(T)
    if form.is_holomorphic:
        raise ParameterError("maass_contour needs a maass-even form")
    precision = config.get_precision_policy(precision).name
    T1, mellin = select_T1(T, form.r, precision)
    s = complex(0.5, T)
    nu = s - 0.5
    direction = _direction(T)
    log_prefactor = s * LOG_2PI - math.log(2) - nu * math.log(T1) - mellin.log_value()
    return ContourSpec(
        kind=MAASS,
        T=T,
        scale=T1,
        direction=direction,
        alpha=complex(direction, 1 / T1),
        nu=nu,
        weight=0,
        prefactor=LogComplex.from_log(log_prefactor),
        window=truncation_window(form, T, gamma, scale=T1),
        precision=precision,
        T1=T1,
        mellin=mellin,
    )


def contour_for(form: CuspFormSpec, T: float, gamma: float,
                precision: Optional[str] = None) -> ContourSpec:
    if form.is_holomorphic:
        return holo_contour(form, T, gamma, precision)
    return maass_contour(form, T, gamma, precision)


# ============================================================================
# Assembly
# ============================================================================

def assemble_L(contour: ContourSpec, integral: complex,
               quad_err: float = 0.0) -> Tuple[complex, float]:
    """
    L = exp(prefactor)·integral, exponentiating only at the end.

    Args:
        contour: Contour the integral was taken along
        integral: ∫_{t0}^{t1} f(α̃t)·t^{ν-1} dt
        quad_err: Quadrature error estimate of the integral

    Returns:
        Tuple of (L, err_note); err_note carries the window tail and the
        quadrature error, times |T| for Maass contours

    Raises:
        PrecisionModeRequiredError: If |logmag| exceeds the mode's range
    """
    policy = config.get_precision_policy(contour.precision)
    logmag = contour.prefactor.logmag
    if abs(logmag) > policy.max_logmag:
        raise PrecisionModeRequiredError(
            f"prefactor log magnitude {logmag:.6g} exceeds {policy.max_logmag} "
            f"in {policy.name} mode; use --precision extended"
        )
    integral = complex(integral)
    if integral == 0:
        return 0j, 0.0
    if policy.name == "extended":
        with mpmath.workdps(policy.digits):
            factor = mpmath.exp(mpmath.mpc(contour.prefactor.logmag, contour.prefactor.arg))
            value = complex(factor * mpmath.mpc(integral))
            magnitude = float(abs(factor))
    else:
        factor = contour.prefactor.to_complex()
        value = factor * integral
        magnitude = abs(factor)
    err_note = magnitude * (contour.window.tail + quad_err)
    if contour.kind == MAASS:
        err_note *= abs(contour.T)
    return value, err_note


# ============================================================================
# Classical integral along the imaginary axis
# ============================================================================

class _ImaginaryAxisProvider(FactoredIntegrandProvider):
    """f̃(a(x))·e^{p·x} for each exponent p, x = log t."""

    def __init__(self, form: CuspFormSpec, exponents: Tuple[complex, ...], growth: float):
        super().__init__(growth=growth, degree=0)
        self.form = form
        self.exponents = np.asarray(exponents, dtype=complex)

    def factors(self, u0: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
        self.jet_evals += 1
        left = curve_taylor_table(self.form, IDENTITY, (MultiIndex(0, 0, 0),), AFlow(), u0, order)
        m = np.arange(order + 1)
        p = self.exponents[:, None]
        right = np.exp(p * u0) * p ** m / factorial(m)
        return left, right


def lvalue_classical(form: CuspFormSpec, T: float, gamma: Optional[float] = None,
                     epsilon: Optional[float] = None) -> complex:
    """
    L(f, 1/2 + iT) from the completed integral along the imaginary axis.

    With ν = s + (k-1)/2 (holomorphic) or s - 1/2 (Maass),
        Λ = ∫_{√C1}^∞ f(it)·(t^{ν-1} + C2·i^k·C1^ν·t^{k-ν-1}) dt
    and L = (2π)^ν/Γ(ν)·Λ or (2π)^s·2^{1-s}/(Γ((s+ir)/2)Γ((s-ir)/2))·Λ.
    The Γ-factors decay like e^{-π|T|/2}, so this is only usable at small T.
    """
    gamma = gamma or config.DEFAULT_GAMMA
    epsilon = epsilon or config.DEFAULT_EPSILON
    k = form.weight
    s = complex(0.5, T)
    nu = s + (k - 1) / 2 if form.is_holomorphic else s - 0.5
    # f̃(a(x)) = e^{kx/2}·f(ie^x)
    exponents = (nu - k / 2, k / 2 - nu)
    a = _decay_rate(form)
    start = 0.5 * math.log(form.fricke_c1)
    stop = max(start + 1.0, math.log(80.0 / a))
    growth = max(form.deriv_bound or 1.0, a * math.exp(stop))
    provider = _ImaginaryAxisProvider(form, exponents, growth)
    spec = QuadratureSpec(length=stop - start, gamma=gamma, epsilon=epsilon,
                          scale=max(abs(T), 2.0), start=start)
    integrals = taylor_grid_integrate(provider, spec).value[0]
    completed = integrals[0] + form.fricke_c2 * 1j ** k * form.fricke_c1 ** nu * integrals[1]

    if form.is_holomorphic:
        log_factor = nu * LOG_2PI - log_gamma(nu).log_value()
    else:
        r = form.r.r
        log_factor = (
            s * LOG_2PI
            + (1 - s) * math.log(2)
            - log_gamma((s + 1j * r) / 2).log_value()
            - log_gamma((s - 1j * r) / 2).log_value()
        )
    return cmath.exp(log_factor) * completed
