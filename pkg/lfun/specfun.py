# Special Functions
"""
Special functions for the contour prefactors.

- log_gamma: upward recursion into Re z >= 20 followed by the Stirling series
- bessel_k: K_{ir}(x) from ∫₀^∞ e^{-x cosh u} cos(ru) du by truncated trapezoid
- bessel_k_jet: Taylor coefficients of K_{ir} from the modified Bessel ODE
- hyp2f1: Gauss series, the 1/(1-z) connection formula and the Pfaff map
- mellin_cos_bessel: C(T1) = ∫₀^∞ cos(T1 t) K_{ir}(t) t^{iT-1/2} dt
- select_T1: scan for a T1 with |C(T1)| bounded below

Exponentially large and small factors are kept as LogComplex values. The
extended precision mode evaluates the same closed forms through mpmath.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple, Union

import mpmath
import numpy as np

from lfun.config import config
from lfun.errors import (
    DegenerateTransformationError,
    DomainError,
    ParameterError,
    PoleError,
    SelectionFailureError,
)
from lfun.jets import Jet1


logger = logging.getLogger(__name__)

LOG_2PI = math.log(2 * math.pi)

# B_{2n} / (2n(2n-1)) for n = 1..10
_STIRLING = (
    1 / 12,
    -1 / 360,
    1 / 1260,
    -1 / 1680,
    1 / 1188,
    -691 / 360360,
    1 / 156,
    -3617 / 122400,
    43867 / 244188,
    -174611 / 125400,
)
_STIRLING_MIN_REAL = 20.0

_SERIES_TOLERANCE = 1e-17
_SERIES_MAX_TERMS = 20000


# ============================================================================
# Value types
# ============================================================================

def _fold(theta: float) -> float:
    theta = math.remainder(theta, 2 * math.pi)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return theta


@dataclass(frozen=True)
class LogComplex:
    """
    Complex number stored as logmag + i·arg, arg in (-π, π].

    Zero is represented by logmag = -inf.
    """
    logmag: float
    arg: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "arg", _fold(float(self.arg)))

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(z)), cmath.phase(z))

    @classmethod
    def from_log(cls, w: complex) -> "LogComplex":
        """The number exp(w)."""
        w = complex(w)
        return cls(w.real, w.imag)

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(0.0, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.logmag == -math.inf

    def log_value(self) -> complex:
        return complex(self.logmag, self.arg)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return math.exp(self.logmag) * cmath.exp(1j * self.arg)

    def __mul__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.is_zero or other.is_zero:
            return LogComplex(-math.inf, 0.0)
        return LogComplex(self.logmag + other.logmag, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogComplex")
        if self.is_zero:
            return self
        return LogComplex(self.logmag - other.logmag, self.arg - other.arg)

    def __pow__(self, exponent: complex) -> "LogComplex":
        """Principal power exp(p·log z)."""
        if self.is_zero:
            return self
        return LogComplex.from_log(exponent * self.log_value())

    def __add__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        big, small = (self, other) if self.logmag >= other.logmag else (other, self)
        ratio = cmath.exp(complex(small.logmag - big.logmag, small.arg - big.arg))
        return big * LogComplex.from_complex(1 + ratio)

    __radd__ = __add__

    def conjugate(self) -> "LogComplex":
        return LogComplex(self.logmag, -self.arg)


@dataclass(frozen=True)
class SpectralParam:
    """Spectral parameter r of a Maass form (eigenvalue 1/4 + r²)."""
    r: complex

    def __post_init__(self):
        r = complex(self.r)
        if abs(r.imag) >= 0.5:
            raise ParameterError(f"spectral parameter needs |Im r| < 1/2, got {r}")
        object.__setattr__(self, "r", r)


Order = Union[SpectralParam, complex, float]


def _order(r: Order) -> complex:
    return r.r if isinstance(r, SpectralParam) else complex(r)


# ============================================================================
# Gamma
# ============================================================================

def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma_value(z: complex) -> complex:
    """
    A logarithm of Γ(z) (imaginary part correct modulo 2π).

    Raises:
        PoleError: At non-positive integers
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    shift = max(0, math.ceil(_STIRLING_MIN_REAL - z.real))
    correction = 0j
    for j in range(shift):
        correction += cmath.log(z + j)
    w = z + shift
    inv = 1 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for coeff in _STIRLING:
        series += coeff * power
        power *= inv2
    return (w - 0.5) * cmath.log(w) - w + 0.5 * LOG_2PI + series - correction


def log_gamma(z: complex, precision: str = "double") -> LogComplex:
    """
    Principal log Γ(z) as a LogComplex.

    Args:
        z: Complex argument, not a non-positive integer
        precision: "double" (Stirling series) or "extended" (mpmath)

    Returns:
        LogComplex with logmag = log|Γ(z)| and arg = arg Γ(z)
    """
    if precision == "extended":
        if _is_nonpositive_integer(z):
            raise PoleError(f"Gamma has a pole at {z}")
        with mpmath.workdps(config.EXTENDED_POLICY.digits):
            return LogComplex.from_log(complex(mpmath.loggamma(mpmath.mpc(z))))
    return LogComplex.from_log(log_gamma_value(z))


def _gamma_ratio(numer: Sequence[complex], denom: Sequence[complex]) -> complex:
    """Π Γ(numer) / Π Γ(denom); zero when a denominator sits on a pole."""
    if any(_is_nonpositive_integer(z) for z in denom):
        return 0j
    log_value = sum(log_gamma_value(z) for z in numer) - sum(log_gamma_value(z) for z in denom)
    return cmath.exp(log_value)


# ============================================================================
# K-Bessel of imaginary order
# ============================================================================

def _bessel_k_scalar(r: complex, x: float, power: int) -> complex:
    """∫₀^∞ (-cosh u)^power e^{-x cosh u} cos(ru) du by trapezoid."""
    step = min(0.1, 0.5 / math.sqrt(x))
    upper = math.acosh(1 + 50.0 / x) + 4 * step
    count = int(math.ceil(upper / step))
    u = np.arange(count + 1) * step
    cosh_u = np.cosh(u)
    values = np.exp(-x * (cosh_u - 1)) * np.cos(r * u)
    if power:
        values = values * (-cosh_u) ** power
    total = step * (0.5 * values[0] + values[1:].sum())
    return complex(total * math.exp(-x))


def _as_real_positive(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError(f"K-Bessel argument must be positive, got {x}")
    return arr


def bessel_k(r: Order, x):
    """
    K_{ir}(x) for x > 0 (scalar or array).

    Raises:
        DomainError: If any x <= 0
    """
    nu = _order(r)
    arr = _as_real_positive(x)
    if arr.ndim == 0:
        return _bessel_k_scalar(nu, float(arr), 0)
    return np.array([_bessel_k_scalar(nu, float(v), 0) for v in arr.ravel()]).reshape(arr.shape)


def bessel_k_derivative(r: Order, x: float) -> complex:
    """K'_{ir}(x), differentiating under the integral."""
    arr = _as_real_positive(x)
    return _bessel_k_scalar(_order(r), float(arr), 1)


def bessel_k_jet(r: Order, x0: float, order: int) -> Jet1:
    """
    Taylor coefficients of K_{ir} at x0 up to the given order.

    Seeds K(x0), K'(x0) come from quadrature; higher coefficients follow
    x²w'' + xw' - (x² - r²)w = 0 expanded at x0.
    """
    nu = _order(r)
    x0 = float(_as_real_positive(x0))
    w = np.zeros(order + 1, dtype=complex)
    w[0] = _bessel_k_scalar(nu, x0, 0)
    if order >= 1:
        w[1] = _bessel_k_scalar(nu, x0, 1)
    r2 = nu * nu  # -(ir)²
    x2 = x0 * x0
    for m in range(0, order - 1):
        prev1 = w[m - 1] if m >= 1 else 0.0
        prev2 = w[m - 2] if m >= 2 else 0.0
        w[m + 2] = -(
            (m + 1) * (2 * m + 1) * x0 * w[m + 1]
            + (m * m - x2 + r2) * w[m]
            - 2 * x0 * prev1
            - prev2
        ) / (x2 * (m + 1) * (m + 2))
    return Jet1(w)


# ============================================================================
# Gauss hypergeometric function
# ============================================================================

def hyp2f1_series(a: complex, b: complex, c: complex, z: complex) -> complex:
    """
    Direct Gauss series Σ (a)_n(b)_n / ((c)_n n!) z^n for |z| < 1.

    Raises:
        PoleError: If c is a non-positive integer
        DomainError: If the series fails to reach the machine tail
    """
    if _is_nonpositive_integer(c):
        raise PoleError(f"hypergeometric parameter c = {c} is a pole")
    if abs(z) >= 1:
        raise DomainError(f"Gauss series diverges at |z| = {abs(z)}")
    total = 1 + 0j
    term = 1 + 0j
    quiet = 0
    for n in range(_SERIES_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= _SERIES_TOLERANCE * abs(total):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise DomainError(f"Gauss series at z = {z} did not converge in {_SERIES_MAX_TERMS} terms")


def hyp2f1_inverse_transform(a: complex, b: complex, c: complex, z: complex) -> complex:
    """
    F(a,b;c;z) through the connection formula in the variable 1/(1-z).

    Raises:
        DegenerateTransformationError: If a - b is an integer
    """
    diff = complex(a - b)
    if diff.imag == 0 and diff.real == math.floor(diff.real):
        raise DegenerateTransformationError(
            f"a - b = {diff} is an integer; the 1/(1-z) transformation is degenerate"
        )
    w = 1 / (1 - z)
    log_one_minus = cmath.log(1 - z)
    first = _gamma_ratio([c, b - a], [b, c - a])
    second = _gamma_ratio([c, a - b], [a, c - b])
    total = 0j
    if first:
        total += first * cmath.exp(-a * log_one_minus) * hyp2f1_series(a, c - b, 1 + a - b, w)
    if second:
        total += second * cmath.exp(-b * log_one_minus) * hyp2f1_series(b, c - a, 1 + b - a, w)
    return total


def hyp2f1(a: complex, b: complex, c: complex, z: complex) -> complex:
    """
    Gauss hypergeometric function 2F1(a, b; c; z).

    Routes: direct series for |z| <= 1/2, the 1/(1-z) connection formula
    when |1/(1-z)| <= 1/2 (this covers z <= -1), the Pfaff map
    z -> z/(z-1) when that lands in |·| <= 1/2, and the plain series for
    the remaining points of the unit disc.

    Raises:
        PoleError: If c is a non-positive integer
        DomainError: For z on the cut [1, ∞) or outside every route
        DegenerateTransformationError: If the connection formula is needed
            and a - b is an integer
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_integer(c):
        raise PoleError(f"hypergeometric parameter c = {c} is a pole")
    if z == 0:
        return 1 + 0j
    if z.imag == 0 and z.real >= 1:
        raise DomainError(f"z = {z} lies on the branch cut [1, ∞)")
    if abs(z) <= 0.5:
        return hyp2f1_series(a, b, c, z)
    if abs(1 / (1 - z)) <= 0.5:
        return hyp2f1_inverse_transform(a, b, c, z)
    pfaff = z / (z - 1)
    if abs(pfaff) <= 0.5:
        return cmath.exp(-a * cmath.log(1 - z)) * hyp2f1_series(a, c - b, c, pfaff)
    if abs(z) < 1:
        return hyp2f1_series(a, b, c, z)
    return hyp2f1_inverse_transform(a, b, c, z)


# ============================================================================
# Mellin transform of cos × K-Bessel
# ============================================================================

class MellinParts(NamedTuple):
    """C(T1) = D·(F1 + E·F2)."""
    D: LogComplex
    E: complex
    F1: complex
    F2: complex

    def value(self) -> LogComplex:
        return self.D * LogComplex.from_complex(self.F1 + self.E * self.F2)


def _mellin_parameters(T: float, r: complex) -> Tuple[complex, complex]:
    a = (1j * r + 1j * T + 0.5) / 2
    b = (-1j * r + 1j * T + 0.5) / 2
    return a, b


def mellin_cos_bessel_parts(T: float, T1: float, r: Order) -> MellinParts:
    """
    The D factor, E factor and reduced hypergeometric values of C(T1).

    Raises:
        DegenerateTransformationError: If r = 0 (Γ(±ir) has a pole)
    """
    nu = _order(r)
    if nu == 0:
        raise DegenerateTransformationError("r = 0 makes the D/E split degenerate")
    a, b = _mellin_parameters(T, nu)
    log_base = math.log1p(T1 * T1)
    log_d = (
        (1j * T - 1.5) * math.log(2)
        + log_gamma_value(a)
        + log_gamma_value(0.5)
        + log_gamma_value(-1j * nu)
        - a * log_base
        - log_gamma_value(0.5 - a)
    )
    log_e = (
        log_gamma_value(1j * nu)
        + log_gamma_value(b)
        + log_gamma_value(0.5 - a)
        - log_gamma_value(-1j * nu)
        - log_gamma_value(a)
        - log_gamma_value(0.5 - b)
        + 1j * nu * log_base
    )
    w = 1 / (1 + T1 * T1)
    f1 = hyp2f1_series(a, 0.5 - b, 1 + 1j * nu, w)
    f2 = hyp2f1_series(b, 0.5 - a, 1 - 1j * nu, w)
    return MellinParts(LogComplex.from_log(log_d), cmath.exp(log_e), f1, f2)


def mellin_cos_bessel(T: float, T1: float, r: Order, precision: str = "double") -> LogComplex:
    """
    C(T1) = ∫₀^∞ cos(T1 t) K_{ir}(t) t^{iT-1/2} dt in log space.

    The closed form is 2^{iT-3/2} Γ(a) Γ(b) F(a, b; 1/2; -T1²) with
    a = (ir+iT+1/2)/2, b = (-ir+iT+1/2)/2.

    Raises:
        ParameterError: If T1 <= 0
    """
    if T1 <= 0:
        raise ParameterError(f"T1 must be positive, got {T1}")
    nu = _order(r)
    if precision == "extended":
        a, b = _mellin_parameters(T, nu)
        with mpmath.workdps(config.EXTENDED_POLICY.digits):
            total = (
                (1j * T - 1.5) * mpmath.log(2)
                + mpmath.loggamma(a)
                + mpmath.loggamma(b)
                + mpmath.log(mpmath.hyp2f1(a, b, 0.5, -mpmath.mpf(T1) ** 2))
            )
            return LogComplex.from_log(complex(total))
    return mellin_cos_bessel_parts(T, T1, nu).value()


def F_validity_bound(T: float, r: Order) -> float:
    """
    Smallest B such that both reduced hypergeometric factors are close to 1
    for every T1 >= B·|T|.

    Uses |z|·max_l |(a+l)(b+l)/((c+l)(l+1))| <= 1/2 and |abz/c| <= 1/10
    with z = 1/(1 + B²T²).
    """
    nu = _order(r)
    a, b = _mellin_parameters(T, nu)
    z_max = math.inf
    for (p, q, c) in ((a, 0.5 - b, 1 + 1j * nu), (b, 0.5 - a, 1 - 1j * nu)):
        span = int(4 * (abs(p) + abs(q) + abs(c))) + 64
        l = np.arange(span)
        ratios = np.abs((p + l) * (q + l) / ((c + l) * (l + 1)))
        z_max = min(z_max, 0.5 / ratios.max(), abs(c) / (10 * abs(p * q)))
    return math.sqrt(max(1 / z_max - 1, 0.0)) / abs(T)


def select_T1(T: float, r: Order, precision: str = "double") -> Tuple[float, LogComplex]:
    """
    Choose T1 = c·|T| maximizing |C(T1)| over a log-spaced scan c ∈ [B, 20B].

    Args:
        T: Height of the L-value (nonzero; the sign selects s = 1/2 ± i|T|)
        r: Spectral parameter
        precision: Arithmetic mode for C(T1)

    Returns:
        Tuple of (T1, C(T1))

    Raises:
        SelectionFailureError: If max |C(T1)|·|T| < T1_THRESHOLD
    """
    if T == 0:
        raise ParameterError("T must be nonzero")
    # T1 >= 1 keeps the scan away from zero
    bound = max(F_validity_bound(T, r), 1 / abs(T))
    candidates = np.geomspace(bound, config.T1_SCAN_SPAN * bound, config.T1_SCAN_POINTS)
    best_T1, best_C = None, None
    for c in candidates:
        T1 = float(c * abs(T))
        value = mellin_cos_bessel(T, T1, r, precision)
        if best_C is None or value.logmag > best_C.logmag:
            best_T1, best_C = T1, value
    score = best_C.logmag + math.log(abs(T))
    if score < math.log(config.T1_THRESHOLD):
        raise SelectionFailureError(
            f"max |C(T1)|·T = {math.exp(score):.3g} below {config.T1_THRESHOLD} "
            f"for T = {T}, r = {_order(r)}"
        )
    logger.info("selected T1 = %.6g (B = %.4g, |C|·T = %.4g)", best_T1, bound, math.exp(score))
    return best_T1, best_C
