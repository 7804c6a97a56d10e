# Truncated Power Series
"""
Jet arithmetic in one and three real variables.

A jet stores Taylor coefficients (derivative / k!) of a function at a base
point, truncated at a fixed order. Arithmetic is closed at that order.

Algorithm (Jet1):
1. Products are truncated convolutions
2. exp, log, pow, sin/cos, atan follow the classical first-order ODE
   recurrences (b' = a'b for exp, a·b' = α·a'·b for pow, ...)
3. Composition with a nilpotent inner series uses Horner's scheme

Jet3 keeps a dense coefficient cube masked to a downward-closed index set
(per-axis orders intersected with a total-degree bound). Products use
scipy.signal.convolve; elementary functions are the univariate Jet1 series
of the function at the constant term evaluated on the nilpotent part.
"""

import math
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import convolve

from lfun.errors import CompositionError, DomainError, SingularJetError


Scalar = Union[int, float, complex]


def _check_branch(c0: complex, what: str) -> None:
    if c0 == 0 or (c0.imag == 0 and c0.real < 0):
        raise DomainError(f"{what} of a jet with constant term {c0!r} (branch cut)")


class Jet1:
    """
    Truncated univariate Taylor series c0 + c1·s + ... + cN·s^N.

    Coefficients are complex; the order is len(coeffs) - 1.
    """

    __slots__ = ("coeffs",)
    __array_ufunc__ = None  # numpy scalars defer to the reflected operators

    def __init__(self, coeffs: Sequence[Scalar]):
        self.coeffs = np.array(coeffs, dtype=complex)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "Jet1":
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = value
        return cls(coeffs)

    @classmethod
    def variable(cls, value: Scalar, order: int) -> "Jet1":
        """The jet of s -> value + s."""
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = value
        if order >= 1:
            coeffs[1] = 1.0
        return cls(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return f"Jet1({self.coeffs!r})"

    def _coerce(self, other) -> "Jet1":
        if isinstance(other, Jet1):
            if other.order != self.order:
                raise ValueError(
                    f"jet orders differ: {self.order} and {other.order}"
                )
            return other
        return Jet1.constant(other, self.order)

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------

    def __add__(self, other) -> "Jet1":
        if isinstance(other, Jet1):
            return Jet1(self.coeffs + self._coerce(other).coeffs)
        out = self.coeffs.copy()
        out[0] += other
        return Jet1(out)

    __radd__ = __add__

    def __neg__(self) -> "Jet1":
        return Jet1(-self.coeffs)

    def __sub__(self, other) -> "Jet1":
        return self + (-other)

    def __rsub__(self, other) -> "Jet1":
        return (-self) + other

    def __mul__(self, other) -> "Jet1":
        if isinstance(other, Jet1):
            other = self._coerce(other)
            return Jet1(np.convolve(self.coeffs, other.coeffs)[: self.order + 1])
        return Jet1(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet1":
        if not isinstance(other, Jet1):
            return Jet1(self.coeffs / other)
        b = self._coerce(other).coeffs
        if b[0] == 0:
            raise SingularJetError("division by a jet with zero constant term")
        a = self.coeffs
        out = np.zeros_like(a)
        for k in range(self.order + 1):
            out[k] = (a[k] - np.dot(b[1 : k + 1], out[k - 1 :: -1][:k])) / b[0]
        return Jet1(out)

    def __rtruediv__(self, other) -> "Jet1":
        return Jet1.constant(other, self.order) / self

    def __pow__(self, alpha) -> "Jet1":
        return self.pow(alpha)

    # ------------------------------------------------------------------
    # Elementary functions
    # ------------------------------------------------------------------

    def exp(self) -> "Jet1":
        a = self.coeffs
        ka = np.arange(self.order + 1) * a
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        for k in range(1, self.order + 1):
            out[k] = np.dot(ka[1 : k + 1], out[k - 1 :: -1]) / k
        return Jet1(out)

    def log(self) -> "Jet1":
        a = self.coeffs
        _check_branch(complex(a[0]), "log")
        out = np.zeros_like(a)
        out[0] = np.log(a[0])
        kout = np.zeros_like(a)
        for k in range(1, self.order + 1):
            acc = np.dot(kout[1:k], a[k - 1 : 0 : -1]) if k > 1 else 0.0
            out[k] = (a[k] - acc / k) / a[0]
            kout[k] = k * out[k]
        return Jet1(out)

    def pow(self, alpha: Scalar) -> "Jet1":
        """Principal power; integer exponents are allowed on the negative axis."""
        a = self.coeffs
        c0 = complex(a[0])
        is_integer = isinstance(alpha, (int, np.integer)) or (
            isinstance(alpha, float) and alpha.is_integer()
        )
        if is_integer:
            if c0 == 0 and alpha < 0:
                raise SingularJetError("negative power of a jet with zero constant term")
            head = c0 ** int(alpha)
        else:
            _check_branch(c0, "pow")
            head = np.exp(alpha * np.log(c0))
        if c0 == 0:
            if int(alpha) == 0:
                return Jet1.constant(1.0, self.order)
            out = Jet1.constant(1.0, self.order)
            for _ in range(int(alpha)):
                out = out * self
            return out
        out = np.zeros_like(a)
        out[0] = head
        idx = np.arange(self.order + 1)
        for k in range(1, self.order + 1):
            j = idx[1 : k + 1]
            out[k] = np.dot(((alpha + 1) * j - k) * a[1 : k + 1], out[k - 1 :: -1]) / (k * c0)
        return Jet1(out)

    def sqrt(self) -> "Jet1":
        return self.pow(0.5)

    def sin_cos(self) -> Tuple["Jet1", "Jet1"]:
        a = self.coeffs
        ka = np.arange(self.order + 1) * a
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
        for k in range(1, self.order + 1):
            s[k] = np.dot(ka[1 : k + 1], c[k - 1 :: -1]) / k
            c[k] = -np.dot(ka[1 : k + 1], s[k - 1 :: -1]) / k
        return Jet1(s), Jet1(c)

    def sin(self) -> "Jet1":
        return self.sin_cos()[0]

    def cos(self) -> "Jet1":
        return self.sin_cos()[1]

    def atan(self) -> "Jet1":
        c0 = complex(self.coeffs[0])
        if c0 in (1j, -1j):
            raise DomainError(f"atan of a jet with constant term {c0!r}")
        if self.order == 0:
            return Jet1([np.arctan(c0)])
        derivative = self.derivative() / (1 + self * self).truncate(self.order - 1)
        return derivative.integrate(np.arctan(c0))

    def atan2(self, x: "Jet1") -> "Jet1":
        """Full-quadrant angle of (x, self) for real-valued jets."""
        x = self._coerce(x)
        y0, x0 = self.coeffs[0].real, x.coeffs[0].real
        if x0 == 0 and y0 == 0:
            raise DomainError("atan2 of jets with both constant terms zero")
        if self.order == 0:
            return Jet1([math.atan2(y0, x0)])
        lower = self.order - 1
        numer = x.truncate(lower) * self.derivative() - self.truncate(lower) * x.derivative()
        denom = (x * x + self * self).truncate(lower)
        return (numer / denom).integrate(math.atan2(y0, x0))

    # ------------------------------------------------------------------
    # Calculus and composition
    # ------------------------------------------------------------------

    def derivative(self) -> "Jet1":
        """Jet of the derivative, one order lower."""
        if self.order == 0:
            return Jet1([0.0])
        return Jet1(self.coeffs[1:] * np.arange(1, self.order + 1))

    def integrate(self, constant: Scalar = 0.0) -> "Jet1":
        """Antiderivative with the given constant term, one order higher."""
        out = np.zeros(self.order + 2, dtype=complex)
        out[0] = constant
        out[1:] = self.coeffs / np.arange(1, self.order + 2)
        return Jet1(out)

    def truncate(self, order: int) -> "Jet1":
        if order <= self.order:
            return Jet1(self.coeffs[: order + 1])
        out = np.zeros(order + 1, dtype=complex)
        out[: self.order + 1] = self.coeffs
        return Jet1(out)

    def compose(self, inner: "Jet1") -> "Jet1":
        """self ∘ inner for an inner series with zero constant term."""
        if inner.coeffs[0] != 0:
            raise CompositionError(
                f"inner series has nonzero constant term {inner.coeffs[0]!r}"
            )
        order = min(self.order, inner.order)
        return inner.truncate(order).apply_series(self.coeffs[: order + 1])

    def apply_series(self, series: Sequence[Scalar]) -> "Jet1":
        """Σ series[m]·(self - c0)^m, Horner over the nilpotent part."""
        nil = self.coeffs.copy()
        nil[0] = 0
        series = np.asarray(series, dtype=complex)
        top = min(len(series) - 1, self.order)
        out = np.zeros_like(nil)
        out[0] = series[top]
        for m in range(top - 1, -1, -1):
            out = np.convolve(out, nil)[: self.order + 1]
            out[0] += series[m]
        return Jet1(out)

    def evaluate(self, s: Scalar) -> complex:
        return complex(np.polynomial.polynomial.polyval(s, self.coeffs))

    def real(self) -> "Jet1":
        return Jet1(self.coeffs.real)

    def imag(self) -> "Jet1":
        return Jet1(self.coeffs.imag)


# ============================================================================
# Trivariate jets
# ============================================================================

@lru_cache(maxsize=256)
def _index_mask(orders: Tuple[int, int, int], degree: int) -> np.ndarray:
    i, j, k = np.ogrid[: orders[0] + 1, : orders[1] + 1, : orders[2] + 1]
    mask = (i + j + k) <= degree
    mask.setflags(write=False)
    return mask


def _univariate_series(name: str, c0: complex, order: int, *args) -> np.ndarray:
    base = Jet1.variable(c0, order)
    return getattr(base, name)(*args).coeffs


class Jet3:
    """
    Truncated Taylor series in three real variables.

    Coefficient [i, j, k] multiplies x1^i x2^j x3^k. Kept indices satisfy
    i <= o1, j <= o2, k <= o3 and i + j + k <= degree. The default index
    set is the full simplex of total degree d, i.e. C(d+3, 3) entries.
    """

    __slots__ = ("coeffs", "degree")
    __array_ufunc__ = None

    def __init__(self, coeffs: np.ndarray, degree: int):
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.ndim != 3:
            raise ValueError("Jet3 coefficients must be a 3-d array")
        orders = tuple(n - 1 for n in coeffs.shape)
        self.degree = degree
        self.coeffs = coeffs * _index_mask(orders, degree)

    @property
    def orders(self) -> Tuple[int, int, int]:
        return tuple(n - 1 for n in self.coeffs.shape)

    @property
    def size(self) -> int:
        return int(_index_mask(self.orders, self.degree).sum())

    @classmethod
    def constant(cls, value: Scalar, degree: int,
                 orders: Optional[Tuple[int, int, int]] = None) -> "Jet3":
        orders = orders or (degree, degree, degree)
        coeffs = np.zeros(tuple(o + 1 for o in orders), dtype=complex)
        coeffs[0, 0, 0] = value
        return cls(coeffs, degree)

    @classmethod
    def variable(cls, axis: int, value: Scalar, degree: int,
                 orders: Optional[Tuple[int, int, int]] = None) -> "Jet3":
        jet = cls.constant(value, degree, orders)
        if jet.orders[axis] >= 1 and degree >= 1:
            index = [0, 0, 0]
            index[axis] = 1
            jet.coeffs[tuple(index)] = 1.0
        return jet

    @classmethod
    def from_jet1(cls, jet: Jet1, axis: int, degree: int,
                  orders: Optional[Tuple[int, int, int]] = None) -> "Jet3":
        """Embed a univariate jet along one axis."""
        out = cls.constant(0.0, degree, orders)
        n = min(jet.order, out.orders[axis], degree) + 1
        index = [0, 0, 0]
        index[axis] = slice(0, n)
        out.coeffs[tuple(index)] = jet.coeffs[:n]
        out.coeffs *= _index_mask(out.orders, degree)
        return out

    def _like(self, coeffs: np.ndarray) -> "Jet3":
        return Jet3(coeffs, self.degree)

    def _coerce(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            if other.coeffs.shape != self.coeffs.shape or other.degree != self.degree:
                raise ValueError("Jet3 operands have different index sets")
            return other
        return Jet3.constant(other, self.degree, self.orders)

    @property
    def constant_term(self) -> complex:
        return complex(self.coeffs[0, 0, 0])

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------

    def __add__(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            return self._like(self.coeffs + self._coerce(other).coeffs)
        out = self.coeffs.copy()
        out[0, 0, 0] += other
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "Jet3":
        return self._like(-self.coeffs)

    def __sub__(self, other) -> "Jet3":
        return self + (-other)

    def __rsub__(self, other) -> "Jet3":
        return (-self) + other

    def __mul__(self, other) -> "Jet3":
        if not isinstance(other, Jet3):
            return self._like(self.coeffs * other)
        other = self._coerce(other)
        o1, o2, o3 = self.orders
        full = convolve(self.coeffs, other.coeffs)
        return self._like(full[: o1 + 1, : o2 + 1, : o3 + 1])

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet3":
        if not isinstance(other, Jet3):
            return self._like(self.coeffs / other)
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Jet3":
        return self.reciprocal() * other

    def __pow__(self, alpha) -> "Jet3":
        return self.pow(alpha)

    def reciprocal(self) -> "Jet3":
        c0 = self.constant_term
        if c0 == 0:
            raise SingularJetError("division by a jet with zero constant term")
        m = np.arange(self.degree + 1)
        return self.apply_series((-1.0) ** m / c0 ** (m + 1))

    # ------------------------------------------------------------------
    # Series application and elementary functions
    # ------------------------------------------------------------------

    def apply_series(self, series: Sequence[Scalar]) -> "Jet3":
        """Σ series[m]·(self - c0)^m."""
        nil = self.coeffs.copy()
        nil[0, 0, 0] = 0
        nil = self._like(nil)
        series = np.asarray(series, dtype=complex)
        top = min(len(series) - 1, self.degree)
        out = Jet3.constant(series[top], self.degree, self.orders)
        for m in range(top - 1, -1, -1):
            out = out * nil + series[m]
        return out

    def _elementary(self, name: str, *args) -> "Jet3":
        return self.apply_series(
            _univariate_series(name, self.constant_term, self.degree, *args)
        )

    def exp(self) -> "Jet3":
        return self._elementary("exp")

    def log(self) -> "Jet3":
        return self._elementary("log")

    def sin(self) -> "Jet3":
        return self._elementary("sin")

    def cos(self) -> "Jet3":
        return self._elementary("cos")

    def atan(self) -> "Jet3":
        return self._elementary("atan")

    def pow(self, alpha: Scalar) -> "Jet3":
        return self._elementary("pow", alpha)

    def sqrt(self) -> "Jet3":
        return self.pow(0.5)

    # ------------------------------------------------------------------
    # Extraction
    # ------------------------------------------------------------------

    def coefficient(self, beta: Sequence[int]) -> complex:
        i, j, k = beta
        o1, o2, o3 = self.orders
        if i > o1 or j > o2 or k > o3 or i + j + k > self.degree:
            raise IndexError(f"index {tuple(beta)} outside the jet")
        return complex(self.coeffs[i, j, k])

    def derivative_value(self, beta: Sequence[int]) -> complex:
        """∂^β of the represented function at the base point."""
        return self.coefficient(beta) * math.prod(math.factorial(b) for b in beta)

    def restrict(self, axis: int) -> Jet1:
        """The univariate jet along one axis with the other variables zero."""
        n = min(self.orders[axis], self.degree) + 1
        index = [0, 0, 0]
        index[axis] = slice(0, n)
        return Jet1(self.coeffs[tuple(index)])

    def real(self) -> "Jet3":
        return self._like(self.coeffs.real)

    def imag(self) -> "Jet3":
        return self._like(self.coeffs.imag)


Jet = Union[Jet1, Jet3]


# ============================================================================
# Functional interface
# ============================================================================

_ARITH: dict = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Truncated arithmetic of two jets of equal order."""
    try:
        fn: Callable = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown jet operation {op!r}") from None
    return fn(a, b)


def jet_elementary(a: Jet, fn: str, alpha: Optional[Scalar] = None) -> Jet:
    """Apply exp, log, sin, cos, atan or pow(alpha) to a jet."""
    if fn == "pow":
        if alpha is None:
            raise ValueError("pow needs an exponent")
        return a.pow(alpha)
    if fn not in ("exp", "log", "sin", "cos", "atan"):
        raise ValueError(f"unknown elementary function {fn!r}")
    return getattr(a, fn)()


def jet_compose(outer: Jet1, inner: Jet1) -> Jet1:
    """Taylor coefficients of outer ∘ inner (inner has zero constant term)."""
    return outer.compose(inner)
