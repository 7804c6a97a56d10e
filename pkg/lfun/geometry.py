# SL(2,R) Geometry
"""
Matrix algebra on SL(2,R), Iwasawa coordinates, the U_delta neighbourhoods
and Gauss reduction into the standard fundamental domain of SL(2,Z).

Conventions:
    n(t) = [[1, t], [0, 1]]
    a(y) = diag(e^{y/2}, e^{-y/2})
    K(θ) = [[cos θ, sin θ], [-sin θ, cos θ]]
so that n(t)a(y)K(θ)·i = t + i·e^y and j(n(t)a(y)K(θ), i) = e^{-y/2}e^{-iθ}.
Every element factors uniquely as n(t)a(y)K(θ) with θ in (-π, π].
"""

import math
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Tuple

from lfun.errors import NotUnimodularError, ReductionError


DET_TOLERANCE = 1e-12
DOMAIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Mat2:
    """
    Unimodular 2x2 matrix [[a, b], [c, d]].

    Entries are real scalars; integer entries stay Python ints so products
    of SL(2,Z) elements remain exact. Only matrices built from outside
    entries have their determinant checked; derived matrices skip it.
    """
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        scale = max(1.0, abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1) > DET_TOLERANCE * scale * scale:
            raise NotUnimodularError(f"matrix is not unimodular: det = {det!r}")

    @classmethod
    def _unchecked(cls, a: float, b: float, c: float, d: float) -> "Mat2":
        m = object.__new__(cls)
        for name, value in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, value)
        return m

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2._unchecked(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2._unchecked(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        return Mat2._unchecked(self.d, -self.b, -self.c, self.a)

    def entries(self) -> Tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def max_abs_diff(self, other: "Mat2") -> float:
        return max(abs(x - y) for x, y in zip(self.entries(), other.entries()))

    def is_integral(self, tolerance: float = DOMAIN_TOLERANCE) -> bool:
        return all(abs(x - round(x)) <= tolerance for x in self.entries())


class IwasawaCoords(NamedTuple):
    """Coordinates (t, y, θ) of n(t)a(y)K(θ), θ in (-π, π]."""
    t: float
    y: float
    theta: float


class MultiIndex(NamedTuple):
    """Derivative multi-index (β1, β2, β3) along the t, y and θ directions."""
    b1: int
    b2: int
    b3: int

    @property
    def order(self) -> int:
        return self.b1 + self.b2 + self.b3

    @property
    def factorial(self) -> int:
        return math.factorial(self.b1) * math.factorial(self.b2) * math.factorial(self.b3)


IDENTITY = Mat2(1, 0, 0, 1)
S_MATRIX = Mat2(0, -1, 1, 0)


# ============================================================================
# Special matrices
# ============================================================================

def n_matrix(t: float) -> Mat2:
    return Mat2(1.0, t, 0.0, 1.0)


def a_matrix(y: float) -> Mat2:
    return Mat2(math.exp(y / 2), 0.0, 0.0, math.exp(-y / 2))


def k_matrix(theta: float) -> Mat2:
    c, s = math.cos(theta), math.sin(theta)
    return Mat2(c, s, -s, c)


def kappa_matrix(t: float, scale: float, direction: int = -1) -> Mat2:
    """κ(t) = n(σt)a(log(t/T̃)); κ(t)·i = (σ + i/T̃)·t."""
    return n_matrix(direction * t) @ a_matrix(math.log(t / scale))


def omega_matrix(u: float, scale: float, direction: int = -1) -> Mat2:
    """ω(u) = n(σu)a(log(1 + u/T̃)), so that κ(b)ω(u) = κ(b(1 + u/T̃))."""
    return n_matrix(direction * u) @ a_matrix(math.log1p(u / scale))


def mobius(m: Mat2, z: complex) -> complex:
    return (m.a * z + m.b) / (m.c * z + m.d)


# ============================================================================
# Iwasawa decomposition
# ============================================================================

def fold_angle(theta: float) -> float:
    """Fold an angle into (-π, π]."""
    theta = math.remainder(theta, 2 * math.pi)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return theta


def iwasawa_decompose(m: Mat2) -> IwasawaCoords:
    """
    Decompose m = n(t)a(y)K(θ).

    Args:
        m: Unimodular matrix [[p, q], [r, s]]

    Returns:
        IwasawaCoords with t = (pr+qs)/(r²+s²), y = -log(r²+s²) and θ the
        full-quadrant angle of (s, -r)
    """
    p, q, r, s = m.entries()
    norm = r * r + s * s
    theta = math.atan2(-r, s)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return IwasawaCoords((p * r + q * s) / norm, -math.log(norm), theta)


def iwasawa_compose(coords: IwasawaCoords) -> Mat2:
    """Return n(t)·a(y)·K(θ)."""
    t, y, theta = coords
    up, down = math.exp(y / 2), math.exp(-y / 2)
    c, s = math.cos(theta), math.sin(theta)
    return Mat2._unchecked(up * c - t * down * s, up * s + t * down * c, -down * s, down * c)


def in_neighborhood(m: Mat2, delta: float) -> bool:
    """True iff all three Iwasawa coordinates of m lie in (-δ, δ)."""
    if delta <= 0:
        raise ValueError(f"neighbourhood radius must be positive, got {delta}")
    return all(abs(x) < delta for x in iwasawa_decompose(m))


# ============================================================================
# Reduction
# ============================================================================

def reduce_to_fundamental_domain(m: Mat2) -> Tuple[Mat2, Mat2]:
    """
    Gauss-reduce m·i into |Re z| <= 1/2, |z| >= 1.

    The reduced matrix is rebuilt from the tracked point z and the tracked
    rotation angle instead of multiplying γ·m, which would cancel badly
    once γ has large entries. The angle is folded into (-π/2, π/2] using
    -I ∈ SL(2,Z).

    Args:
        m: Unimodular matrix

    Returns:
        Tuple of (m_red, γ) with γ ∈ SL(2,Z) integral and m_red = γ·m

    Raises:
        ReductionError: If the iteration cap 10·(1 + |log Im z|) is exceeded
    """
    t, y, theta = iwasawa_decompose(m)
    z = complex(t, math.exp(y))
    cap = int(10 * (1 + abs(y))) + 10
    ga, gb, gc, gd = 1, 0, 0, 1

    for _ in range(cap):
        shift = math.floor(z.real + 0.5)
        if shift:
            z -= shift
            ga, gb = ga - shift * gc, gb - shift * gd
        if abs(z) >= 1 - 1e-15:
            break
        theta -= math.atan2(z.imag, z.real)
        z = -1 / z
        ga, gb, gc, gd = -gc, -gd, ga, gb
    else:
        raise ReductionError(
            f"reduction of point {t}+{math.exp(y)}i did not terminate "
            f"within {cap} iterations"
        )

    theta = fold_angle(theta)
    if theta > math.pi / 2 or theta <= -math.pi / 2:
        theta = fold_angle(theta + math.pi)
        ga, gb, gc, gd = -ga, -gb, -gc, -gd

    reduced = iwasawa_compose(IwasawaCoords(z.real, math.log(z.imag), theta))
    return reduced, Mat2(ga, gb, gc, gd)


# ============================================================================
# Conjugated flows
# ============================================================================

def conjugated_n_displacement(A: Mat2, t: float) -> Mat2:
    """Closed form of n(-t)·A·n(t)."""
    p, q, r, s = A.entries()
    return Mat2._unchecked(p - t * r, (p - s) * t - t * t * r + q, r, t * r + s)


def conjugated_omega_displacement(A: Mat2, u: float, scale: float,
                                  direction: int = -1) -> Mat2:
    """Closed form of ω(u)⁻¹·A·ω(u)."""
    p, q, r, s = A.entries()
    w2 = 1 + u / scale
    su = direction * u
    return Mat2._unchecked(p - su * r, (q + su * (p - s) - r * u * u) / w2, r * w2, s + su * r)


@lru_cache(maxsize=None)
def multi_indices(d: int) -> Tuple[MultiIndex, ...]:
    """All β with |β| <= d, ordered by total degree then lexicographically."""
    betas: List[MultiIndex] = [
        MultiIndex(*b) for b in itertools.product(range(d + 1), repeat=3) if sum(b) <= d
    ]
    return tuple(sorted(betas, key=lambda b: (b.order, b)))
