# Lift Evaluation
"""
Values and derivatives of the lift f̃(g) = j(g, i)^{-k}·f(g·i) on SL(2,R).

Holomorphic terms are f̂(n)e(nz); even Maass terms are
f̂(n)·2√(ny)·K_{ir}(2πny)·cos(2πnx).

Derivatives ∂^β along n(t), a(y), K(θ) come from jets:
- lift_jet3 expands g·n(t)a(y)K(θ) entrywise as trivariate jets
- curve_taylor_table serves every β along a curve from one evaluation.
  For holomorphic forms f̃(g n(t)a(y)K(θ)) = e^{ikθ}e^{ky/2}φ_g(t + ie^y)
  with φ_g(w) = j(g, w)^{-k}f(g·w) holomorphic, so a single univariate jet
  of φ_g at w = i carries all the information. Maass forms go through
  jets in (s, t', y').
"""

import logging
import math
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb
from scipy.stats import qmc

from lfun.config import config
from lfun.errors import InsufficientCoefficientsError
from lfun.forms.spec import CuspFormSpec, terms_needed
from lfun.geometry import (
    Mat2,
    MultiIndex,
    a_matrix,
    k_matrix,
    mobius,
    multi_indices,
    n_matrix,
    omega_matrix,
    reduce_to_fundamental_domain,
)
from lfun.jets import Jet1, Jet3
from lfun.specfun import bessel_k, bessel_k_jet


logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

JetLike = Union[Jet1, Jet3]


# ============================================================================
# Truncation
# ============================================================================

def _term_count(form: CuspFormSpec, height: float, accuracy: Optional[float],
                strict: bool) -> int:
    required = terms_needed(height, accuracy)
    if required > form.n_max:
        if strict:
            raise InsufficientCoefficientsError(required, form.n_max, height)
        return form.n_max
    return required


def _jet_term_count(form: CuspFormSpec, height: float, strict: bool = True) -> int:
    return _term_count(form, height * config.JET_HEIGHT_FRACTION, None, strict)


# ============================================================================
# Values
# ============================================================================

def lift_value(form: CuspFormSpec, m: Mat2, accuracy: Optional[float] = None) -> complex:
    """
    f̃(m) from the truncated Fourier expansion at z = m·i.

    Args:
        form: Cusp form
        m: Group element with Im(m·i) > 0
        accuracy: Truncation target (configured default when None)

    Returns:
        Complex value of the lift

    Raises:
        InsufficientCoefficientsError: If n_max < N_terms(Im z, accuracy)
    """
    z = mobius(m, 1j)
    count = _term_count(form, z.imag, accuracy, strict=True)
    coeffs = form.coefficients.as_array()[:count]
    n = np.arange(1, count + 1)
    if form.is_holomorphic:
        value = np.sum(coeffs * np.exp(TWO_PI * 1j * n * z))
        return complex(value * (m.c * 1j + m.d) ** (-form.weight))
    y = z.imag
    k_values = bessel_k(form.r, TWO_PI * n * y)
    terms = coeffs * 2 * np.sqrt(n * y) * k_values * np.cos(TWO_PI * n * z.real)
    return complex(np.sum(terms))


# ============================================================================
# Fourier sums on jets
# ============================================================================

def _jet_order(jet: JetLike) -> int:
    return jet.order if isinstance(jet, Jet1) else jet.degree


def _holomorphic_sum(coeffs: np.ndarray, z: JetLike) -> JetLike:
    q = (z * (TWO_PI * 1j)).exp()
    acc = q * coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = (acc + c) * q
    return acc


def _nilpotent_powers(jet: Jet1) -> np.ndarray:
    """Rows (jet - c0)^m for m = 0..order."""
    order = jet.order
    nil = jet.coeffs.copy()
    nil[0] = 0
    rows = np.zeros((order + 1, order + 1), dtype=complex)
    rows[0, 0] = 1
    for m in range(1, order + 1):
        rows[m] = np.convolve(rows[m - 1], nil)[: order + 1]
    return rows


def _maass_sum(form: CuspFormSpec, coeffs: np.ndarray, z: JetLike) -> JetLike:
    x_jet, y_jet = z.real(), z.imag()
    order = _jet_order(z)
    y0 = float(np.real(y_jet.coeffs.flat[0]))
    root_y = y_jet.sqrt()
    phase = (x_jet * (TWO_PI * 1j)).exp()
    powers = _nilpotent_powers(y_jet) if isinstance(y_jet, Jet1) else None
    m = np.arange(order + 1)
    wave = phase
    total = None
    for n, c in enumerate(coeffs, start=1):
        if c != 0:
            series = bessel_k_jet(form.r, TWO_PI * n * y0, order).coeffs * (TWO_PI * n) ** m
            k_jet = Jet1(series @ powers) if powers is not None else y_jet.apply_series(series)
            term = root_y * k_jet * wave.real() * (2 * math.sqrt(n) * c)
            total = term if total is None else total + term
        wave = wave * phase
    return total if total is not None else z * 0


def _fourier_sum(form: CuspFormSpec, z: JetLike, count: int) -> JetLike:
    coeffs = form.coefficients.as_array()[:count]
    if form.is_holomorphic:
        return _holomorphic_sum(coeffs, z)
    return _maass_sum(form, coeffs, z)


def lift_jet3(form: CuspFormSpec, x: Mat2, degree: int, strict: bool = True) -> Jet3:
    """
    Jet of (t, y, θ) -> f̃(x·n(t)a(y)K(θ)) up to total degree d.

    Args:
        form: Cusp form
        x: Base point
        degree: Total degree (<= MAX_EXPANSION_ORDER)
        strict: Raise when the coefficient table is too short; otherwise
            truncate at n_max

    Returns:
        Jet3 whose coefficient at β is ∂^β f̃(x) / β!
    """
    if degree > config.MAX_EXPANSION_ORDER:
        raise ValueError(f"degree {degree} exceeds {config.MAX_EXPANSION_ORDER}")
    x, _ = reduce_to_fundamental_domain(x)
    t = Jet3.variable(0, 0.0, degree)
    y = Jet3.variable(1, 0.0, degree)
    theta = Jet3.variable(2, 0.0, degree)
    up, down = (y * 0.5).exp(), (y * -0.5).exp()
    cos, sin = theta.cos(), theta.sin()
    # n(t)a(y)K(θ)
    p = up * cos - t * down * sin
    q = up * sin + t * down * cos
    r = -(down * sin)
    s = down * cos
    g11, g12 = p * x.a + r * x.b, q * x.a + s * x.b
    g21, g22 = p * x.c + r * x.d, q * x.c + s * x.d
    automorphy = g21 * 1j + g22
    z = (g11 * 1j + g12) / automorphy

    count = _jet_term_count(form, mobius(x, 1j).imag, strict)
    value = _fourier_sum(form, z, count)
    if form.weight:
        value = value * automorphy.pow(-form.weight)
    return value


# ============================================================================
# Curves
# ============================================================================

class Curve(ABC):
    """
    A curve u -> x·c(u) in SL(2,R), reparameterized at u0 as
    x·c(u0 + s) = x·c(u0)·n(τ(s))·a(ρ(s)) with τ(0) = ρ(0) = 0.
    """

    @abstractmethod
    def point(self, x: Mat2, u0: float) -> Mat2:
        """x·c(u0)."""

    @abstractmethod
    def coordinates(self, u0: float, order: int) -> Tuple[Jet1, Jet1]:
        """Jets of τ(s) and ρ(s) at s = 0."""

    def displacement_matrix(self, u0: float, order: int) -> Optional[np.ndarray]:
        """
        Rows Δ(s)^q, q = 0..order, for Δ = τ + i(e^ρ - 1); None for the
        identity (pure horocycle flow).
        """
        tau, rho = self.coordinates(u0, order)
        return _power_rows(tau + (rho.exp() - 1) * 1j)


def _power_rows(delta: Jet1) -> np.ndarray:
    order = delta.order
    rows = np.zeros((order + 1, order + 1), dtype=complex)
    rows[0, 0] = 1
    for q in range(1, order + 1):
        rows[q] = np.convolve(rows[q - 1], delta.coeffs)[: order + 1]
    return rows


def _linear(slope: complex, order: int) -> Jet1:
    coeffs = np.zeros(order + 1, dtype=complex)
    if order >= 1:
        coeffs[1] = slope
    return Jet1(coeffs)


class NFlow(Curve):
    """u -> x·n(u)."""

    def point(self, x: Mat2, u0: float) -> Mat2:
        return x @ n_matrix(u0)

    def coordinates(self, u0: float, order: int) -> Tuple[Jet1, Jet1]:
        return _linear(1.0, order), Jet1.constant(0.0, order)

    def displacement_matrix(self, u0: float, order: int) -> Optional[np.ndarray]:
        return None


class AFlow(Curve):
    """u -> x·a(u)."""

    def point(self, x: Mat2, u0: float) -> Mat2:
        return x @ a_matrix(u0)

    def coordinates(self, u0: float, order: int) -> Tuple[Jet1, Jet1]:
        return Jet1.constant(0.0, order), _linear(1.0, order)

    def displacement_matrix(self, u0: float, order: int) -> Optional[np.ndarray]:
        return _cached_a_rows(order)


@lru_cache(maxsize=16)
def _cached_a_rows(order: int) -> np.ndarray:
    rows = Curve.displacement_matrix(AFlow(), 0.0, order)
    rows.setflags(write=False)
    return rows


class OmegaFlow(Curve):
    """u -> x·ω(u), ω(u) = n(σu)·a(log(1 + u/T̃))."""

    def __init__(self, scale: float, direction: int = -1):
        self.scale = scale
        self.direction = direction

    def point(self, x: Mat2, u0: float) -> Mat2:
        return x @ omega_matrix(u0, self.scale, self.direction)

    def coordinates(self, u0: float, order: int) -> Tuple[Jet1, Jet1]:
        tau = _linear(self.direction / (1 + u0 / self.scale), order)
        rho = (_linear(1 / (self.scale + u0), order) + 1).log()
        return tau, rho

    def displacement_matrix(self, u0: float, order: int) -> Optional[np.ndarray]:
        # τ and e^ρ - 1 are both linear in s
        slope = self.direction / (1 + u0 / self.scale) + 1j / (self.scale + u0)
        return np.diag(slope ** np.arange(order + 1)).astype(complex)


class LogFlow(Curve):
    """
    v -> κ(t0·e^{v/T̃}) for x = κ(t0): the contour {α̃t} by hyperbolic arclength.

    x·c(v) = x·n(σT̃(e^{v/T̃} - 1))·a(v/T̃).
    """

    def __init__(self, scale: float, direction: int = -1):
        self.scale = scale
        self.direction = direction

    def point(self, x: Mat2, u0: float) -> Mat2:
        grow = math.expm1(u0 / self.scale)
        return x @ n_matrix(self.direction * self.scale * grow) @ a_matrix(u0 / self.scale)

    def coordinates(self, u0: float, order: int) -> Tuple[Jet1, Jet1]:
        rho = _linear(1 / self.scale, order)
        tau = (rho.exp() - 1) * (self.direction * self.scale)
        return tau, rho

    def displacement_matrix(self, u0: float, order: int) -> Optional[np.ndarray]:
        return _cached_log_rows(self.scale, self.direction, order)


@lru_cache(maxsize=64)
def _cached_log_rows(scale: float, direction: int, order: int) -> np.ndarray:
    rows = Curve.displacement_matrix(LogFlow(scale, direction), 0.0, order)
    rows.setflags(write=False)
    return rows


# ============================================================================
# Derivative tables along curves
# ============================================================================

def _phi_jet(form: CuspFormSpec, g: Mat2, order: int, strict: bool = True) -> np.ndarray:
    """Taylor coefficients of w -> j(g, i+w)^{-k}·f(g·(i+w)) at w = 0."""
    J0 = g.c * 1j + g.d
    z0 = (g.a * 1j + g.b) / J0
    ratio = -g.c / J0
    powers = np.cumprod(np.concatenate(([1.0 + 0j], np.full(order, ratio))))
    m = np.arange(order + 1)
    z_coeffs = np.zeros(order + 1, dtype=complex)
    z_coeffs[0] = z0
    z_coeffs[1:] = powers[:-1] / J0 ** 2
    count = _jet_term_count(form, z0.imag, strict)
    f_jet = _holomorphic_sum(form.coefficients.as_array()[:count], Jet1(z_coeffs))
    k = form.weight
    automorphy = J0 ** (-k) * comb(k + m - 1, m) * powers
    return np.convolve(automorphy, f_jet.coeffs)[: order + 1]


@lru_cache(maxsize=64)
def _beta_weights(weight: int, betas: Tuple[MultiIndex, ...]) -> np.ndarray:
    """
    W[β, m] = β1!β2!(ik)^{β3}·C(m, β1)·E[m-β1][β2] with
    E[j][b] = [y^b] e^{ky/2}(i(e^y - 1))^j.
    """
    top = max(b.b1 + b.b2 for b in betas)
    y = Jet1.variable(0.0, top)
    half = (y * (weight / 2)).exp()
    base = (y.exp() - 1) * 1j
    table = np.zeros((top + 1, top + 1), dtype=complex)
    power = Jet1.constant(1.0, top)
    for j in range(top + 1):
        table[j] = (half * power).coeffs
        power = power * base
    weights = np.zeros((len(betas), top + 1), dtype=complex)
    for row, b in enumerate(betas):
        scale = math.factorial(b.b1) * math.factorial(b.b2) * (1j * weight) ** b.b3
        for m in range(b.b1, b.b1 + b.b2 + 1):
            weights[row, m] = scale * comb(m, b.b1, exact=True) * table[m - b.b1, b.b2]
    return weights


def _holomorphic_curve_table(form: CuspFormSpec, g: Mat2, betas: Tuple[MultiIndex, ...],
                             curve: Curve, u0: float, order: int) -> np.ndarray:
    top = max(b.b1 + b.b2 for b in betas)
    phi = _phi_jet(form, g, order + top)
    q = np.arange(order + 1)
    psi = np.stack([comb(m + q, m) * phi[m : m + order + 1] for m in range(top + 1)])
    rows = curve.displacement_matrix(u0, order)
    if rows is not None:
        psi = psi @ rows
        _, rho = curve.coordinates(u0, order)
        lift_rho = (rho * (form.weight / 2)).exp().coeffs
        step = rho.exp().coeffs
        scale = lift_rho
        for m in range(top + 1):
            psi[m] = np.convolve(scale, psi[m])[: order + 1]
            scale = np.convolve(scale, step)[: order + 1]
    return _beta_weights(form.weight, betas) @ psi


def _generic_curve_table(form: CuspFormSpec, g: Mat2, betas: Tuple[MultiIndex, ...],
                         curve: Curve, u0: float, order: int) -> np.ndarray:
    """Curve table from jets in (s, t', y') of f̃(g·n(τ(s) + e^{ρ(s)}t')·a(ρ(s) + y'))."""
    top = max(b.b1 + b.b2 for b in betas)
    tau, rho = curve.coordinates(u0, order)
    count = _jet_term_count(form, mobius(g, 1j).imag)
    k = form.weight
    if top == 0:
        w = tau + rho.exp() * 1j
        z = (w * g.a + g.b) / (w * g.c + g.d)
        value = _fourier_sum(form, z, count)
        if k:
            value = value * ((rho * (k / 2)).exp() * (w * g.c + g.d).pow(-k))
        column = value.coeffs
        return np.stack([column * (1j * k) ** b.b3 for b in betas])

    degree = order + top
    orders = (order, top, top)
    tau3 = Jet3.from_jet1(tau, 0, degree, orders)
    rho3 = Jet3.from_jet1(rho, 0, degree, orders)
    t_var = Jet3.variable(1, 0.0, degree, orders)
    y_var = Jet3.variable(2, 0.0, degree, orders)
    w = tau3 + rho3.exp() * (t_var + y_var.exp() * 1j)
    automorphy = w * g.c + g.d
    z = (w * g.a + g.b) / automorphy
    value = _fourier_sum(form, z, count)
    if k:
        value = value * ((rho3 + y_var) * (k / 2)).exp() * automorphy.pow(-k)
    table = np.zeros((len(betas), order + 1), dtype=complex)
    for row, b in enumerate(betas):
        factor = math.factorial(b.b1) * math.factorial(b.b2) * (1j * k) ** b.b3
        table[row] = value.coeffs[:, b.b1, b.b2] * factor
    return table


def curve_taylor_table(form: CuspFormSpec, x: Mat2, betas: Sequence[MultiIndex],
                       curve: Curve, u0: float, order: int,
                       generic: bool = False) -> np.ndarray:
    """
    Taylor coefficients in s of ∂^β f̃(x·curve(u0 + s)) for every β.

    The base point is reduced first; f̃ is Γ-invariant so the table does not
    depend on the representative.

    Args:
        form: Cusp form
        x: Curve origin
        betas: Multi-indices
        curve: NFlow, AFlow, OmegaFlow or LogFlow
        u0: Expansion point on the curve
        order: Jet order N in s
        generic: Force the trivariate jet route for holomorphic forms

    Returns:
        Array of shape (len(betas), order + 1)
    """
    betas = tuple(MultiIndex(*b) for b in betas)
    base, _ = reduce_to_fundamental_domain(curve.point(x, u0))
    if form.is_holomorphic and not generic:
        return _holomorphic_curve_table(form, base, betas, curve, u0, order)
    return _generic_curve_table(form, base, betas, curve, u0, order)


def curve_taylor(form: CuspFormSpec, x: Mat2, beta: MultiIndex, curve: Curve,
                 u0: float, order: int) -> Jet1:
    """Jet in s of ∂^β f̃(x·curve(u0 + s))."""
    return Jet1(curve_taylor_table(form, x, (beta,), curve, u0, order)[0])


# ============================================================================
# Derivative growth
# ============================================================================

def _sample_points(samples: int, seed: int) -> np.ndarray:
    sampler = qmc.Halton(d=3, scramble=True, seed=seed)
    return sampler.random(samples)


def estimate_R(form: CuspFormSpec, degree: Optional[int] = None,
               samples: Optional[int] = None, seed: int = 0) -> float:
    """
    Empirical derivative scale R with |∂^β f̃| / β! ≲ sup|f̃|·R^{|β|}.

    Samples lift_jet3 at quasi-random points of the fundamental domain
    (random rotation angle), normalizes every Taylor coefficient by the
    sampled sup of |f̃| and returns the largest |β|-th root, clamped below
    by 1.
    """
    degree = degree or config.R_SAMPLE_DEGREE
    samples = samples or config.R_SAMPLE_POINTS
    if not np.any(form.coefficients.as_array()):
        return 1.0

    betas = [b for b in multi_indices(degree) if b.order >= 1]
    magnitudes = np.zeros((samples, len(betas)))
    values = np.zeros(samples)
    for i, (u, v, w) in enumerate(_sample_points(samples, seed)):
        x = u - 0.5
        height = math.sqrt(1 - x * x) + 2 * v
        point = n_matrix(x) @ a_matrix(math.log(height)) @ k_matrix(math.pi * (2 * w - 1))
        jet = lift_jet3(form, point, degree, strict=False)
        values[i] = abs(jet.coefficient((0, 0, 0)))
        magnitudes[i] = [abs(jet.coefficient(b)) for b in betas]

    sup = values.max()
    if sup == 0:
        return 1.0
    orders = np.array([b.order for b in betas], dtype=float)
    roots = (magnitudes / sup) ** (1 / orders)
    return float(max(1.0, roots.max()))


def ensure_deriv_bound(form: CuspFormSpec) -> CuspFormSpec:
    if form.deriv_bound is not None:
        return form
    estimate = estimate_R(form)
    logger.info("estimated derivative bound R = %.4g", estimate)
    return form.with_deriv_bound(estimate)
