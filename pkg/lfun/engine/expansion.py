# Expansion Coefficients
"""
Coefficient tables c_{β,l} (horocycle flow) and e_{β,l} (ω-flow) that
expand a member's integrand around its group representative.

With A = v⁻¹x and B(t) = n(-t)·A·n(t) = n(h1)a(h2)K(h3):
    f̃(x·n(t)) = Σ_β ∂^β f̃(v·n(t))·h(t)^β / β!
and c_{β,l} is the coefficient of t^l in h1^{β1}·h2^{β2}·h3^{β3}. The
ω-table uses ω(u)⁻¹·A·ω(u) built exactly from jets in u.
"""

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np

from lfun.errors import GroupingContractError
from lfun.geometry import (
    Mat2,
    MultiIndex,
    conjugated_n_displacement,
    conjugated_omega_displacement,
    in_neighborhood,
    iwasawa_decompose,
    multi_indices,
)
from lfun.jets import Jet1


logger = logging.getLogger(__name__)

_OFFSET_SAMPLES = 9


class CoeffTable(NamedTuple):
    """Entries[row, l] for betas[row], l = 0..d."""
    betas: Tuple[MultiIndex, ...]
    entries: np.ndarray

    @property
    def order(self) -> int:
        return self.entries.shape[1] - 1

    def entry(self, beta, l: int) -> complex:
        return complex(self.entries[self.betas.index(MultiIndex(*beta)), l])

    def contract(self, integrals: np.ndarray) -> complex:
        """Σ_{β,l} c_{β,l}/β!·integrals[β, l]."""
        factorials = np.array([b.factorial for b in self.betas], dtype=float)
        return complex(np.sum(self.entries / factorials[:, None] * integrals))


def identity_table(d: int) -> CoeffTable:
    betas = multi_indices(d)
    entries = np.zeros((len(betas), d + 1), dtype=complex)
    entries[0, 0] = 1
    return CoeffTable(betas, entries)


def _check_membership(v: Mat2, x: Mat2, delta: Optional[float]) -> Mat2:
    A = v.inverse() @ x
    if delta is not None and not in_neighborhood(A, delta):
        raise GroupingContractError(
            f"v⁻¹x has Iwasawa coordinates {tuple(iwasawa_decompose(A))} outside U_δ, δ = {delta:.6g}"
        )
    return A


def _coefficients_from_entries(P: Jet1, Q: Jet1, R: Jet1, S: Jet1, d: int) -> CoeffTable:
    norm = R * R + S * S
    h1 = (P * R + Q * S) / norm
    h2 = -norm.log()
    h3 = (-R).atan2(S)

    betas = multi_indices(d)
    powers = []
    for h in (h1, h2, h3):
        row = [Jet1.constant(1.0, d)]
        for _ in range(d):
            row.append(row[-1] * h)
        powers.append(row)
    entries = np.zeros((len(betas), d + 1), dtype=complex)
    for i, b in enumerate(betas):
        entries[i] = (powers[0][b.b1] * powers[1][b.b2] * powers[2][b.b3]).coeffs
    return CoeffTable(betas, entries)


def expansion_coeffs_n(v: Mat2, x: Mat2, d: int, delta: Optional[float] = None) -> CoeffTable:
    """
    c_{β,l} for the member x around representative v along n(t).

    Args:
        v: Representative (reduced)
        x: Member (reduced)
        d: Order; |β| <= d and l <= d
        delta: Neighbourhood radius to verify, skipped when None

    Raises:
        GroupingContractError: If v⁻¹x is outside U_δ
    """
    A = _check_membership(v, x, delta)
    p, q, r, s = A.entries()
    t = Jet1.variable(0.0, d)
    # n(-t)·A·n(t)
    P = -(t * r) + p
    Q = t * (p - s) - t * t * r + q
    R = Jet1.constant(r, d)
    S = t * r + s
    return _coefficients_from_entries(P, Q, R, S, d)


def expansion_coeffs_omega(v: Mat2, x: Mat2, d: int, scale: float, direction: int = -1,
                           delta: Optional[float] = None) -> CoeffTable:
    """
    e_{β,l} for the member x around v along ω(u) = n(σu)a(log(1 + u/T̃)).

    ω(u)⁻¹·A·ω(u) is formed from jets of (1 + u/T̃)^{±1/2}.
    """
    A = _check_membership(v, x, delta)
    p, q, r, s = A.entries()
    u = Jet1.variable(0.0, d)
    stretch = u / scale + 1
    up, down = stretch.pow(0.5), stretch.pow(-0.5)
    shift = u * direction
    # ω = [[up, σu·down], [0, down]], ω⁻¹ = [[down, -σu·down], [0, up]]
    left_a, left_b = down * p - shift * down * r, down * q - shift * down * s
    left_c, left_d = up * r, up * s
    P = left_a * up
    Q = left_a * shift * down + left_b * down
    R = left_c * up
    S = left_c * shift * down + left_d * down
    return _coefficients_from_entries(P, Q, R, S, d)


def member_offset(A: Mat2, length: float, scale: Optional[float] = None,
                  direction: int = -1) -> float:
    """
    Largest Iwasawa coordinate of the conjugated displacement over the
    segment, sampled at a few points (n-flow when scale is None).
    """
    largest = 0.0
    for t in np.linspace(0.0, length, _OFFSET_SAMPLES):
        if scale is None:
            B = conjugated_n_displacement(A, float(t))
        else:
            B = conjugated_omega_displacement(A, float(t), scale, direction)
        largest = max(largest, max(abs(c) for c in iwasawa_decompose(B)))
    return largest
