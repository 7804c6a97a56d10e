# Ramanujan Delta
"""
Exact coefficients τ(n) of Δ = q·∏(1 - q^n)^24.

Euler's pentagonal-number theorem gives ∏(1 - q^n) as a sparse series with
coefficients ±1; the 24th power is built by 24 truncated multiplications
with that sparse series over Python integers.
"""

from typing import List, Tuple

import numpy as np

from lfun.forms.spec import CoefficientTable, CuspFormSpec, HOLOMORPHIC


def _pentagonal_terms(limit: int) -> List[Tuple[int, int]]:
    """(exponent, sign) pairs of ∏(1 - q^n) below q^limit."""
    terms = [(0, 1)]
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        first = k * (3 * k - 1) // 2
        second = k * (3 * k + 1) // 2
        if first >= limit:
            break
        terms.append((first, sign))
        if second < limit:
            terms.append((second, sign))
        k += 1
    return terms


def gen_delta(n_max: int) -> CoefficientTable:
    """
    Exact τ(1..n_max).

    Args:
        n_max: Number of coefficients (>= 1)

    Returns:
        Exact CoefficientTable with τ(n) at index n
    """
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    terms = _pentagonal_terms(n_max)
    power = np.zeros(n_max, dtype=object)
    power[0] = 1
    for _ in range(24):
        product = np.zeros(n_max, dtype=object)
        for exponent, sign in terms:
            if sign > 0:
                product[exponent:] += power[: n_max - exponent]
            else:
                product[exponent:] -= power[: n_max - exponent]
        power = product
    return CoefficientTable(tuple(int(v) for v in power), exact=True)


def delta_form(n_max: int) -> CuspFormSpec:
    """The weight-12 level-1 form Δ with C1 = C2 = 1."""
    return CuspFormSpec(kind=HOLOMORPHIC, weight=12, coefficients=gen_delta(n_max))
