# Self-Test Suites
"""
Invariant checks of every module, runnable without pytest.

Each suite is a list of named checks; a check passes when it returns True
and fails when it returns False or raises. The report is deterministic:
no timings, sorted keys, fixed inputs.
"""

import json
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
import numpy as np

from lfun.engine import PipelineParams, fourier_direct
from lfun.forms import delta_form, gen_delta, load_form
from lfun.forms.lift import ensure_deriv_bound, lift_value
from lfun.geometry import (
    S_MATRIX,
    IwasawaCoords,
    a_matrix,
    iwasawa_compose,
    iwasawa_decompose,
    k_matrix,
    mobius,
    n_matrix,
    reduce_to_fundamental_domain,
)
from lfun.jets import Jet1
from lfun.quadrature import CallableProvider, QuadratureSpec, taylor_grid_integrate
from lfun.specfun import bessel_k, log_gamma_value, select_T1


logger = logging.getLogger(__name__)

Check = Tuple[str, Callable[[], bool]]

# First values of Ramanujan's τ
TAU = (1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920)


# ============================================================================
# Suites
# ============================================================================

def _geometry_checks() -> List[Check]:
    def reduction_lands_in_domain() -> bool:
        for t, y in ((0.37, -3.0), (-12.25, -6.5), (0.5, 0.0), (101.9, -9.0)):
            reduced, gamma = reduce_to_fundamental_domain(n_matrix(t) @ a_matrix(y))
            z = mobius(reduced, 1j)
            if abs(z.real) > 0.5 + 1e-12 or abs(z) < 1 - 1e-12 or not gamma.is_integral():
                return False
        return True

    def iwasawa_roundtrip() -> bool:
        coords = IwasawaCoords(0.3, -0.7, 1.1)
        return all(abs(a - b) < 1e-12 for a, b in zip(iwasawa_decompose(iwasawa_compose(coords)), coords))

    return [("reduction_lands_in_domain", reduction_lands_in_domain),
            ("iwasawa_roundtrip", iwasawa_roundtrip)]


def _jets_checks() -> List[Check]:
    def exp_log_inverse() -> bool:
        x = Jet1.variable(1.7, 12)
        return bool(np.allclose(x.log().exp().coeffs, x.coeffs, atol=1e-13))

    def sin_squared_plus_cos_squared() -> bool:
        x = Jet1.variable(0.4, 10)
        one = x.sin() * x.sin() + x.cos() * x.cos()
        return bool(np.allclose(one.coeffs, Jet1.constant(1.0, 10).coeffs, atol=1e-13))

    return [("exp_log_inverse", exp_log_inverse),
            ("sin_squared_plus_cos_squared", sin_squared_plus_cos_squared)]


def _specfun_checks() -> List[Check]:
    def log_gamma_matches_mpmath() -> bool:
        for z in (0.5 + 30j, 3.0 - 0.25j, 6.5 + 100j):
            if abs(log_gamma_value(z) - complex(mpmath.loggamma(z))) > 1e-11:
                return False
        return True

    def bessel_k_matches_mpmath() -> bool:
        for r, x in ((1.0, 2 * math.pi), (5.0, 3.0)):
            expected = complex(mpmath.besselk(1j * r, x))
            if abs(complex(bessel_k(r, x)) - expected) > 1e-10 * max(1.0, abs(expected)):
                return False
        return True

    def t1_selection_clears_threshold() -> bool:
        T1, value = select_T1(100.0, 1.0)
        return abs(value.to_complex()) * 100.0 >= 0.05 and T1 > 0

    return [("log_gamma_matches_mpmath", log_gamma_matches_mpmath),
            ("bessel_k_matches_mpmath", bessel_k_matches_mpmath),
            ("t1_selection_clears_threshold", t1_selection_clears_threshold)]


def _lift_invariant(form, point) -> bool:
    value = lift_value(form, point)
    image = lift_value(form, S_MATRIX @ point)
    return abs(value - image) <= 1e-8 * max(1.0, abs(value))


def _forms_checks(form_path: Optional[Union[str, Path]]) -> List[Check]:
    def delta_coefficients() -> bool:
        table = gen_delta(len(TAU))
        return tuple(table[n] for n in range(1, len(TAU) + 1)) == TAU

    def delta_lift_invariant() -> bool:
        point = n_matrix(0.3) @ a_matrix(math.log(1.2)) @ k_matrix(0.4)
        return _lift_invariant(delta_form(60), point)

    checks = [("delta_coefficients", delta_coefficients),
              ("delta_lift_invariant", delta_lift_invariant)]
    if form_path is not None:
        def user_form_lift_invariant() -> bool:
            form = load_form(form_path, estimate_bound=False)
            point = n_matrix(0.1) @ a_matrix(math.log(1.05))
            return _lift_invariant(form, point)

        checks.append(("user_form_lift_invariant", user_form_lift_invariant))
    return checks


def _quadrature_checks() -> List[Check]:
    def exponential_integral() -> bool:
        provider = CallableProvider(lambda u0, order: Jet1.variable(u0, order).exp(), growth=1.0)
        result = taylor_grid_integrate(provider, QuadratureSpec(length=2.0, gamma=4, epsilon=0.25, scale=10))
        return abs(result.value - (math.e ** 2 - 1)) < 1e-10

    def oscillatory_integral() -> bool:
        frequency = 2 * math.pi * 3
        provider = CallableProvider(lambda u0, order: (Jet1.variable(u0, order) * (1j * frequency)).exp(),
                                    growth=frequency)
        result = taylor_grid_integrate(provider, QuadratureSpec(length=0.25, gamma=4, epsilon=0.25, scale=10))
        expected = (np.exp(1j * frequency * 0.25) - 1) / (1j * frequency)
        return abs(result.value - expected) < 1e-10

    return [("exponential_integral", exponential_integral),
            ("oscillatory_integral", oscillatory_integral)]


def _engine_checks() -> List[Check]:
    def delta_coefficient_direct() -> bool:
        form = ensure_deriv_bound(delta_form(60))
        result = fourier_direct(form, 3, PipelineParams(T=3))
        return abs(result.value - TAU[2]) <= 1e-6 * abs(TAU[2])

    return [("delta_coefficient_direct", delta_coefficient_direct)]


# ============================================================================
# Runner
# ============================================================================

def _run_suite(checks: List[Check]) -> Dict[str, object]:
    failures = []
    for name, check in checks:
        try:
            ok = bool(check())
        except Exception as e:  # a raising check is a failed check
            ok = False
            name = f"{name}: {type(e).__name__}: {e}"
        if not ok:
            failures.append(name)
            logger.warning("self-test check failed: %s", name)
    return {
        "passed": not failures,
        "checks": len(checks),
        "checks_passed": len(checks) - len(failures),
        "failures": failures,
    }


def run_selftest(form_path: Optional[Union[str, Path]] = None) -> Dict[str, object]:
    """
    Run every suite.

    Args:
        form_path: Optional form file checked by the forms suite

    Returns:
        Report {"passed": bool, "suites": {name: {...}}}
    """
    suites = {
        "engine": _engine_checks(),
        "forms": _forms_checks(form_path),
        "geometry": _geometry_checks(),
        "jets": _jets_checks(),
        "quadrature": _quadrature_checks(),
        "specfun": _specfun_checks(),
    }
    results = {name: _run_suite(checks) for name, checks in sorted(suites.items())}
    return {"passed": all(s["passed"] for s in results.values()), "suites": results}


def write_report(report: Dict[str, object], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
