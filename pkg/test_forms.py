"""
Tests for cusp form descriptions, form files, Δ coefficients and the lift
f̃ with its derivative tables.
"""

import json
import logging
import math

import mpmath
import numpy as np
import pytest

from lfun.errors import FormLoadError, InsufficientCoefficientsError
from lfun.forms import CoefficientTable, CuspFormSpec, HOLOMORPHIC, delta_form, gen_delta, load_form, write_form_file
from lfun.forms.lift import (
    AFlow,
    Curve,
    LogFlow,
    NFlow,
    OmegaFlow,
    curve_taylor,
    curve_taylor_table,
    estimate_R,
    lift_jet3,
    lift_value,
)
from lfun.forms.spec import dirichlet_partial_sum, form_from_dict, form_to_dict, terms_needed
from lfun.geometry import (
    S_MATRIX,
    Mat2,
    MultiIndex,
    a_matrix,
    k_matrix,
    multi_indices,
    n_matrix,
)


def delta_file_dict(n=20):
    return form_to_dict(delta_form(n))


# ============================================================================
# Δ coefficients
# ============================================================================

class TestGenDelta:
    def test_first_values(self, tau):
        assert [tau[n] for n in range(1, 11)] == [
            1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920,
        ]

    def test_multiplicative(self, tau):
        for m, n in ((2, 3), (3, 5), (4, 7), (5, 11), (7, 8), (8, 9)):
            assert tau[m * n] == tau[m] * tau[n]

    def test_prime_power_recursion(self, tau):
        for p in (2, 3, 5, 7):
            assert tau[p * p] == tau[p] ** 2 - p ** 11
        assert tau[64] == tau[2] * tau[32] - 2 ** 11 * tau[16]

    def test_exact_integers(self, tau):
        assert tau.exact
        assert all(isinstance(v, int) for v in tau.values)

    def test_rejects_empty_table(self):
        with pytest.raises(ValueError):
            gen_delta(0)


# ============================================================================
# Form files
# ============================================================================

class TestFormFiles:
    def test_write_then_load(self, tmp_path):
        path = tmp_path / "delta.json"
        write_form_file(delta_form(40), path)
        form = load_form(path, estimate_bound=False)
        assert form.kind == HOLOMORPHIC
        assert form.weight == 12
        assert form.coefficients.exact
        assert form.coefficients[40] == gen_delta(40)[40]

    def test_load_estimates_bound(self, tmp_path):
        path = tmp_path / "delta.json"
        write_form_file(delta_form(40), path)
        assert load_form(path).deriv_bound >= 11.9

    def test_short_table_warns(self, tmp_path, caplog):
        path = tmp_path / "short.json"
        path.write_text(json.dumps(delta_file_dict(3)))
        with caplog.at_level(logging.WARNING, logger="lfun.forms.spec"):
            load_form(path, estimate_bound=False)
        assert "coefficients" in caplog.text

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(FormLoadError):
            load_form(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormLoadError):
            load_form(tmp_path / "absent.json")

    @pytest.mark.parametrize("patch", [
        {"weight": 11},
        {"weight": 2},
        {"level": 2},
        {"kind": "siegel"},
        {"r": 9.5},
        {"extra": 1},
        {"coefficients": []},
        {"coefficients": [1, "two"]},
        {"fricke": {"C1": 1.0}},
        {"fricke": {"C1": -1.0, "C2_re": 1.0, "C2_im": 0.0}},
    ])
    def test_schema_violations(self, patch):
        data = delta_file_dict()
        data.update(patch)
        with pytest.raises(FormLoadError):
            form_from_dict(data)

    def test_missing_field(self):
        data = delta_file_dict()
        del data["fricke"]
        with pytest.raises(FormLoadError):
            form_from_dict(data)

    def test_maass_needs_r(self):
        data = delta_file_dict()
        data.update(kind="maass-even", weight=0)
        with pytest.raises(FormLoadError):
            form_from_dict(data)
        data["r"] = 9.53
        assert form_from_dict(data).r.r == 9.53


def test_terms_needed_grows_as_height_drops():
    assert terms_needed(math.sqrt(3) / 2) < terms_needed(0.1)
    assert terms_needed(1.0, 1e-16) == math.ceil((math.log(1e16) + 10) / (2 * math.pi))


def test_dirichlet_partial_sum_of_single_term():
    form = CuspFormSpec(kind=HOLOMORPHIC, weight=12,
                        coefficients=CoefficientTable.from_sequence([0, 0, 2.0]))
    s = complex(0.5, 3.0)
    expected = 2.0 * 3 ** (-(s + 5.5))
    assert dirichlet_partial_sum(form, s) == pytest.approx(expected)


# ============================================================================
# Lift values
# ============================================================================

def reduced_point():
    return n_matrix(0.1) @ a_matrix(math.log(1.3)) @ k_matrix(0.2)


class TestLiftValue:
    def test_diagonal_point(self, delta):
        """f̃(a(y0)) = e^{k·y0/2}·f(i·e^{y0})."""
        y0 = 0.4
        z = 1j * math.exp(y0)
        f = sum(delta.coefficients[n] * np.exp(2j * math.pi * n * z) for n in range(1, 30))
        assert lift_value(delta, a_matrix(y0)) == pytest.approx(math.exp(6 * y0) * f, rel=1e-12)

    def test_rotation_weight(self, delta):
        g = reduced_point()
        theta = 0.7
        assert lift_value(delta, g @ k_matrix(theta)) == pytest.approx(
            np.exp(12j * theta) * lift_value(delta, g), rel=1e-12)

    @pytest.mark.parametrize("gamma", [S_MATRIX, Mat2(1, 1, 0, 1), Mat2(2, 1, 1, 1)])
    def test_gamma_invariance(self, delta, gamma):
        g = n_matrix(0.3) @ a_matrix(math.log(1.2)) @ k_matrix(0.4)
        value = lift_value(delta, g)
        assert lift_value(delta, gamma @ g) == pytest.approx(value, abs=1e-10 * max(1.0, abs(value)))

    def test_insufficient_coefficients(self):
        with pytest.raises(InsufficientCoefficientsError) as info:
            lift_value(delta_form(5), a_matrix(math.log(0.05)))
        assert info.value.available == 5
        assert info.value.required > 5

    def test_maass_value(self, maass_synthetic):
        g = n_matrix(0.2) @ a_matrix(math.log(1.1))
        x, y = 0.2, 1.1
        r = maass_synthetic.r.r.real
        expected = sum(
            c * 2 * math.sqrt(n * y) * complex(mpmath.besselk(1j * r, 2 * math.pi * n * y)).real
            * math.cos(2 * math.pi * n * x)
            for n, c in enumerate(maass_synthetic.coefficients.values, start=1) if c
        )
        assert lift_value(maass_synthetic, g) == pytest.approx(expected, rel=1e-9, abs=1e-14)

    def test_maass_is_right_k_invariant(self, maass_synthetic):
        g = n_matrix(0.2) @ a_matrix(math.log(1.1))
        assert lift_value(maass_synthetic, g @ k_matrix(0.9)) == pytest.approx(lift_value(maass_synthetic, g))


# ============================================================================
# Derivatives
# ============================================================================

def finite_difference(fn, h=1e-4):
    return (fn(h) - fn(-h)) / (2 * h)


class TestLiftJet:
    @pytest.mark.parametrize("axis", [0, 1, 2])
    def test_first_derivatives(self, delta, axis):
        g = reduced_point()
        moves = (n_matrix, a_matrix, k_matrix)
        jet = lift_jet3(delta, g, 3)
        beta = [0, 0, 0]
        beta[axis] = 1
        numeric = finite_difference(lambda h: lift_value(delta, g @ moves[axis](h)))
        assert jet.derivative_value(beta) == pytest.approx(numeric, rel=1e-6)

    def test_mixed_derivative(self, delta):
        g = reduced_point()
        jet = lift_jet3(delta, g, 3)

        def dt(y):
            return finite_difference(lambda h: lift_value(delta, g @ a_matrix(y) @ n_matrix(h)), 1e-3)

        # g·a(y)·n(h) = g·n(e^y·h)·a(y)
        numeric = finite_difference(lambda y: dt(y) * math.exp(-y), 1e-3)
        assert jet.derivative_value((1, 1, 0)) == pytest.approx(numeric, rel=1e-5)

    def test_theta_derivatives_are_weight_multiples(self, delta):
        jet = lift_jet3(delta, reduced_point(), 4)
        for j in range(1, 4):
            assert jet.coefficient((0, 0, j)) == pytest.approx(
                (12j) ** j / math.factorial(j) * jet.coefficient((0, 0, 0)), rel=1e-10)

    def test_constant_term_is_value(self, delta):
        g = reduced_point()
        assert lift_jet3(delta, g, 2).coefficient((0, 0, 0)) == pytest.approx(lift_value(delta, g), rel=1e-12)

    def test_unreduced_base_gives_same_jet(self, delta):
        g = reduced_point()
        first = lift_jet3(delta, g, 3).coeffs
        second = lift_jet3(delta, S_MATRIX @ n_matrix(2.0) @ g, 3).coeffs
        assert np.allclose(first, second, rtol=1e-8, atol=1e-12 * np.abs(first).max())

    def test_maass_jet_at_reduced_point(self, maass_synthetic):
        g = n_matrix(0.2) @ a_matrix(math.log(1.1))
        jet = lift_jet3(maass_synthetic, g, 3)
        numeric = finite_difference(lambda h: lift_value(maass_synthetic, g @ a_matrix(h)))
        assert jet.derivative_value((0, 1, 0)) == pytest.approx(numeric, rel=1e-6, abs=1e-12)
        assert jet.coefficient((0, 0, 1)) == pytest.approx(0.0, abs=1e-14)


class TestCurveTables:
    @pytest.mark.parametrize("curve", [NFlow(), AFlow(), OmegaFlow(40.0, -1), OmegaFlow(40.0, 1), LogFlow(40.0, -1)])
    def test_holomorphic_route_matches_generic(self, delta, curve):
        x = n_matrix(-0.2) @ a_matrix(0.1)
        betas = multi_indices(2)
        fast = curve_taylor_table(delta, x, betas, curve, 0.3, 8)
        generic = curve_taylor_table(delta, x, betas, curve, 0.3, 8, generic=True)
        scale = np.abs(generic).max()
        assert np.allclose(fast, generic, rtol=1e-9, atol=1e-12 * scale)

    @pytest.mark.parametrize("curve", [NFlow(), OmegaFlow(5.0, -1), LogFlow(5.0, -1)])
    def test_first_coefficient_is_curve_derivative(self, delta, curve):
        x = n_matrix(0.2) @ a_matrix(0.1)
        u0 = 0.6
        jet = curve_taylor(delta, x, MultiIndex(0, 0, 0), curve, u0, 4)
        numeric = finite_difference(lambda h: lift_value(delta, curve.point(x, u0 + h)))
        assert complex(jet.coeffs[0]) == pytest.approx(lift_value(delta, curve.point(x, u0)), rel=1e-10)
        assert complex(jet.coeffs[1]) == pytest.approx(numeric, rel=1e-6)

    def test_beta_row_matches_jet3(self, delta):
        x = reduced_point()
        beta = MultiIndex(1, 1, 1)
        row = curve_taylor(delta, x, beta, NFlow(), 0.0, 2)
        jet = lift_jet3(delta, x, 3)
        assert complex(row.coeffs[0]) == pytest.approx(jet.derivative_value(beta), rel=1e-9)

    def test_curve_without_coordinates_is_abstract(self):
        class PointOnly(Curve):
            def point(self, x, u0):
                return x

        with pytest.raises(TypeError):
            PointOnly()
        with pytest.raises(TypeError):
            Curve()


class TestEstimateR:
    def test_holomorphic_bound_covers_weight(self, delta_bare):
        assert estimate_R(delta_bare, samples=20) >= 11.9

    def test_deterministic(self, delta_bare):
        assert estimate_R(delta_bare, samples=10, seed=3) == estimate_R(delta_bare, samples=10, seed=3)

    def test_zero_form(self):
        form = CuspFormSpec(kind=HOLOMORPHIC, weight=12, coefficients=CoefficientTable.from_sequence([0] * 20))
        assert estimate_R(form, samples=5) == 1.0
