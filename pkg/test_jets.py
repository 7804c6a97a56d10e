"""
Tests for truncated power series arithmetic.
"""

import math

import numpy as np
import pytest

from lfun.errors import CompositionError, DomainError, SingularJetError
from lfun.jets import Jet1, Jet3, jet_arith, jet_compose, jet_elementary


class TestJet1:
    """Univariate jets."""

    def test_product_truncates(self):
        x = Jet1.variable(2.0, 3)
        cube = x * x * x
        # (2 + s)^3 = 8 + 12s + 6s² + s³
        assert np.allclose(cube.coeffs, [8, 12, 6, 1])

    def test_exp_coefficients(self):
        x = Jet1.variable(0.5, 8)
        expected = np.exp(0.5) / np.array([math.factorial(k) for k in range(9)])
        assert np.allclose(x.exp().coeffs, expected, rtol=1e-14)

    def test_log_inverts_exp(self):
        x = Jet1([0.3, 1.2, -0.4, 0.05, 0.0, 0.2])
        assert np.allclose(x.exp().log().coeffs, x.coeffs, atol=1e-13)

    def test_pow_matches_binomial_series(self):
        x = Jet1.variable(1.0, 6)
        alpha = 0.5 + 2j
        expected = [complex(np.prod([alpha - j for j in range(k)])) / math.factorial(k) for k in range(7)]
        assert np.allclose(x.pow(alpha).coeffs, expected, rtol=1e-13)

    def test_integer_power_on_negative_axis(self):
        x = Jet1.variable(-2.0, 4)
        assert np.allclose(x.pow(-3).coeffs, (1 / (x * x * x)).coeffs)

    def test_sin_cos_identity(self):
        x = Jet1([0.7, 0.3, -0.1, 0.02, 0.0, 0.0, 0.01])
        s, c = x.sin_cos()
        assert np.allclose((s * s + c * c).coeffs, Jet1.constant(1.0, 6).coeffs, atol=1e-14)

    def test_atan2_against_closed_form(self):
        # atan2(s, 1) = atan(s) = s - s³/3 + s⁵/5
        y = Jet1.variable(0.0, 5)
        x = Jet1.constant(1.0, 5)
        assert np.allclose(y.atan2(x).coeffs, [0, 1, 0, -1 / 3, 0, 1 / 5], atol=1e-15)

    def test_division_by_singular_jet(self):
        with pytest.raises(SingularJetError):
            Jet1.constant(1.0, 3) / Jet1.variable(0.0, 3)

    def test_log_on_branch_cut(self):
        with pytest.raises(DomainError):
            Jet1.variable(-1.0, 3).log()

    def test_compose_needs_nilpotent_inner(self):
        outer = Jet1.variable(0.0, 4).exp()
        with pytest.raises(CompositionError):
            outer.compose(Jet1.variable(1.0, 4))

    def test_compose_exp_of_sine(self):
        # e^{sin s}: 1 + s + s²/2 + 0·s³ - s⁴/8
        outer = Jet1.variable(0.0, 4).exp()
        inner = Jet1.variable(0.0, 4).sin()
        assert np.allclose(jet_compose(outer, inner).coeffs, [1, 1, 0.5, 0, -1 / 8], atol=1e-15)

    def test_derivative_and_integrate(self):
        x = Jet1([1.0, 2.0, 3.0, 4.0])
        assert np.allclose(x.derivative().coeffs[:3], [2, 6, 12])
        assert np.allclose(x.derivative().integrate(1.0).coeffs, x.coeffs)

    def test_evaluate_is_polynomial(self):
        x = Jet1([1.0, -1.0, 0.5])
        assert x.evaluate(2.0) == pytest.approx(1.0)


class TestJet3:
    """Trivariate jets on the total-degree simplex."""

    def test_direct_construction_masks_to_degree(self):
        coeffs = np.ones((3, 2, 4))
        jet = Jet3(coeffs, 2)
        assert jet.orders == (2, 1, 3)
        assert jet.coefficient((1, 1, 0)) == 1.0
        assert jet.coeffs[2, 1, 0] == 0.0
        assert jet.coeffs[0, 0, 3] == 0.0
        assert jet.size == 9
        assert coeffs[2, 1, 0] == 1.0

    def test_numpy_scalar_operands(self):
        jet = Jet3.variable(0, 0.5, 2)
        assert isinstance(np.float64(2.0) * jet, Jet3)
        assert (np.complex128(1j) + jet).constant_term == 0.5 + 1j

    def test_derivatives_of_product_against_closed_form(self):
        degree = 4
        x = Jet3.variable(0, 0.3, degree)
        y = Jet3.variable(1, -0.2, degree)
        z = Jet3.variable(2, 0.5, degree)
        f = (x * y).exp() * z.sin()
        # ∂x∂y e^{xy} = (1 + xy)e^{xy}
        xy = 0.3 * -0.2
        assert f.derivative_value((1, 1, 0)) == pytest.approx((1 + xy) * math.exp(xy) * math.sin(0.5))
        # ∂z² sin z = -sin z
        assert f.derivative_value((0, 0, 2)) == pytest.approx(-math.exp(xy) * math.sin(0.5))

    def test_finite_difference_agreement(self):
        degree = 3
        base = (0.2, 0.1, -0.3)

        def fn(a, b, c):
            return np.exp(a * 1j + b) / (2 + np.cos(c))

        jets = [Jet3.variable(axis, base[axis], degree) for axis in range(3)]
        f = (jets[0] * 1j + jets[1]).exp() / (jets[2].cos() + 2)
        h = 1e-3
        numeric = (fn(base[0] + h, base[1], base[2]) - fn(base[0] - h, base[1], base[2])) / (2 * h)
        assert f.derivative_value((1, 0, 0)) == pytest.approx(numeric, rel=1e-6)
        numeric = (fn(base[0], base[1], base[2] + h) - 2 * fn(*base) + fn(base[0], base[1], base[2] - h)) / h ** 2
        assert f.derivative_value((0, 0, 2)) == pytest.approx(numeric, rel=1e-5)

    def test_index_set_is_masked(self):
        jet = Jet3.variable(0, 1.0, 2)
        cube = jet * jet * jet
        with pytest.raises(IndexError):
            cube.coefficient((3, 0, 0))

    def test_restrict_gives_univariate_jet(self):
        jet = Jet3.variable(1, 0.0, 5).exp()
        assert np.allclose(jet.restrict(1).coeffs, 1 / np.array([math.factorial(k) for k in range(6)]))


def test_functional_interface():
    a = Jet1.variable(1.0, 3)
    b = Jet1.constant(2.0, 3)
    assert np.allclose(jet_arith(a, b, "mul").coeffs, [2, 2, 0, 0])
    assert np.allclose(jet_elementary(a, "pow", 2).coeffs, [1, 2, 1, 0])
    with pytest.raises(ValueError):
        jet_arith(a, b, "mod")
    with pytest.raises(ValueError):
        jet_elementary(a, "tanh")
