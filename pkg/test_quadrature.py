"""
Tests for the Taylor grid integrator.
"""

import cmath
import logging
import math

import numpy as np
import pytest

from lfun.errors import ParameterError
from lfun.jets import Jet1
from lfun.quadrature import (
    CallableProvider,
    FactoredIntegrandProvider,
    IntegrandProvider,
    QuadratureSpec,
    quadrature_order,
    spot_check_growth,
    taylor_grid_integrate,
)


def exp_provider(rate=1.0, growth=1.0):
    """Jets of u -> e^{rate·u}."""
    return CallableProvider(lambda u0, order: (Jet1.variable(u0, order) * rate).exp(), growth=growth)


def spec(length, epsilon=0.25, order=None, start=0.0):
    return QuadratureSpec(length=length, gamma=4.0, epsilon=epsilon, scale=1.0, order=order, start=start)


class ExponentialPairs(FactoredIntegrandProvider):
    """left_a(u) = e^{a·u}, right_b(u) = e^{b·u}."""

    def __init__(self, left_rates, right_rates):
        super().__init__(growth=max(map(abs, left_rates + right_rates)))
        self.left_rates = left_rates
        self.right_rates = right_rates

    def _table(self, rates, u0, order):
        k = np.arange(order + 1)
        factorials = np.array([math.factorial(j) for j in k], dtype=float)
        return np.array([np.exp(a * u0) * a ** k / factorials for a in rates], dtype=complex)

    def factors(self, u0, order):
        self.jet_evals += 1
        return self._table(self.left_rates, u0, order), self._table(self.right_rates, u0, order)


class TestClosedForms:
    def test_exponential(self):
        result = taylor_grid_integrate(exp_provider(), spec(3.0))
        assert result.value == pytest.approx(math.exp(3.0) - 1.0, rel=1e-12)
        assert result.err_est >= 0

    def test_polynomial_is_exact(self):
        provider = CallableProvider(lambda u0, order: Jet1.variable(u0, order) ** 3, degree=3)
        result = taylor_grid_integrate(provider, spec(2.0, start=1.0))
        # ∫₁³ u³ du
        assert result.value == pytest.approx(20.0, rel=1e-13)

    def test_oscillatory(self):
        omega = 20.0
        provider = exp_provider(1j * omega, growth=omega)
        result = taylor_grid_integrate(provider, spec(2.0))
        expected = (cmath.exp(2j * omega) - 1) / (1j * omega)
        assert result.value == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_one_jet_per_cell(self):
        provider = exp_provider(growth=4.0)
        taylor_grid_integrate(provider, spec(3.0))
        assert provider.jet_evals == 12

    def test_explicit_order_is_used(self):
        low = taylor_grid_integrate(exp_provider(), spec(1.0, order=2)).value
        high = taylor_grid_integrate(exp_provider(), spec(1.0, order=20)).value
        assert low == pytest.approx(1 + 1 / 2 + 1 / 6, rel=1e-12)
        assert high == pytest.approx(math.e - 1, rel=1e-13)


class TestFactored:
    def test_matrix_of_pair_integrals(self):
        left, right = [0.5, 1.0], [0.0, -1.0, -0.5]
        provider = ExponentialPairs(left, right)
        result = taylor_grid_integrate(provider, spec(1.0))
        assert result.value.shape == (2, 3)
        for i, a in enumerate(left):
            for j, b in enumerate(right):
                rate = a + b
                expected = 1.0 if rate == 0 else math.expm1(rate) / rate
                assert result.value[i, j] == pytest.approx(expected, rel=1e-12)

    def test_scalar_jet_is_first_pair(self):
        provider = ExponentialPairs([0.5], [0.25])
        jet = provider.jet(0.0, 6)
        assert np.allclose(jet.coeffs, 0.75 ** np.arange(7) / [math.factorial(k) for k in range(7)])

    def test_provider_without_factors_is_abstract(self):
        class Unfinished(FactoredIntegrandProvider):
            pass

        with pytest.raises(TypeError):
            Unfinished(growth=1.0)

    def test_zero_length_gives_zero_matrix(self):
        result = taylor_grid_integrate(ExponentialPairs([1.0, 2.0], [0.5]), spec(0.0))
        assert result.value.shape == (2, 1)
        assert not result.value.any()
        assert result.err_est == 0.0


def test_zero_length_scalar():
    result = taylor_grid_integrate(exp_provider(), spec(0.0))
    assert result.value == 0
    assert result.err_est == 0.0


@pytest.mark.parametrize("bad", [
    dict(length=-1.0),
    dict(epsilon=0.0),
    dict(gamma=-1.0),
    dict(scale=0.0),
    dict(order=1),
])
def test_invalid_spec(bad):
    fields = dict(length=1.0, gamma=4.0, epsilon=0.25, scale=1.0)
    fields.update(bad)
    with pytest.raises(ParameterError):
        taylor_grid_integrate(exp_provider(), QuadratureSpec(**fields))


def test_base_provider_is_abstract():
    with pytest.raises(TypeError):
        IntegrandProvider()


def test_provider_rejects_nonpositive_growth():
    with pytest.raises(ParameterError):
        exp_provider(growth=0.0)


def test_quadrature_order():
    assert quadrature_order(2, 4.0, 0.5) == 12
    assert quadrature_order(0, 4.0, 1.0) == 4
    assert quadrature_order(0, 4.0, 1 / 16) == 48


class TestSpotCheck:
    def test_honest_declaration_passes(self):
        assert spot_check_growth(exp_provider(), [0.0, 0.5, 1.0], 10)

    def test_understated_growth_is_flagged(self, caplog):
        provider = exp_provider(rate=20.0, growth=1.0)
        with caplog.at_level(logging.WARNING, logger="lfun.quadrature"):
            assert not spot_check_growth(provider, [0.0, 0.1], 10)
        assert "violated" in caplog.text

    def test_zero_integrand(self):
        provider = CallableProvider(lambda u0, order: Jet1.constant(0.0, order))
        assert spot_check_growth(provider, [0.0, 1.0], 5)
