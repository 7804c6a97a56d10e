"""
Tests for contours, truncation windows, prefactor assembly and the
imaginary-axis L-value.
"""

import cmath
import math
from dataclasses import replace

import pytest

from lfun.errors import ParameterError, PrecisionModeRequiredError
from lfun.geomfe import (
    HOLO,
    MAASS,
    assemble_L,
    contour_for,
    holo_contour,
    lvalue_classical,
    maass_contour,
    truncation_window,
)
from lfun.specfun import LogComplex, SpectralParam


@pytest.fixture(scope="module")
def maass_small_r(maass_synthetic):
    """Synthetic Maass form moved to r = 1, where C(T₁) is easy to clear."""
    return replace(maass_synthetic, r=SpectralParam(1.0))


class TestHoloContour:
    def test_positive_height(self, delta):
        contour = holo_contour(delta, 100.0, 4.0)
        assert contour.kind == HOLO
        assert contour.direction == -1
        assert contour.scale == 100.0
        assert contour.alpha == complex(-1, 0.01)
        assert contour.nu == complex(6, 100)
        assert contour.s == complex(0.5, 100)

    def test_prefactor_is_moderate(self, delta):
        # e^{π|T|/2} growth of (-α̃i)^ν against the Γ(ν) decay
        for T in (100.0, 1e4):
            assert abs(holo_contour(delta, T, 4.0).prefactor.logmag) < 0.01 * T + 40

    def test_mirrored_for_negative_height(self, delta):
        up = holo_contour(delta, 50.0, 4.0)
        down = holo_contour(delta, -50.0, 4.0)
        assert down.direction == 1
        assert down.alpha == -up.alpha.conjugate()
        assert down.prefactor.logmag == pytest.approx(up.prefactor.logmag, rel=1e-12)
        assert math.remainder(down.prefactor.arg + up.prefactor.arg, 2 * math.pi) == pytest.approx(0.0, abs=1e-9)

    def test_rejects_maass_form(self, maass_synthetic):
        with pytest.raises(ParameterError):
            holo_contour(maass_synthetic, 10.0, 4.0)

    def test_rejects_zero_height(self, delta):
        with pytest.raises(ParameterError):
            holo_contour(delta, 0.0, 4.0)


class TestMaassContour:
    def test_prefactor_cancels_mellin_factor(self, maass_small_r):
        contour = maass_contour(maass_small_r, 100.0, 4.0)
        assert contour.kind == MAASS
        assert contour.T1 > 0
        assert contour.scale == contour.T1
        assert contour.alpha == complex(-1, 1 / contour.T1)
        assert contour.nu == complex(0, 100)
        # |(2π)^s| / 2 with ν purely imaginary
        total = contour.prefactor.logmag + contour.mellin.logmag
        assert total == pytest.approx(0.5 * math.log(2 * math.pi) - math.log(2), abs=1e-9)

    def test_dispatch(self, delta, maass_small_r):
        assert contour_for(delta, 20.0, 4.0).kind == HOLO
        assert contour_for(maass_small_r, 100.0, 4.0).kind == MAASS

    def test_rejects_holomorphic_form(self, delta):
        with pytest.raises(ParameterError):
            maass_contour(delta, 100.0, 4.0)


class TestTruncationWindow:
    @pytest.mark.parametrize("T", [10.0, 100.0, 1e4])
    def test_window_covers_bulk(self, delta, T):
        window = truncation_window(delta, T, 4.0)
        assert window.t0 < 1 < window.t1
        assert window.t1 >= T * math.log(T)
        assert window.t0 == pytest.approx(1 / window.t1)
        assert window.tail < T ** -4.0

    def test_larger_gamma_widens(self, delta):
        assert truncation_window(delta, 100.0, 8.0).t1 > truncation_window(delta, 100.0, 2.0).t1

    def test_widened(self, delta):
        contour = holo_contour(delta, 100.0, 4.0)
        wide = contour.widened(2.0)
        assert wide.window.t0 == pytest.approx(contour.window.t0 / 2)
        assert wide.window.t1 == pytest.approx(contour.window.t1 * 2)
        assert wide.log_span == pytest.approx(contour.log_span + 100.0 * math.log(4))

    def test_rejects_bad_gamma(self, delta):
        with pytest.raises(ParameterError):
            truncation_window(delta, 100.0, 0.0)


class TestAssemble:
    def test_double_mode_overflow_is_refused(self, delta):
        contour = replace(holo_contour(delta, 100.0, 4.0), prefactor=LogComplex(800.0, 0.0))
        with pytest.raises(PrecisionModeRequiredError):
            assemble_L(contour, 1.0)

    def test_extended_mode_handles_tiny_prefactor(self, delta):
        contour = replace(holo_contour(delta, 100.0, 4.0, "extended"), prefactor=LogComplex(-750.0, 0.3))
        value, _ = assemble_L(contour, 1e300)
        expected = cmath.exp(complex(-750.0 + 300 * math.log(10), 0.3))
        assert value == pytest.approx(expected, rel=1e-12)

    def test_plain_product(self, delta):
        contour = holo_contour(delta, 100.0, 4.0)
        value, err_note = assemble_L(contour, 2.0 - 1.0j, quad_err=1e-9)
        assert value == pytest.approx(contour.prefactor.to_complex() * (2.0 - 1.0j), rel=1e-14)
        assert err_note >= 0.99 * abs(contour.prefactor.to_complex()) * 1e-9

    def test_zero_integral(self, delta):
        assert assemble_L(holo_contour(delta, 100.0, 4.0), 0.0) == (0j, 0.0)

    def test_maass_error_is_scaled_by_height(self, delta):
        contour = holo_contour(delta, 100.0, 4.0)
        _, holo_note = assemble_L(contour, 1.0, quad_err=1e-6)
        _, maass_note = assemble_L(replace(contour, kind=MAASS), 1.0, quad_err=1e-6)
        assert maass_note == pytest.approx(100.0 * holo_note)


class TestClassical:
    def test_central_value_of_delta(self, delta):
        """L(Δ, 1/2) in the analytic normalisation is the classical L(Δ, 6)."""
        value = lvalue_classical(delta, 0.0)
        assert value.real == pytest.approx(0.7921228386, rel=1e-6)
        assert value.imag == pytest.approx(0.0, abs=1e-10)

    def test_conjugate_symmetry(self, delta):
        assert lvalue_classical(delta, -2.0) == pytest.approx(lvalue_classical(delta, 2.0).conjugate(), rel=1e-10)
