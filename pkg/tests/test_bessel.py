"""Tests for the Bessel evaluator and the ball Fourier integral.

Anchor values were generated with mpmath at 40 decimal digits and frozen
here; the dense sweeps compare against scipy as an independent oracle.
"""

import math

import numpy as np
import pytest
import scipy.special

from sphersum.bessel import ball_fourier_integral, bessel_j, unit_ball_volume
from sphersum.errors import ParameterError

# mpmath besselj, dps=40
INTEGER_ANCHORS = {
    (0, 1.0): 0.7651976865579665514497,
    (1, 1.0): 0.4400505857449335159597,
    (2, 3.0): 0.4860912605858910769078,
    (3, 10.0): 0.05837937930518681234294,
    (0, 14.5): 0.0875448680103762229059,
    (1, 15.5): 0.1672131803517471432654,
    (2, 100.0): -0.02152875734450536558488,
    (0, 647.25): 0.0239125218565870975384,
    (3, 999.5): 0.007638499508759433206889,
}
HALF_ANCHORS = {
    (0.5, 1.0): 0.6713967071418030904164,
    (1.5, 2.5): 0.5250802646640031459486,
    (2.5, 7.0): -0.2834366512016991982156,
    (-0.5, 0.25): 1.546160524106076954373,
    (0.5, 0.125): 0.2813607436301566311699,
    (1.5, 0.01): 0.0002659588606619177255137,
}
# mpmath: integral of e^{i d.x} over {|x| < R} in R^N, keyed (N, d, R)
BALL_ANCHORS = {
    (1, 3.0, 1.0): 0.09408000537324481473383,
    (2, 5.5, 0.75): -0.09621970598415459193097,
    (3, 11.0, 1.0): -0.009900835551345971938457,
    (2, 0.0, 2.0): 12.56637061435917295385,
    (4, 2.0, 1.5): 10.79443900082156592337,
    (5, 9.0, 0.5): 0.02635255788049468546028,
}

ABS_TOL = 1e-10


class TestBesselAnchors:
    @pytest.mark.parametrize("key", sorted(INTEGER_ANCHORS))
    def test_integer_orders(self, key):
        nu, t = key
        assert bessel_j(nu, t) == pytest.approx(INTEGER_ANCHORS[key], abs=ABS_TOL)

    @pytest.mark.parametrize("key", sorted(HALF_ANCHORS))
    def test_half_orders(self, key):
        nu, t = key
        assert bessel_j(nu, t) == pytest.approx(HALF_ANCHORS[key], abs=1e-13)

    def test_values_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(0.5, 0.0) == 0.0
        assert bessel_j(2.5, 0.0) == 0.0
        assert bessel_j(-0.5, 0.0) == math.inf

    def test_half_integer_closed_form_identity(self):
        # J_{1/2}(t) = sqrt(2/(pi t)) sin(t)
        for t in (1.0, 2.0, 5.0):
            expected = math.sqrt(2.0 / (math.pi * t)) * math.sin(t)
            assert bessel_j(0.5, t) == pytest.approx(expected, abs=1e-15)


class TestBesselDenseSweep:
    @pytest.mark.parametrize("nu", [0, 1, 2, 3, 0.5, 1.5, 2.5])
    def test_matches_scipy_on_long_range(self, nu):
        t = np.linspace(0.0, 1000.0, 20001)
        err = np.abs(bessel_j(nu, t) - scipy.special.jv(nu, t))
        assert float(err.max()) < ABS_TOL

    @pytest.mark.parametrize("nu", [0, 1, 2, 3])
    def test_matches_scipy_near_internal_switch(self, nu):
        t = np.linspace(12.0, 18.0, 60001)
        err = np.abs(bessel_j(nu, t) - scipy.special.jv(nu, t))
        assert float(err.max()) < ABS_TOL


class TestBesselValidation:
    def test_rejects_unsupported_order(self):
        with pytest.raises(ParameterError):
            bessel_j(-1.0, 1.0)
        with pytest.raises(ParameterError):
            bessel_j(3.5, 1.0)
        with pytest.raises(ParameterError):
            bessel_j(0.3, 1.0)

    def test_rejects_negative_or_nonfinite_argument(self):
        with pytest.raises(ParameterError):
            bessel_j(0, -1.0)
        with pytest.raises(ParameterError):
            bessel_j(0, math.nan)

    def test_scalar_in_scalar_out(self):
        out = bessel_j(0, 1.0)
        assert isinstance(out, float)
        arr = bessel_j(0, np.array([1.0, 2.0]))
        assert arr.shape == (2,)


class TestBallFourierIntegral:
    @pytest.mark.parametrize("key", sorted(BALL_ANCHORS))
    def test_anchor_values(self, key):
        N, d, R = key
        assert ball_fourier_integral(d, R, N) == pytest.approx(
            BALL_ANCHORS[key], abs=ABS_TOL
        )

    def test_zero_distance_is_ball_volume(self):
        assert ball_fourier_integral(0.0, 1.0, 3) == pytest.approx(
            4.0 * math.pi / 3.0, rel=1e-14
        )
        assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
        assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-15)

    def test_one_dimensional_closed_form(self):
        # integral of e^{i d x} over (-R, R) is 2 sin(R d) / d
        for d in (0.5, 2.0, 9.0):
            for R in (0.5, 1.0):
                expected = 2.0 * math.sin(R * d) / d
                assert ball_fourier_integral(d, R, 1) == pytest.approx(
                    expected, abs=1e-13
                )

    def test_three_dimensional_closed_form(self):
        # 4 pi (sin(R d) - R d cos(R d)) / d^3
        for d in (0.7, 4.0):
            R = 1.0
            expected = 4.0 * math.pi * (math.sin(R * d) - R * d * math.cos(R * d)) / d**3
            assert ball_fourier_integral(d, R, 3) == pytest.approx(expected, abs=1e-12)

    def test_vectorized_matches_scalar(self):
        d = np.array([0.0, 1.0, 5.0, 30.0])
        vec = ball_fourier_integral(d, 0.8, 2)
        for i, di in enumerate(d):
            assert vec[i] == pytest.approx(ball_fourier_integral(float(di), 0.8, 2))

    def test_validation(self):
        with pytest.raises(ParameterError):
            ball_fourier_integral(1.0, 0.0, 2)
        with pytest.raises(ParameterError):
            ball_fourier_integral(1.0, 1.0, 0)
        with pytest.raises(ParameterError):
            ball_fourier_integral(-1.0, 1.0, 2)
