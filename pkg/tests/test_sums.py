"""Partial-sum cuts: frozen single modes, oracles, split identity, maximal sweep."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from sphersum import fields, sums
from sphersum.errors import (
    DimensionError,
    NotEllipticError,
    ParameterError,
    PreconditionError,
    RangeError,
)
from sphersum.kernels import build_kernel_coeffs
from sphersum.windows import WindowSpec, build_window, delta_window

TWO_PI = 2.0 * math.pi


def make_rng(salt=0):
    return np.random.default_rng(20260816 + salt)


def delta_field(N, band, n, value=1.0):
    coeffs = np.zeros((2 * band + 1,) * N, dtype=complex)
    coeffs[tuple(c + band for c in n)] = value
    return fields.SpectralField(N, band, coeffs)


class TestSphericalSum:
    def test_strict_cut_excludes_shell(self):
        f = delta_field(2, 2, (1, 0))
        assert np.all(sums.spherical_sum(f, 1.0, 8) == 0.0)

    def test_just_inside_cut(self):
        f = delta_field(2, 2, (1, 0))
        grid = fields.TorusGrid(2, 8)
        x1 = grid.axis()[:, None] * np.ones((1, 8))
        assert np.allclose(sums.spherical_sum(f, 1.5, 8), np.exp(1j * x1), atol=1e-14)

    def test_full_band_recovery(self):
        rng = make_rng(0)
        f = fields.random_field(2, 4, rng)
        lam = 2 * 2 * 4**2
        assert np.allclose(
            sums.spherical_sum(f, lam, 16), fields.synthesize(f, 16), atol=1e-10
        )

    def test_parseval(self):
        rng = make_rng(1)
        f = fields.random_field(2, 5, rng)
        lam = 13.0
        samples = sums.spherical_sum(f, lam, 16)
        kept = fields.mode_norms_sq(2, 5) < lam
        expected = TWO_PI**2 * float(np.sum(np.abs(f.coeffs[kept]) ** 2))
        assert fields.grid_norm_sq(samples) == pytest.approx(expected, rel=1e-8)

    def test_rejects_nonpositive_cut(self):
        f = delta_field(2, 1, (0, 0))
        with pytest.raises(RangeError):
            sums.spherical_sum(f, 0.0, 8)


class TestBoxSums:
    def test_full_cut_is_identity(self):
        rng = make_rng(2)
        f = fields.random_field(2, 3, rng)
        assert np.allclose(
            sums.square_sum(f, 3, 8), fields.synthesize(f, 8), atol=1e-12
        )

    def test_zero_cut_keeps_mean(self):
        rng = make_rng(3)
        f = fields.random_field(2, 3, rng)
        mean = f.coefficient((0, 0))
        assert np.allclose(sums.square_sum(f, 0, 8), mean, atol=1e-13)

    def test_square_equals_rectangular_on_diagonal(self):
        rng = make_rng(4)
        f = fields.random_field(2, 4, rng)
        assert np.array_equal(
            sums.square_sum(f, 2, 16), sums.rectangular_sum(f, (2, 2), 16)
        )

    def test_rectangular_oracle(self):
        rng = make_rng(5)
        f = fields.random_field(2, 3, rng, real_valued=False)
        limits = (1, 2)
        got = sums.rectangular_sum(f, limits, 8)
        oracle = np.zeros((8, 8), dtype=complex)
        axis = fields.TorusGrid(2, 8).axis()
        for n1 in range(-1, 2):
            for n2 in range(-2, 3):
                c = f.coefficient((n1, n2))
                oracle += c * np.exp(
                    1j * (n1 * axis[:, None] + n2 * axis[None, :])
                )
        assert np.allclose(got, oracle, atol=1e-12)

    def test_generalized_square_evaluates_limits(self):
        rng = make_rng(6)
        f = fields.random_field(2, 6, rng)
        fns = (lambda k: k, lambda k: 2 * k)
        assert np.array_equal(
            sums.generalized_square_sum(f, fns, 2, 16),
            sums.rectangular_sum(f, (2, 4), 16),
        )

    def test_validation(self):
        f = delta_field(2, 2, (0, 0))
        with pytest.raises(RangeError):
            sums.square_sum(f, -1, 8)
        with pytest.raises(DimensionError):
            sums.rectangular_sum(f, (1, 2, 3), 8)
        with pytest.raises(RangeError):
            sums.rectangular_sum(f, (1, -2), 8)


class TestDiagonalSplit:
    def test_mean_mode_goes_first(self):
        f = delta_field(2, 2, (0, 0), value=0.7)
        first, second, recombined = sums.tevzadze_split(f, 0, 8)
        assert np.allclose(first, 0.7, atol=1e-14)
        assert np.all(second == 0.0)
        assert np.allclose(recombined, 0.7, atol=1e-14)

    def test_off_diagonal_mode_goes_second(self):
        f = delta_field(2, 3, (1, 2))
        first, second, recombined = sums.tevzadze_split(f, 2, 8)
        assert np.all(first == 0.0)
        assert np.max(np.abs(second)) > 0.9
        assert np.allclose(recombined, sums.square_sum(f, 2, 8), atol=1e-13)

    def test_matches_brute_force_oracle(self):
        rng = make_rng(7)
        f = fields.random_field(2, 3, rng, real_valued=False)
        k, M = 2, 8
        first, second, _ = sums.tevzadze_split(f, k, M)
        pts = fields.TorusGrid(2, M).points()
        oracle_first = np.zeros(len(pts), dtype=complex)
        oracle_second = np.zeros(len(pts), dtype=complex)
        for n1 in range(-3, 4):
            for n2 in range(-3, 4):
                c = f.coefficient((n1, n2))
                ph = c * np.exp(1j * (n1 * pts[:, 0] + n2 * pts[:, 1]))
                if abs(n1) <= k and abs(n2) <= abs(n1):
                    oracle_first += ph
                elif abs(n2) <= k and abs(n1) < abs(n2):
                    oracle_second += ph
        assert np.allclose(first.ravel(), oracle_first, atol=1e-12)
        assert np.allclose(second.ravel(), oracle_second, atol=1e-12)

    @given(band=st.integers(1, 4), k=st.integers(0, 4), seed_=st.integers(0, 2**16))
    @seed(20260816)
    @settings(max_examples=50, deadline=None)
    def test_recombination_is_square_sum(self, band, k, seed_):
        rng = np.random.default_rng(seed_)
        f = fields.random_field(2, band, rng)
        _, _, recombined = sums.tevzadze_split(f, k, 16)
        gap = np.max(np.abs(recombined - sums.square_sum(f, k, 16)))
        assert gap < 1e-12 * max(1.0, f.norm())

    def test_requires_two_axes(self):
        f = delta_field(1, 2, (1,))
        with pytest.raises(DimensionError):
            sums.tevzadze_split(f, 1, 8)


class TestEllipticSum:
    def test_round_form_matches_spherical(self):
        rng = make_rng(8)
        f = fields.random_field(2, 4, rng)
        coeffs = {(2, 0): 1.0, (0, 2): 1.0}
        assert np.allclose(
            sums.elliptic_sum(f, coeffs, 2, 10.0, 16),
            sums.spherical_sum(f, 10.0, 16),
            atol=1e-13,
        )

    def test_quartic_sublevel_count(self):
        f = delta_field(2, 3, (0, 0))
        coeffs = {(4, 0): 1.0, (0, 4): 1.0}
        proj = sums.elliptic_projection(f, coeffs, 4, 1.5)
        values = sums.evaluate_form(coeffs, 4, fields.mode_grid(2, 3))
        assert int(np.sum(values < 1.5)) == 5

    def test_indefinite_form_rejected(self):
        f = delta_field(2, 2, (0, 0))
        with pytest.raises(NotEllipticError):
            sums.elliptic_sum(f, {(2, 0): 1.0, (0, 2): -1.0}, 2, 5.0, 8)

    def test_odd_degree_rejected(self):
        with pytest.raises(NotEllipticError):
            sums.elliptic_screen({(3, 0): 1.0}, 3, 2)

    def test_screen_accepts_power_of_round_form(self):
        # expanded (x^2 + y^2)^2: positive combination, must pass
        coeffs = {(4, 0): 1.0, (2, 2): 2.0, (0, 4): 1.0}
        assert sums.elliptic_screen(coeffs, 4, 2) > 0.99

    def test_form_validation(self):
        with pytest.raises(ParameterError):
            sums.elliptic_screen({(2, 0): 1.0, (1, 0): 1.0}, 2, 2)
        with pytest.raises(DimensionError):
            sums.elliptic_screen({(2,): 1.0}, 2, 2)
        with pytest.raises(ParameterError):
            sums.elliptic_screen({}, 2, 2)

    def test_unit_sphere_points(self):
        for N in (2, 3, 4, 5):
            pts = sums.unit_sphere_points(N, 500)
            assert pts.shape == (500, N)
            assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
        assert sums.unit_sphere_points(1).shape == (2, 1)


class TestTrajectoryAndMaximal:
    def test_constant_field_trajectory(self):
        f = delta_field(2, 2, (0, 0), value=0.3)
        pts = np.array([[0.1, 0.2], [1.0, -1.0]])
        out = sums.sum_trajectory(f, [1, 2, 5], pts)
        assert np.allclose(out, 0.3, atol=1e-14)

    def test_matches_per_cut_recomputation(self):
        rng = make_rng(9)
        f = fields.random_field(2, 8, rng, real_valued=False)
        pts = fields.TorusGrid(2, 8).points()[:7]
        lams = [1, 2, 3.5, 10, 64, 129]
        out = sums.sum_trajectory(f, lams, pts)
        for row, lam in enumerate(lams):
            oracle = fields.evaluate(sums.spherical_projection(f, lam), pts)
            assert np.allclose(out[row], oracle, atol=1e-10)

    def test_rejects_unsorted(self):
        f = delta_field(2, 1, (0, 0))
        with pytest.raises(ParameterError):
            sums.sum_trajectory(f, [2, 1], np.zeros((1, 2)))

    def test_maximal_zero_field(self):
        f = delta_field(2, 2, (1, 1), value=0.0)
        pts = np.array([[0.0, 0.0]])
        assert np.all(sums.maximal_sum(f, 10, pts) == 0.0)

    def test_maximal_single_mode(self):
        f = delta_field(2, 2, (1, 1), value=2.0)
        pts = np.array([[0.3, -0.7], [0.0, 0.0]])
        # not reached until the cut passes the shell |n|^2 = 2
        assert np.all(sums.maximal_sum(f, 2, pts) == 0.0)
        assert np.allclose(sums.maximal_sum(f, 3, pts), 2.0, atol=1e-14)

    def test_maximal_dominates_fixed_cuts(self):
        rng = make_rng(10)
        f = fields.random_field(2, 5, rng)
        pts = fields.TorusGrid(2, 8).points()[::5]
        best = sums.maximal_sum(f, 30, pts)
        for lam in (1, 4, 17, 30):
            fixed = np.abs(fields.evaluate(sums.spherical_projection(f, lam), pts))
            assert np.all(best >= fixed - 1e-12)

    def test_maximal_validates_cut(self):
        f = delta_field(2, 1, (0, 0))
        with pytest.raises(RangeError):
            sums.maximal_sum(f, 0, np.zeros((1, 2)))
        with pytest.raises(RangeError):
            sums.maximal_sum(f, 2.5, np.zeros((1, 2)))


class TestWindowedConvolution:
    def test_zero_field(self):
        kc = build_kernel_coeffs(delta_window(2, 32), j_max=10, band=4)
        f = delta_field(2, 4, (1, 0), value=0.0)
        pts = np.array([[0.2, 0.1]])
        assert np.all(sums.windowed_convolution(f, kc, 5, pts) == 0.0)

    def test_delta_window_reduces_to_spherical_sum(self):
        kc = build_kernel_coeffs(delta_window(2, 32), j_max=30, band=8)
        rng = make_rng(11)
        f = fields.random_field(2, 8, rng, real_valued=False)
        pts = fields.TorusGrid(2, 8).points()[::3]
        for j in (1, 7, 19, 30):
            got = sums.windowed_convolution(f, kc, j, pts)
            oracle = fields.evaluate(sums.spherical_projection(f, j), pts)
            assert np.allclose(got, oracle, atol=1e-12)

    def test_support_violation_rejected(self):
        window = build_window(WindowSpec(R=1.0, r=0.5, dimension=2), 64)
        kc = build_kernel_coeffs(window, j_max=10, band=6)
        rng = make_rng(12)
        f = fields.random_field(2, 6, rng)  # generic field fills the ball
        with pytest.raises(PreconditionError):
            sums.windowed_convolution(f, kc, 5, np.zeros((1, 2)))

    def test_matches_spherical_sum_on_probe_ball(self):
        # field quiet on {|x| < R}: the windowed kernel must reproduce the
        # raw partial sum at every |x| <= r
        window = build_window(WindowSpec(R=1.0, r=0.5, dimension=2), 512)
        kc = build_kernel_coeffs(window, j_max=40, band=12)
        f = fields.random_annulus_field(2, 6, 1.0, make_rng(13))
        grid = fields.TorusGrid(2, 32)
        pts = grid.points()[grid.radius().ravel() <= 0.5]
        for j in (5, 20, 37):
            got = sums.windowed_convolution(f, kc, j, pts)
            oracle = fields.evaluate(sums.spherical_projection(f, j), pts)
            assert np.max(np.abs(got - oracle)) < 1e-6 * f.norm()

    def test_table_evaluations_consistent(self):
        kc = build_kernel_coeffs(delta_window(2, 32), j_max=12, band=5)
        rng = make_rng(14)
        f = fields.random_field(2, 5, rng)
        pts = np.array([[0.0, 0.0], [0.4, -0.9], [2.0, 2.0]])
        ball_vals, shell_vals = sums.kernel_field_table(kc, f, pts)
        assert ball_vals.shape == (14, 3) and shell_vals.shape == (13, 3)
        for j in (0, 3, 13):
            assert np.allclose(
                ball_vals[j], sums.windowed_convolution(f, kc, j, pts), atol=1e-12
            )
        assert np.allclose(
            shell_vals, ball_vals[1:] - ball_vals[:-1], atol=1e-10
        )

    def test_square_expansion_identity(self):
        # [ball_Q]^2 telescopes into shell squares plus cross terms
        window = build_window(WindowSpec(R=1.0, r=0.5, dimension=2), 128)
        kc = build_kernel_coeffs(window, j_max=25, band=8)
        f = fields.random_annulus_field(2, 6, 1.0, make_rng(15))
        grid = fields.TorusGrid(2, 32)
        pts = grid.points()[grid.radius().ravel() <= 0.5]
        ball_vals, shell_vals = sums.kernel_field_table(kc, f, pts)
        assert np.isrealobj(ball_vals)
        for q in (1, 10, 26):
            lhs = ball_vals[q] ** 2
            rhs = np.sum(shell_vals[:q] ** 2, axis=0) + 2.0 * np.sum(
                shell_vals[:q] * ball_vals[:q], axis=0
            )
            scale = max(float(np.max(np.abs(lhs))), 1e-30)
            assert np.max(np.abs(lhs - rhs)) < 1e-8 * scale

    def test_band_coverage_required(self):
        kc = build_kernel_coeffs(delta_window(2, 32), j_max=5, band=3)
        f = delta_field(2, 4, (0, 0))
        with pytest.raises(RangeError):
            sums.windowed_convolution(f, kc, 2, np.zeros((1, 2)))


class TestPartialSumRequest:
    def test_dispatch_matches_direct_calls(self):
        rng = make_rng(16)
        f = fields.random_field(2, 3, rng)
        cases = [
            (sums.PartialSumRequest("spherical", {"lam": 5.0}, 8),
             sums.spherical_sum(f, 5.0, 8)),
            (sums.PartialSumRequest("square", {"k": 2}, 8),
             sums.square_sum(f, 2, 8)),
            (sums.PartialSumRequest("rectangular", {"limits": (1, 3)}, 8),
             sums.rectangular_sum(f, (1, 3), 8)),
            (sums.PartialSumRequest(
                "elliptic",
                {"coeffs": {(2, 0): 1.0, (0, 2): 1.0}, "degree": 2, "lam": 5.0}, 8),
             sums.spherical_sum(f, 5.0, 8)),
        ]
        for request, expected in cases:
            assert np.allclose(sums.partial_sum(f, request), expected, atol=1e-13)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            sums.PartialSumRequest("cubic", {}, 8)

    def test_missing_payload_key(self):
        f = delta_field(2, 1, (0, 0))
        with pytest.raises(ParameterError):
            sums.partial_sum(f, sums.PartialSumRequest("spherical", {}, 8))
