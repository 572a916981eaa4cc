"""Release gate: one test per documented acceptance criterion.

Each test prints exactly one ``ACCEPTANCE <criterion>: PASS/FAIL`` line
(run with ``pytest -s`` to see them on success) and fails loudly when its
stated tolerance is missed.  Criteria marked as verification verdicts run
the campaign once per module at the default scan geometries; exactness
criteria recompute their identities directly through the public API with
independent oracles (generic-order Bessel quadrature for the ball kernel,
plain synthesis for the band limit, the frequency-side mean against the
real-space integral for the order-zero consistency).

The plotting companion package has its own test suite for its chart and
schema criteria; the one cross-cutting requirement checked here is that
this package stands alone without it.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate, special

import sphersum.verify as vf
from sphersum.fields import random_field, synthesize
from sphersum.integral import (
    RieszSpec,
    ball_kernel,
    gaussian_annulus_field,
    partial_integral,
    riesz_mean,
    threshold_probe,
)
from sphersum.kernels import build_kernel_coeffs
from sphersum.sums import spherical_sum
from sphersum.windows import WindowSpec, build_window

STABILITY_LEMMAS = ("coef2", "bigl", "Q", "Lsmall", "LBig", "Sbigl", "W")


def _record(criterion: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    assert passed, f"{criterion}: {detail}"


@pytest.fixture(scope="module")
def campaign():
    t0 = time.perf_counter()
    reports = {report.lemma: report for report in vf.verify_all()}
    reports["_elapsed"] = time.perf_counter() - t0
    return reports


class TestExactIdentities:
    def test_telescoping_identity(self):
        scan = vf.DEFAULT_SCAN
        window = build_window(WindowSpec(*scan.window, scan.N), scan.M)
        kc = build_kernel_coeffs(window, scan.J, scan.n_max)
        gap = float(np.max(np.abs(kc.ball[1:] - kc.ball[:-1] - kc.shell)))
        _record(
            "exact/telescoping",
            gap < 1e-12,
            f"max |ball[j+1]-ball[j]-shell[j]| = {gap:.3e} over {kc.shell.shape[0]} shells",
        )

    def test_window_square_identity(self, campaign):
        report = campaign["W2-identity"]
        worst = report.details["max_relative_residual"]
        ok = report.passed and worst < 1e-8 and report.details["majorant_holds"]
        _record(
            "exact/square-identity",
            ok,
            f"max relative residual {worst:.3e} over {report.details['trials']} trials",
        )

    def test_recombination_identity(self, campaign):
        report = campaign["tevzadze"]
        worst = report.details["max_relative_residual"]
        ok = report.passed and report.details["trials"] == 50 and worst <= 1e-12
        _record(
            "exact/recombination",
            ok,
            f"max relative residual {worst:.3e} over {report.details['trials']} random fields",
        )

    def test_band_limit_exactness(self):
        worst = 0.0
        for N, band, M in ((2, 8, 64), (3, 4, 32)):
            rng = np.random.default_rng(5)
            field = random_field(N, band, rng)
            direct = synthesize(field, M)
            beyond = N * band * band + 1
            via_sum = spherical_sum(field, beyond, M)
            scale = float(np.max(np.abs(direct)))
            worst = max(worst, float(np.max(np.abs(via_sum - direct))) / scale)
        _record(
            "exact/band-limit",
            worst <= 1e-10,
            f"max relative gap {worst:.3e} for cuts beyond the band (N = 2, 3)",
        )

    def test_partition_exhaustive(self):
        t0 = time.perf_counter()
        checked = 0
        violations = 0
        for N in (2, 3):
            scan = vf.ScanRange(N=N, n_max=30, k_max=15)
            card = vf.verify_lemma("cardinality", scan)
            floor = vf.verify_lemma("min-norm", scan)
            assert card.passed and floor.passed, (card.verdict, floor.verdict)
            checked += card.details["partitions_checked"]
            violations += len(card.details["violations"]) + len(floor.details["violations"])
        elapsed = time.perf_counter() - t0
        _record(
            "exact/partition-exhaustive",
            violations == 0 and elapsed < 300.0,
            f"{checked} partitions (N = 2, 3; k <= 15; |n| <= 30), "
            f"{violations} violations, {elapsed:.0f}s",
        )


class TestLemmaStability:
    def test_constants_stable_under_doubling(self, campaign):
        worst = 0.0
        ok = True
        for lemma in STABILITY_LEMMAS:
            report = campaign[lemma]
            ok = ok and report.passed and report.scan == vf.DEFAULT_SCAN
            for growth in report.growth_ratios.values():
                worst = max(worst, growth)
        ok = ok and worst < 1.5 and campaign["_elapsed"] < 1800.0
        _record(
            "stability/constant-families",
            ok,
            f"worst constant growth {worst:.3f} across {len(STABILITY_LEMMAS)} "
            f"lemmas, campaign {campaign['_elapsed']:.0f}s",
        )

    def test_chain_bound_every_trial(self, campaign):
        report = campaign["sum-bound"]
        rows = report.details["trials"]
        ok = report.passed and all(row["holds"] for row in rows)
        worst = max(row["ratio"] for row in rows)
        _record(
            "stability/chain-bound",
            ok,
            f"bound holds on all {len(rows)} trials, worst lhs/rhs = {worst:.3e}",
        )


class TestMaximalLocalization:
    def test_maximal_ratio_growth(self, campaign):
        report = campaign["MAX1-ratio"]
        scan = report.scan
        bands = report.details["bands"]
        geometry_ok = (
            scan.N == 2
            and scan.n_max == 16
            and scan.window == (1.0, 0.5)
            and all(row["trials"] == 100 for row in bands)
        )
        growth = report.growth_ratios["max"]
        _record(
            "localization/maximal-ratio-growth",
            report.passed and geometry_ok and growth < 1.2,
            f"max-ratio growth {growth:.3f} over 100 seeded trials, "
            f"band {bands[0]['band']} -> {bands[1]['band']}",
        )

    def test_inner_ball_trend(self, campaign):
        report = campaign["localization-series"]
        trend = report.details["smooth_trend"]["max_on_probe"]
        monotone = all(b <= a * 1.10 for a, b in zip(trend, trend[1:]))
        ok = report.passed and monotone and report.details["zero_field_max"] == 0.0
        _record(
            "localization/inner-ball-trend",
            ok,
            "per-cut inner-ball max non-increasing within 10% over "
            f"{len(trend)} cuts (head {trend[0]:.3e}, tail {trend[-1]:.3e})",
        )


class TestIntegralSide:
    def test_ball_kernel_against_quadrature(self):
        worst = 0.0
        for N in (2, 3):
            for lam in (1.0, 5.0, 20.0):
                for r in (0.1, 1.0, 3.0):
                    def integrand(t):
                        surface = (2 * math.pi) ** (N / 2) * (t * r) ** (1 - N / 2)
                        return t ** (N - 1) * surface * special.jv(N / 2 - 1, t * r)

                    value, _ = integrate.quad(
                        integrand, 0.0, lam, limit=400, epsabs=1e-12, epsrel=1e-12
                    )
                    oracle = (2 * math.pi) ** (-N) * value
                    worst = max(worst, abs(float(ball_kernel(r, lam, N)) - oracle))
        _record(
            "integral/ball-kernel",
            worst < 1e-6,
            f"worst |closed form - quadrature| = {worst:.3e} over 18 cases",
        )

    def test_transform_stability(self, campaign):
        ft, horizon = campaign["ft"], campaign["INT"]
        growths = list(ft.growth_ratios.values()) + list(horizon.growth_ratios.values())
        ok = ft.passed and horizon.passed and all(g < 1.5 for g in growths)
        _record(
            "integral/transform-stability",
            ok,
            f"decay and horizon constants stable, worst growth {max(growths):.3f}",
        )

    def test_order_zero_matches_partial_integral(self):
        field = gaussian_annulus_field(2, 1.0, 2.0, 0.02)
        points = np.array([[0.3, 0.2], [0.0, 0.0], [-0.4, 0.1]])
        plain = partial_integral(field, 8.0, points)
        worst = 0.0
        for i, x in enumerate(points):
            mean = riesz_mean(field, 0.0, 8.0, x)
            worst = max(worst, abs(mean - plain[i]) / abs(plain[i]))
        _record(
            "integral/order-zero-consistency",
            worst < 1e-6,
            f"worst relative gap {worst:.3e} at 3 probe points",
        )

    def test_threshold_classifications(self, campaign):
        lambdas = np.geomspace(4.0, 512.0, 36)
        above = threshold_probe(RieszSpec(order=2.0, sobolev=1.0, alpha=(0, 0)), (0.5, 0.0), lambdas)
        below = threshold_probe(RieszSpec(order=0.0, sobolev=1.0, alpha=(0, 0)), (0.5, 0.0), lambdas)
        ok = (
            above.classification == "decaying"
            and below.classification != "decaying"
            and campaign["riesz-threshold"].passed
        )
        _record(
            "integral/threshold-classes",
            ok,
            f"order 2 {above.classification} (slope {above.slope:+.2f}), "
            f"order 0 {below.classification} (slope {below.slope:+.2f})",
        )


class TestStandalone:
    def test_primary_runs_without_plotting_package(self):
        src = Path(vf.__file__).parent
        referencing = [
            path.name
            for path in sorted(src.glob("*.py"))
            if "frontend" in path.read_text(encoding="utf-8")
        ]
        _record(
            "standalone/no-secondary-dependency",
            referencing == [],
            "computation package never references the plotting package"
            + (f"; offenders: {referencing}" if referencing else ""),
        )
