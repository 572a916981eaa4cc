"""Spherical partial integrals on Euclidean space.

The continuous companion of the torus machinery: compactly supported fields
sampled on uniform grids, the closed-form ball kernel, spherical partial
integrals evaluated by two independent routes (space-side convolution with
the closed-form kernel, and frequency-side quadrature over the ball), the
windowed kernel and its transform with the decay and energy scans used by
the localization argument, Riesz means of both fields and delta-derivative
distributions with trend probes, and elliptic-polynomial partial integrals.

Conventions: the forward transform is
f_hat(xi) = (2 pi)^{-N/2} integral f(x) e^{-i x.xi} dx, so the partial
integral over the ball of radius lambda is
(2 pi)^{-N/2} integral_{|xi| < lambda} f_hat(xi) e^{i x.xi} d xi, with the
derivative-of-delta transform (2 pi)^{-N/2} (i xi)^alpha.  Radial integrals
use the unit-sphere wave factor from the Bessel module; every closed form
is validated against direct quadrature in the tests.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.interpolate
import scipy.special

from . import lattice
from .bessel import ball_fourier_integral, sphere_wave_integral
from .errors import (
    DimensionError,
    ParameterError,
    PreconditionError,
    RangeError,
    ResolutionError,
    ResourceError,
)
from .sums import elliptic_screen, evaluate_form
from .windows import TWO_PI, smooth_step

logger = logging.getLogger(__name__)

# space-side rule: the ball kernel oscillates with wavelength 2 pi / lambda,
# so the sampling step must satisfy lambda * h <= this bound
OSCILLATION_GATE = 0.5

_SUPPORTED_ANGULAR = (1, 2, 3)


def _as_points(points, N: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != N:
        raise DimensionError(
            f"evaluation points must have shape (count, {N}), got {pts.shape}"
        )
    return pts


# ---------------------------------------------------------------------------
# compact fields on uniform grids


@dataclass(frozen=True)
class CompactField:
    """Samples of a function supported in the annulus inner <= |x| <= outer.

    The grid is the uniform tensor grid of the given spacing covering the
    cube [-outer, outer]^N, with nodes symmetric about the origin; samples
    must vanish identically at every node outside the annulus.
    """

    dimension: int
    inner_radius: float
    outer_radius: float
    spacing: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.dimension}")
        if not 0.0 <= self.inner_radius < self.outer_radius:
            raise ParameterError(
                "need 0 <= inner radius < outer radius, got "
                f"[{self.inner_radius}, {self.outer_radius}]"
            )
        if not math.isfinite(self.outer_radius):
            raise ParameterError("outer support radius must be finite")
        if self.spacing <= 0.0:
            raise ParameterError(f"grid spacing must be positive, got {self.spacing}")
        steps = 2.0 * self.outer_radius / self.spacing
        n = int(round(steps)) + 1
        if abs(steps - round(steps)) > 1e-9:
            raise ParameterError(
                f"spacing {self.spacing} does not tile [-A, A] with A = "
                f"{self.outer_radius}"
            )
        samples = np.asarray(self.samples)
        if samples.shape != (n,) * self.dimension:
            raise ParameterError(
                f"samples must have shape {(n,) * self.dimension}, got {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ParameterError("samples must be finite")
        radii = np.sqrt(sum(m**2 for m in np.meshgrid(*([self.axis()] * self.dimension), indexing="ij")))
        outside = (radii < self.inner_radius) | (radii > self.outer_radius)
        if np.any(samples[outside] != 0):
            worst = float(np.max(np.abs(samples[outside])))
            raise ParameterError(
                f"samples must vanish outside the annulus; found magnitude {worst:.3e}"
            )
        object.__setattr__(self, "samples", samples)
        samples.setflags(write=False)

    def axis(self) -> np.ndarray:
        """Node coordinates along one axis, symmetric about 0."""
        n = int(round(2.0 * self.outer_radius / self.spacing)) + 1
        return (np.arange(n) - (n - 1) / 2.0) * self.spacing

    def grid_points(self) -> np.ndarray:
        """All nodes as an (count, N) array in C-order of the sample array."""
        mesh = np.meshgrid(*([self.axis()] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def cell_weight(self) -> float:
        return self.spacing**self.dimension

    def norm_sq(self) -> float:
        """Quadrature L2 norm squared."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.cell_weight())

    @classmethod
    def from_profile(
        cls,
        N: int,
        inner: float,
        outer: float,
        spacing: float,
        fn,
    ) -> "CompactField":
        """Sample fn on the grid, hard-zeroing nodes outside the annulus."""
        steps = 2.0 * outer / spacing
        n = int(round(steps)) + 1
        axis = (np.arange(n) - (n - 1) / 2.0) * spacing
        mesh = np.meshgrid(*([axis] * N), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        values = np.asarray(fn(pts)).reshape((n,) * N)
        radii = np.sqrt(sum(m**2 for m in mesh))
        values = np.where((radii >= inner) & (radii <= outer), values, 0.0)
        return cls(N, inner, outer, spacing, values)


def annulus_bump_profile(inner: float, outer: float, ramp_fraction: float = 0.25):
    """Smooth radial cutoff: 0 at the annulus edges, 1 on the middle band.

    Returns a vectorized callable of the radius.  The ramps are smooth-step
    transitions over ramp_fraction of the annulus width at each end, so the
    profile is infinitely differentiable with compact support.
    """
    if not 0.0 < ramp_fraction <= 0.5:
        raise ParameterError(f"ramp fraction must be in (0, 1/2], got {ramp_fraction}")
    width = (outer - inner) * ramp_fraction

    def profile(rho):
        rho = np.asarray(rho, dtype=float)
        up = smooth_step(rho, inner, inner + width)
        down = 1.0 - smooth_step(rho, outer - width, outer)
        return up * down

    return profile


def gaussian_annulus_field(
    N: int,
    inner: float,
    outer: float,
    spacing: float,
    center: np.ndarray | None = None,
    sigma: float | None = None,
) -> CompactField:
    """Gaussian blob masked by a smooth annulus cutoff (the standard smoke
    field: compactly supported, smooth, and deliberately not radial)."""
    cut = annulus_bump_profile(inner, outer)
    if center is None:
        center = np.zeros(N)
        center[0] = 0.5 * (inner + outer)
    center = np.asarray(center, dtype=float)
    if center.shape != (N,):
        raise DimensionError(f"center must have shape ({N},), got {center.shape}")
    if sigma is None:
        sigma = 0.3 * (outer - inner)
    if sigma <= 0.0:
        raise ParameterError(f"width must be positive, got {sigma}")

    def fn(pts):
        rho = np.linalg.norm(pts, axis=1)
        gauss = np.exp(-np.sum((pts - center) ** 2, axis=1) / (2.0 * sigma**2))
        return cut(rho) * gauss

    return CompactField.from_profile(N, inner, outer, spacing, fn)


def field_transform(field: CompactField, xi_points, chunk: int = 2048) -> np.ndarray:
    """Fourier transform samples (2 pi)^{-N/2} sum f(y) e^{-i y.xi} h^N."""
    xi = _as_points(xi_points, field.dimension)
    pts = field.grid_points()
    vals = field.samples.ravel()
    keep = vals != 0
    pts, vals = pts[keep], vals[keep]
    scale = field.cell_weight() * TWO_PI ** (-field.dimension / 2.0)
    out = np.empty(xi.shape[0], dtype=complex)
    for start in range(0, xi.shape[0], chunk):
        block = xi[start : start + chunk]
        phases = np.exp(-1j * (block @ pts.T))
        out[start : start + chunk] = phases @ vals
    return out * scale


# ---------------------------------------------------------------------------
# ball kernel and partial integrals


def ball_kernel(x_norm, lam: float, N: int):
    """(2 pi)^{-N} integral over {|xi| < lambda} of e^{i x.xi} d xi.

    Real and radial; the removable singularity at x = 0 is the ball volume
    over (2 pi)^N.  The closed form is a Bessel function of lambda |x|.
    """
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    return TWO_PI ** (-N) * ball_fourier_integral(x_norm, lam, N)


def partial_integral(field: CompactField, lam: float, points) -> np.ndarray:
    """Spherical partial integral by space-side convolution.

    E f(x) = sum_y kernel(|x - y|, lambda) f(y) h^N with the closed-form
    kernel.  The kernel oscillates at wavelength 2 pi / lambda, so the rule
    requires lambda * spacing <= 0.5; evaluation points must lie inside the
    grid hull [-A, A]^N.
    """
    N = field.dimension
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    if lam * field.spacing > OSCILLATION_GATE:
        raise ResolutionError(
            f"lambda * spacing = {lam * field.spacing:.3g} exceeds "
            f"{OSCILLATION_GATE}; the kernel oscillation is unresolved"
        )
    pts = _as_points(points, N)
    if np.any(np.abs(pts) > field.outer_radius + 1e-12):
        raise RangeError(
            f"evaluation points must lie within the grid hull "
            f"[-{field.outer_radius}, {field.outer_radius}]^{N}"
        )
    grid = field.grid_points()
    vals = field.samples.ravel()
    keep = vals != 0
    grid, vals = grid[keep], vals[keep]
    out = np.empty(pts.shape[0], dtype=complex)
    chunk = max(1, 4_000_000 // max(1, grid.shape[0]))
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        dist = np.linalg.norm(block[:, None, :] - grid[None, :, :], axis=-1)
        kern = ball_fourier_integral(dist.ravel(), lam, N).reshape(dist.shape)
        out[start : start + chunk] = kern @ vals
    return out * (field.cell_weight() * TWO_PI ** (-N))


def windowed_partial_integral(
    field: CompactField, lam: float, points, window: KernelWindow
) -> np.ndarray:
    """Spherical partial integral with the kernel multiplied by the cutoff.

    Same convolution as partial_integral, with the kernel at displacement
    d replaced by kernel(d) * window.profile(d).  When the data vanishes
    on {|x| < clear_radius}, every displacement reaching a probe point
    |x| <= probe_radius lands on the window's plateau (provided the
    plateau covers probe_radius plus the data's outer radius), so the
    window is invisible there: this function and partial_integral agree
    on the probe ball, which is the faithfulness property the
    localization experiments certify.
    """
    N = field.dimension
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    if lam * field.spacing > OSCILLATION_GATE:
        raise ResolutionError(
            f"lambda * spacing = {lam * field.spacing:.3g} exceeds "
            f"{OSCILLATION_GATE}; the kernel oscillation is unresolved"
        )
    pts = _as_points(points, N)
    if np.any(np.abs(pts) > field.outer_radius + 1e-12):
        raise RangeError(
            f"evaluation points must lie within the grid hull "
            f"[-{field.outer_radius}, {field.outer_radius}]^{N}"
        )
    grid = field.grid_points()
    vals = field.samples.ravel()
    keep = vals != 0
    grid, vals = grid[keep], vals[keep]
    out = np.empty(pts.shape[0], dtype=complex)
    chunk = max(1, 4_000_000 // max(1, grid.shape[0]))
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        dist = np.linalg.norm(block[:, None, :] - grid[None, :, :], axis=-1)
        kern = ball_fourier_integral(dist.ravel(), lam, N) * window.profile(
            dist.ravel()
        )
        out[start : start + chunk] = kern.reshape(dist.shape) @ vals
    return out * (field.cell_weight() * TWO_PI ** (-N))


def _angular_rule(N: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and weights integrating over the unit sphere in R^N."""
    if N == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if N == 2:
        ang = 2.0 * math.pi * np.arange(count) / count
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
        return pts, np.full(count, 2.0 * math.pi / count)
    if N == 3:
        nodes, weights = np.polynomial.legendre.leggauss(count)
        azim = 2.0 * math.pi * np.arange(2 * count) / (2 * count)
        sin_polar = np.sqrt(1.0 - nodes**2)
        pts = np.stack(
            [
                np.outer(sin_polar, np.cos(azim)).ravel(),
                np.outer(sin_polar, np.sin(azim)).ravel(),
                np.repeat(nodes, 2 * count),
            ],
            axis=-1,
        )
        w = np.repeat(weights, 2 * count) * (2.0 * math.pi / (2 * count))
        return pts, w
    raise DimensionError(
        f"angular quadrature is implemented for N in {_SUPPORTED_ANGULAR}, got {N}"
    )


def _radial_rule(lam: float, order: float, N: int, count: int):
    """Nodes and weights for integral_0^lam (1 - t^2/lam^2)^s t^{N-1} A(t) dt.

    Substituting w = (t / lam)^2 turns the weight into a Jacobi weight
    (1 - w)^s w^{N/2 - 1}, exact for the endpoint behavior at both ends, so
    the rule converges spectrally for smooth even A.
    """
    if order <= -1.0:
        raise ParameterError(f"multiplier order must be > -1, got {order}")
    nodes, weights = scipy.special.roots_jacobi(count, order, N / 2.0 - 1.0)
    t = lam * np.sqrt((nodes + 1.0) / 2.0)
    w = (lam**N / 2.0) * 2.0 ** (-order - N / 2.0) * weights
    return t, w


def partial_integral_frequency(
    field: CompactField,
    lam: float,
    points,
    radial_count: int = 96,
    angular_count: int = 256,
) -> np.ndarray:
    """Spherical partial integral by frequency-side polar quadrature.

    (2 pi)^{-N/2} integral over {|xi| < lambda} of f_hat(xi) e^{i x.xi},
    with a Gauss-Jacobi radial rule and a trapezoid (or product Gauss)
    angular rule.  Independent of the space-side route; the two must agree,
    which is the standing cross-validation of both.
    """
    N = field.dimension
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    pts = _as_points(points, N)
    t_nodes, t_weights = _radial_rule(lam, 0.0, N, radial_count)
    directions, ang_weights = _angular_rule(N, angular_count)
    xi = t_nodes[:, None, None] * directions[None, :, :]
    xi_flat = xi.reshape(-1, N)
    fhat = field_transform(field, xi_flat)
    weights = (t_weights[:, None] * ang_weights[None, :]).ravel()
    phases = np.exp(1j * (pts @ xi_flat.T))
    return TWO_PI ** (-N / 2.0) * (phases @ (weights * fhat))


# ---------------------------------------------------------------------------
# windowed kernel and its transform


@dataclass(frozen=True)
class KernelWindow:
    """Radial cutoff for the convolution kernel on the Euclidean side.

    Vanishes for |x| below one third of (R - r), equals one from two thirds
    of (R - r) out to twice the field's outer support radius, then rolls
    off smoothly to zero: smooth, radial, compactly supported.
    """

    probe_radius: float  # r: estimates are made on {|x| <= r}
    clear_radius: float  # R: the data vanishes on {|x| < R}
    support_radius: float  # A: the data is supported inside {|x| <= A}
    rolloff: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.probe_radius < self.clear_radius:
            raise ParameterError(
                f"need 0 < probe radius < clear radius, got "
                f"{self.probe_radius}, {self.clear_radius}"
            )
        if 2.0 * self.support_radius <= self.ramp_end:
            raise ParameterError(
                "outer support must exceed the window ramp: need "
                f"2A > {self.ramp_end}, got A = {self.support_radius}"
            )
        if self.rolloff <= 0.0:
            raise ParameterError(f"rolloff must be positive, got {self.rolloff}")

    @property
    def ramp_start(self) -> float:
        return (self.clear_radius - self.probe_radius) / 3.0

    @property
    def ramp_end(self) -> float:
        return 2.0 * (self.clear_radius - self.probe_radius) / 3.0

    @property
    def plateau_end(self) -> float:
        return 2.0 * self.support_radius

    @property
    def support_end(self) -> float:
        return self.plateau_end + self.rolloff

    def profile(self, rho):
        """Window value as a function of the radius."""
        rho = np.asarray(rho, dtype=float)
        up = smooth_step(rho, self.ramp_start, self.ramp_end)
        down = 1.0 - smooth_step(rho, self.plateau_end, self.support_end)
        return up * down


# largest |eta| + lambda the cached radial transform table will cover
_TABLE_LIMIT = 512.0
_TABLE_STEP = 0.02


@functools.lru_cache(maxsize=8)
def _window_transform_table(window: KernelWindow, N: int, u_max: float):
    """Dense cubic-spline table of the radial profile of the window's
    Fourier transform, chi_hat(|xi| = u) for u in [0, u_max]."""
    U = window.support_end
    count = max(2048, 16 * int(U * u_max / (2.0 * math.pi) + 1.0))
    t = np.linspace(0.0, U, count + 1)
    dt = t[1] - t[0]
    chi = window.profile(t) * t ** (N - 1)
    u = np.arange(0.0, u_max + _TABLE_STEP, _TABLE_STEP)
    # trapezoid in t is superalgebraically accurate: the integrand vanishes
    # to all orders at both endpoints; chunked over u to bound memory
    values = np.empty(u.size)
    block = max(1, 8_000_000 // (t.size + 1))
    for start in range(0, u.size, block):
        args = np.outer(t, u[start : start + block])
        phases = sphere_wave_integral(args.ravel(), N).reshape(args.shape)
        values[start : start + block] = chi @ phases
    values *= TWO_PI ** (-N / 2.0) * dt
    return scipy.interpolate.CubicSpline(u, values)


def window_transform_profile(window: KernelWindow, N: int, u):
    """chi_hat at radius u (the transform is radial and real)."""
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(arr < 0.0):
        raise ParameterError("radii must be >= 0")
    top = float(arr.max()) if arr.size else 0.0
    u_max = 64.0
    while u_max < top:
        u_max *= 2.0
    if u_max > _TABLE_LIMIT:
        raise ResourceError(
            f"transform table would need radius {u_max}, beyond the budget "
            f"{_TABLE_LIMIT}"
        )
    spline = _window_transform_table(window, N, u_max)
    out = spline(arr)
    return out if np.ndim(u) else float(out[0])


def windowed_kernel_transform(
    lam: float,
    eta,
    window: KernelWindow,
    radial_count: int | None = None,
    angular_count: int | None = None,
) -> complex:
    """Transform of the windowed ball kernel at frequency eta.

    Computed as (2 pi)^{-N} integral of chi_hat over the ball of radius
    lambda centered at eta, reduced to polar coordinates about eta (the
    transform is radial, so the result depends on |eta| only).  Node counts
    scale with the phase reach lambda times the window support so the
    oscillation of chi_hat stays resolved; explicit counts override for
    convergence studies.  Supports the decay check
    |value| <= C_l (1 + ||eta| - lambda|)^{-l}.
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    N = eta.shape[0]
    if eta.ndim != 1:
        raise DimensionError("eta must be a single frequency point")
    if lam < 0.0:
        raise RangeError(f"radius must be >= 0, got {lam}")
    if lam == 0.0:
        return 0.0 + 0.0j
    rho = float(np.linalg.norm(eta))
    if rho + lam > _TABLE_LIMIT:
        raise ResourceError(
            f"|eta| + lambda = {rho + lam:.1f} exceeds the table budget "
            f"{_TABLE_LIMIT}"
        )
    U = window.support_end
    # chi_hat oscillates with angular rate up to the window support radius:
    # the radial path has phase reach lam * U, the angular path 4 min(rho,
    # lam) * U, and the rules need a few nodes per period plus a floor
    if radial_count is None:
        radial_count = 64 + int(0.75 * lam * U)
    if angular_count is None:
        angular_count = 128 + int(1.5 * min(rho, lam) * U)
    if radial_count * angular_count > 16_000_000:
        raise ResourceError(
            f"ball average needs {radial_count} x {angular_count} nodes, "
            "beyond the quadrature budget"
        )
    u_max = 64.0
    while u_max < rho + lam:
        u_max *= 2.0
    spline = _window_transform_table(window, N, u_max)

    if N == 1:
        # two signed intervals (eta - lam, eta + lam) folded onto radii
        nodes, weights = np.polynomial.legendre.leggauss(radial_count)
        total = 0.0
        lo, hi = rho - lam, rho + lam
        for a, b in ((lo, min(hi, 0.0)), (max(lo, 0.0), hi)):
            if b <= a:
                continue
            t = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            total += 0.5 * (b - a) * float(np.sum(weights * spline(np.abs(t))))
        return complex(TWO_PI ** (-N) * total)

    s_nodes, s_weights = _radial_rule(lam, 0.0, N, radial_count)
    if N == 2:
        ang = 2.0 * math.pi * np.arange(angular_count) / angular_count
        cosang = np.cos(ang)
        radii = np.sqrt(
            np.maximum(
                rho**2 + s_nodes[:, None] ** 2
                + 2.0 * rho * s_nodes[:, None] * cosang[None, :],
                0.0,
            )
        )
        inner = spline(radii).sum(axis=1) * (2.0 * math.pi / angular_count)
        return complex(TWO_PI ** (-N) * float(np.sum(s_weights * inner)))
    if N == 3:
        c_nodes, c_weights = np.polynomial.legendre.leggauss(
            max(64, angular_count // 2)
        )
        radii = np.sqrt(
            np.maximum(
                rho**2 + s_nodes[:, None] ** 2
                + 2.0 * rho * s_nodes[:, None] * c_nodes[None, :],
                0.0,
            )
        )
        inner = (spline(radii) * c_weights[None, :]).sum(axis=1) * (2.0 * math.pi)
        return complex(TWO_PI ** (-N) * float(np.sum(s_weights * inner)))
    raise DimensionError(
        f"windowed transform is implemented for N in {_SUPPORTED_ANGULAR}, got {N}"
    )


# step used for the central difference d/d lambda of the windowed transform
LAMBDA_DERIVATIVE_STEP = 1e-3


def _transform_or_derivative(lam, eta, window, j):
    if j == 0:
        return windowed_kernel_transform(lam, eta, window)
    h = LAMBDA_DERIVATIVE_STEP
    lo = windowed_kernel_transform(max(lam - h, 0.0), eta, window)
    hi = windowed_kernel_transform(lam + h, eta, window)
    span = lam + h - max(lam - h, 0.0)
    return (hi - lo) / span


def lambda_energy(
    eta,
    window: KernelWindow,
    Lambda_max: float,
    j: int = 0,
    step: float = 0.25,
) -> float:
    """integral_0^Lambda |d^j/d lambda^j of the windowed transform|^2.

    Composite trapezoid on a uniform lambda grid; the derivative is a
    central difference with the module-level step.  Saturates in Lambda
    because the transform decays faster than any power away from the
    resonance |eta| = lambda.
    """
    if j not in (0, 1):
        raise ParameterError(f"derivative flag must be 0 or 1, got {j}")
    if Lambda_max <= 0.0:
        raise RangeError(f"energy horizon must be positive, got {Lambda_max}")
    count = max(2, int(round(Lambda_max / step)))
    lams = np.linspace(0.0, Lambda_max, count + 1)
    values = np.empty(lams.size)
    for i, lam in enumerate(lams):
        values[i] = abs(_transform_or_derivative(float(lam), eta, window, j)) ** 2
    return float(np.trapezoid(values, lams))


# ---------------------------------------------------------------------------
# Riesz means


@dataclass(frozen=True)
class RieszSpec:
    """Order, Sobolev index, and target derivative for delta-type probes."""

    order: float
    sobolev: float
    alpha: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.order < 0.0:
            raise ParameterError(f"mean order must be >= 0, got {self.order}")
        if any(not isinstance(a, int) or a < 0 for a in self.alpha):
            raise ParameterError(f"derivative multi-index {self.alpha} invalid")

    def membership_threshold(self, N: int) -> float:
        """The derivative of the point mass lies in the Sobolev space of
        index -l precisely when l exceeds N/2 + |alpha|; recorded so probes
        can report how far the configured index clears it."""
        return N / 2.0 + sum(self.alpha)


@dataclass(frozen=True)
class MultiplierProfile:
    """Tabulated radial multiplier (1 - t^2/lambda^2)^s on [0, lambda)."""

    lam: float
    order: float
    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.lam <= 0.0:
            raise RangeError(f"radius must be positive, got {self.lam}")
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.shape != values.shape or radii.ndim != 1 or radii.size < 2:
            raise ParameterError("radii and values must be equal-length vectors")
        if radii[0] != 0.0 or np.any(radii >= self.lam) or np.any(np.diff(radii) <= 0):
            raise ParameterError("radii must ascend from 0 and stay below lambda")
        expected = (1.0 - radii**2 / self.lam**2) ** self.order
        if not np.allclose(values, expected, rtol=0.0, atol=1e-12):
            raise ParameterError("tabulated values disagree with the multiplier")
        if values[0] != 1.0:
            raise ParameterError("multiplier must equal 1 at the origin")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        radii.setflags(write=False)
        values.setflags(write=False)

    @classmethod
    def build(cls, lam: float, order: float, count: int = 256) -> "MultiplierProfile":
        if count < 2:
            raise ParameterError(f"need at least 2 table entries, got {count}")
        if lam <= 0.0:
            raise RangeError(f"radius must be positive, got {lam}")
        radii = np.linspace(0.0, lam, count, endpoint=False)
        values = (1.0 - radii**2 / lam**2) ** order
        return cls(lam, order, radii, values)


def _delta_transform(alpha: tuple[int, ...], xi: np.ndarray) -> np.ndarray:
    """(2 pi)^{-N/2} (i xi)^alpha: the transform of the alpha-derivative of
    the point mass under this module's convention."""
    N = xi.shape[1]
    out = np.full(xi.shape[0], TWO_PI ** (-N / 2.0), dtype=complex)
    for i, power in enumerate(alpha):
        if power:
            out = out * (1j * xi[:, i]) ** power
    return out


def riesz_mean(
    target,
    s: float,
    lam: float,
    x,
    probe: bool = False,
    radial_count: int = 96,
    angular_count: int = 256,
) -> complex:
    """Riesz mean of order s at radius lambda, evaluated at the point x.

    (2 pi)^{-N/2} integral over {|xi| < lambda} of
    (1 - |xi|^2 / lambda^2)^s f_hat(xi) e^{i x.xi} d xi.  The target is
    either a CompactField (f_hat by grid quadrature) or a RieszSpec /
    multi-index for the derivative-of-delta distribution.  Order zero
    reproduces the plain partial integral.  Negative orders are refused
    unless probe mode is set, which logs a warning; orders <= -1 are not
    integrable and always refused.
    """
    if s < 0.0:
        if not probe:
            raise ParameterError(
                f"negative order {s} rejected outside probe mode"
            )
        logger.warning(
            "probing a negative-order mean (s = %s): localization is known "
            "to fail there; results are trend probes only",
            s,
        )
    if s <= -1.0:
        raise ParameterError(f"order must be > -1 for an integrable multiplier, got {s}")
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    N = x.shape[0]

    if isinstance(target, CompactField):
        if target.dimension != N:
            raise DimensionError(
                f"point has dimension {N}, field has {target.dimension}"
            )
        t_nodes, t_weights = _radial_rule(lam, s, N, radial_count)
        directions, ang_weights = _angular_rule(N, angular_count)
        xi = (t_nodes[:, None, None] * directions[None, :, :]).reshape(-1, N)
        fhat = field_transform(target, xi)
        weights = (t_weights[:, None] * ang_weights[None, :]).ravel()
        phases = np.exp(1j * (xi @ x))
        return complex(TWO_PI ** (-N / 2.0) * np.sum(weights * fhat * phases))

    if isinstance(target, RieszSpec):
        alpha = target.alpha
    else:
        alpha = tuple(int(a) for a in target)
    if len(alpha) != N:
        raise DimensionError(
            f"derivative multi-index {alpha} does not match dimension {N}"
        )
    if any(a < 0 for a in alpha):
        raise ParameterError(f"derivative multi-index {alpha} invalid")

    if not any(alpha):
        # radial reduction: one-dimensional integral times the wave factor
        t_nodes, t_weights = _radial_rule(lam, s, N, radial_count)
        rho = float(np.linalg.norm(x))
        ang = sphere_wave_integral(t_nodes * rho, N)
        return complex(TWO_PI ** (-N) * np.sum(t_weights * ang))

    t_nodes, t_weights = _radial_rule(lam, s, N, radial_count)
    directions, ang_weights = _angular_rule(N, angular_count)
    xi = (t_nodes[:, None, None] * directions[None, :, :]).reshape(-1, N)
    dhat = _delta_transform(alpha, xi)
    weights = (t_weights[:, None] * ang_weights[None, :]).ravel()
    phases = np.exp(1j * (xi @ x))
    return complex(TWO_PI ** (-N / 2.0) * np.sum(weights * dhat * phases))


# ---------------------------------------------------------------------------
# trend probes


@dataclass(frozen=True)
class ThresholdReport:
    """Magnitudes of a delta-target mean over a radius grid, with the tail
    envelope and a log-log slope classification of the trend."""

    dimension: int
    order: float
    alpha: tuple[int, ...]
    point: tuple[float, ...]
    lambdas: np.ndarray
    values: np.ndarray
    envelope: np.ndarray
    slope: float
    classification: str


# |slope| below this counts as flat in the trend classifier
TREND_FLAT_BAND = 0.15


def classify_trend(lambdas, values, flat_band: float = TREND_FLAT_BAND):
    """Least-squares log-log slope of per-octave peak values.

    Block maxima over octaves of the radius grid tame the oscillation of
    the underlying kernels; the fitted slope classifies the trend as
    decaying (below -flat_band), growing (above +flat_band), or
    bounded-oscillating.
    """
    lam = np.asarray(lambdas, dtype=float)
    val = np.asarray(values, dtype=float)
    if lam.ndim != 1 or lam.shape != val.shape or lam.size < 2:
        raise ParameterError("need matching radius and value vectors, length >= 2")
    if np.any(lam <= 0.0) or np.any(np.diff(lam) <= 0.0):
        raise ParameterError("radius grid must be positive and ascending")
    octave = np.floor(np.log2(lam / lam[0]) + 1e-9).astype(int)
    xs, ys = [], []
    for o in np.unique(octave):
        m = octave == o
        peak = float(val[m].max())
        xs.append(math.log(float(lam[m][np.argmax(val[m])])))
        ys.append(math.log(max(peak, 1e-300)))
    if len(xs) < 3:
        xs = np.log(lam)
        ys = np.log(np.maximum(val, 1e-300))
    slope = float(np.polyfit(np.asarray(xs), np.asarray(ys), 1)[0])
    if slope < -flat_band:
        label = "decaying"
    elif slope > flat_band:
        label = "growing"
    else:
        label = "bounded-oscillating"
    return slope, label


def threshold_probe(spec: RieszSpec, x, lambdas) -> ThresholdReport:
    """Evaluate |mean of the delta-derivative target| over a radius grid.

    Requires an off-support evaluation point (|x| > 0) and an ascending grid.
    The envelope column is the running tail supremum: entry i is the
    largest magnitude at radius lambda_i or beyond, so a decaying envelope
    certifies eventual smallness while a flat one reports the peak level.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    N = x.shape[0]
    if len(spec.alpha) != N:
        raise DimensionError(
            f"spec multi-index {spec.alpha} does not match dimension {N}"
        )
    if float(np.linalg.norm(x)) <= 0.0:
        raise PreconditionError(
            "probe point must lie off the support of the point mass"
        )
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size < 2 or np.any(lam <= 0) or np.any(np.diff(lam) <= 0):
        raise ParameterError("radius grid must be positive, ascending, length >= 2")
    values = np.empty(lam.size)
    for i, l in enumerate(lam):
        values[i] = abs(riesz_mean(spec, spec.order, float(l), x))
    envelope = np.maximum.accumulate(values[::-1])[::-1]
    slope, label = classify_trend(lam, values)
    lam.setflags(write=False)
    values.setflags(write=False)
    envelope.setflags(write=False)
    return ThresholdReport(
        dimension=N,
        order=spec.order,
        alpha=spec.alpha,
        point=tuple(float(c) for c in x),
        lambdas=lam,
        values=values,
        envelope=envelope,
        slope=slope,
        classification=label,
    )


# ---------------------------------------------------------------------------
# elliptic-polynomial partial integrals


def gradient_form(coeffs: dict, degree: int, points: np.ndarray) -> np.ndarray:
    """Gradient of the homogeneous form at each row of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    N = pts.shape[1]
    grad = np.zeros_like(pts)
    for alpha, c in coeffs.items():
        for i, power in enumerate(alpha):
            if not power:
                continue
            term = np.full(pts.shape[0], float(c) * power)
            for k, p in enumerate(alpha):
                q = p - 1 if k == i else p
                if q:
                    term = term * pts[:, k] ** q
            grad[:, i] += term
    return grad


def elliptic_partial_integral(
    field: CompactField,
    coeffs: dict,
    degree: int,
    lam: float,
    x,
    points_per_axis: int = 96,
) -> complex:
    """Partial integral over the sublevel set {form(xi) < lambda}.

    Frequency-side tensor quadrature: the sublevel set of an elliptic
    homogeneous form is bounded by the ball of radius (lambda / min on the
    sphere)^(1/degree).  Cells straddling the level surface carry the
    first-order volume fraction estimated from the form's gradient, which
    removes the dominant indicator-boundary error; the open and closed
    sublevel sets integrate identically, so the fraction changes nothing in
    the limit.  For form |xi|^2 this reproduces the spherical partial
    integral at radius sqrt(lambda).
    """
    N = field.dimension
    if lam <= 0.0:
        raise RangeError(f"sublevel height must be positive, got {lam}")
    if points_per_axis < 8:
        raise ParameterError(f"need >= 8 points per axis, got {points_per_axis}")
    if points_per_axis**N > lattice.POINT_BUDGET:
        raise ResourceError(
            f"{points_per_axis}^{N} frequency nodes exceed the budget"
        )
    low = elliptic_screen(coeffs, degree, N)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (N,):
        raise DimensionError(f"evaluation point must have shape ({N},)")
    reach = (lam / low) ** (1.0 / degree)
    axis = np.linspace(-reach, reach, points_per_axis)
    d = axis[1] - axis[0]
    mesh = np.meshgrid(*([axis] * N), indexing="ij")
    xi = np.stack([m.ravel() for m in mesh], axis=-1)
    values = evaluate_form(coeffs, degree, xi)
    slope = np.linalg.norm(gradient_form(coeffs, degree, xi), axis=1)
    # the gradient vanishes only at the origin, which lies strictly inside
    with np.errstate(divide="ignore", invalid="ignore"):
        signed = np.where(slope > 0.0, (lam - values) / (slope * d), np.inf)
    weight = np.clip(0.5 + signed, 0.0, 1.0)
    keep = weight > 0.0
    xi, weight = xi[keep], weight[keep]
    if xi.shape[0] == 0:
        return 0.0 + 0.0j
    fhat = field_transform(field, xi)
    phases = np.exp(1j * (xi @ x))
    return complex(TWO_PI ** (-N / 2.0) * d**N * np.sum(weight * fhat * phases))


# ---------------------------------------------------------------------------
# radial fast route (for large-radius localization scans)


def radial_transform(
    profile,
    inner: float,
    outer: float,
    N: int,
    u,
    node_count: int = 2048,
):
    """Transform radius-profile of a radial field supported in the annulus.

    f_hat(|xi| = u) = (2 pi)^{-N/2} integral_inner^outer profile(t) t^{N-1}
    wave(t u) dt by uniform trapezoid; the profile must vanish smoothly at
    both annulus edges for the rule's fast convergence to hold.
    """
    if not 0.0 <= inner < outer:
        raise ParameterError(f"bad annulus [{inner}, {outer}]")
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    t = np.linspace(inner, outer, node_count + 1)
    dt = t[1] - t[0]
    radial = np.asarray(profile(t), dtype=float) * t ** (N - 1)
    phases = sphere_wave_integral(np.outer(t, arr).ravel(), N).reshape(t.size, arr.size)
    out = TWO_PI ** (-N / 2.0) * dt * (radial @ phases)
    return out if np.ndim(u) else complex(out[0])


def radial_partial_integral(
    profile,
    inner: float,
    outer: float,
    N: int,
    lam: float,
    radii,
    radial_count: int | None = None,
    node_count: int = 2048,
):
    """Spherical partial integral of a radial field, at points of given radii.

    Both the transform and the inversion reduce to one-dimensional
    integrals against the wave factor, which keeps large radii affordable:
    E f(|x| = rho) = (2 pi)^{-N/2} integral_0^lam f_hat(u) u^{N-1}
    wave(u rho) du.
    """
    if lam <= 0.0:
        raise RangeError(f"radius must be positive, got {lam}")
    arr = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(arr < 0.0):
        raise ParameterError("evaluation radii must be >= 0")
    if radial_count is None:
        radial_count = max(64, int(0.75 * lam * outer))
    t_nodes, t_weights = _radial_rule(lam, 0.0, N, radial_count)
    fhat = radial_transform(profile, inner, outer, N, t_nodes, node_count)
    out = np.empty(arr.size)
    for i, rho in enumerate(arr):
        ang = sphere_wave_integral(t_nodes * rho, N)
        out[i] = TWO_PI ** (-N / 2.0) * float(np.sum(t_weights * fhat * ang))
    return out if np.ndim(radii) else float(out[0])
