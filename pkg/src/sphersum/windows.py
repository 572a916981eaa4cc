"""Smooth radial cutoffs and the periodized annulus window.

The window vanishes on a neighborhood of the origin of the fundamental cell
(-pi, pi]^N, equals one outside a slightly larger ball, and is smooth, so
multiplying a convolution kernel by it kills the singular near-diagonal part
while leaving the kernel untouched at distances that matter for fields
supported away from the origin.  Smoothness buys rapid decay of the window's
Fourier coefficients; the empirical decay constants are fitted at build time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResolutionError

TWO_PI = 2.0 * math.pi


def smooth_step(t, a: float, b: float):
    """C-infinity monotone ramp: 0 for t <= a, 1 for t >= b.

    Built from g(t) = exp(-1/t) as g(u) / (g(u) + g(1-u)) with
    u = (t - a) / (b - a); symmetric about the midpoint, all derivatives
    vanish at both ends.
    """
    if not b > a:
        raise ParameterError(f"ramp needs a < b, got a={a}, b={b}")
    arr = np.asarray(t, dtype=float)
    u = np.clip((arr - a) / (b - a), 0.0, 1.0)
    out = np.where(u >= 1.0, 1.0, 0.0)
    interior = (u > 0.0) & (u < 1.0)
    ui = u[interior]
    ga = np.exp(-1.0 / ui)
    gb = np.exp(-1.0 / (1.0 - ui))
    out[interior] = ga / (ga + gb)
    if arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WindowSpec:
    """Geometry of the localization pair: field support radius R, probe radius r.

    The ramp of the window lives on [ (R-r)/3, 2(R-r)/3 ], strictly inside
    the gap between the probe ball and the field support, so the window is
    invisible to convolutions evaluated at |x| <= r against fields vanishing
    on |x| < R.
    """

    R: float
    r: float
    dimension: int

    def __post_init__(self):
        # R < pi keeps the quiet ball (and the ramp, which ends well inside
        # R - r) within the fundamental cell.  Wide gaps are legitimate and
        # useful: the ramp width controls how early the coefficient decay
        # sets in, and desk-scale decay scans need wide ramps to reach the
        # asymptotic regime inside the scanned mode range.
        if not 0.0 < self.r < self.R < math.pi:
            raise ParameterError(
                f"need 0 < r < R < pi, got r={self.r}, R={self.R}"
            )
        if self.dimension < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.dimension}")

    @property
    def ramp_start(self) -> float:
        return (self.R - self.r) / 3.0

    @property
    def ramp_end(self) -> float:
        return 2.0 * (self.R - self.r) / 3.0

    def profile(self, t):
        """Radial window value: 0 up to ramp_start, 1 beyond ramp_end."""
        return smooth_step(t, self.ramp_start, self.ramp_end)

    def inner_cutoff(self, t):
        """The complementary cutoff: 1 near the origin, 0 beyond ramp_end."""
        return 1.0 - np.asarray(self.profile(t))


@dataclass(frozen=True)
class ScanWindowSpec:
    """Radial cutoff with an explicitly chosen ramp, for coefficient scans.

    The profile vanishes on |x| <= ramp_start, climbs the C-infinity step on
    [ramp_start, ramp_end], and equals one beyond.  Unlike WindowSpec, the
    ramp is not tied to a support/probe pair: decay-constant scans want the
    widest smooth ramp the cell admits, because the ramp width sets how
    early the coefficient decay reaches its asymptotic regime.  A scan
    window carries no localization geometry, so convolution helpers skip
    the quiet-ball precondition for kernel tables built from one.
    """

    ramp_start: float
    ramp_end: float
    dimension: int

    def __post_init__(self):
        if not 0.0 < self.ramp_start < self.ramp_end < math.pi:
            raise ParameterError(
                "need 0 < ramp_start < ramp_end < pi, got "
                f"[{self.ramp_start}, {self.ramp_end}]"
            )
        if self.dimension < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.dimension}")

    def profile(self, t):
        """Radial window value: 0 up to ramp_start, 1 beyond ramp_end."""
        return smooth_step(t, self.ramp_start, self.ramp_end)

    def inner_cutoff(self, t):
        """The complementary cutoff: 1 near the origin, 0 beyond ramp_end."""
        return 1.0 - np.asarray(self.profile(t))


def _mode_signs(M: int) -> np.ndarray:
    # (-1)^m on the shifted index grid m = idx - M/2
    m = np.arange(M) - M // 2
    return np.where(m % 2 == 0, 1.0, -1.0)


def _radius_grid(axes: list[np.ndarray]) -> np.ndarray:
    sq = np.zeros(tuple(len(a) for a in axes))
    for i, a in enumerate(axes):
        shape = [1] * len(axes)
        shape[i] = len(a)
        sq = sq + (a.astype(float) ** 2).reshape(shape)
    return np.sqrt(sq)


@dataclass(frozen=True)
class PeriodizedWindow:
    """Window samples on the M^N torus grid and its Fourier coefficients.

    coeffs is indexed by mode m + M/2 per axis and is real (the window is
    even).  decay_constants[q] is the fitted envelope constant
    max_m |psi_m| (1 + |m|)^q over the table.
    """

    spec: WindowSpec | ScanWindowSpec | None
    grid_size: int
    samples: np.ndarray
    coeffs: np.ndarray
    decay_constants: dict[int, float]

    @property
    def dimension(self) -> int:
        return self.samples.ndim

    @property
    def origin(self) -> int:
        return self.grid_size // 2

    def coeff(self, m) -> float:
        """Single coefficient psi_m; modes outside the table are zero."""
        idx = []
        for c in np.atleast_1d(np.asarray(m, dtype=np.int64)):
            s = int(c) + self.origin
            if not 0 <= s < self.grid_size:
                return 0.0
            idx.append(s)
        if len(idx) != self.dimension:
            raise ParameterError(f"mode {m!r} has wrong dimension")
        return float(self.coeffs[tuple(idx)])


DECAY_ORDERS = (2, 4, 6)


def _fit_decay(coeffs: np.ndarray, M: int) -> dict[int, float]:
    modes = [np.arange(M) - M // 2] * coeffs.ndim
    radius = _radius_grid(modes)
    mags = np.abs(coeffs)
    return {
        q: float(np.max(mags * (1.0 + radius) ** q)) for q in DECAY_ORDERS
    }


def build_window(spec: WindowSpec | ScanWindowSpec, M: int) -> PeriodizedWindow:
    """Sample the radial window on the torus grid and transform it.

    Grid points are x_k = 2 pi k / M - pi.  The window is 1 near the cell
    boundary and 0 near the origin, so its periodization is smooth and the
    trapezoid-rule coefficients converge spectrally.
    """
    if M < 64 or M & (M - 1):
        raise ResolutionError(f"grid size must be a power of two >= 64, got {M}")
    N = spec.dimension
    axis = TWO_PI * np.arange(M) / M - math.pi
    radius = _radius_grid([axis] * N)
    samples = np.asarray(spec.profile(radius))
    spectrum = np.fft.fftshift(np.fft.fftn(samples)) / (M ** N)
    signs = _mode_signs(M)
    for i in range(N):
        shape = [1] * N
        shape[i] = M
        spectrum = spectrum * signs.reshape(shape)
    worst_imag = float(np.max(np.abs(spectrum.imag)))
    if worst_imag > 1e-12 * max(1.0, float(np.max(np.abs(spectrum.real)))):
        raise ResolutionError(
            f"window transform has non-negligible imaginary part {worst_imag:.3e}"
        )
    coeffs = np.ascontiguousarray(spectrum.real)
    coeffs.setflags(write=False)
    samples.setflags(write=False)
    return PeriodizedWindow(
        spec=spec,
        grid_size=M,
        samples=samples,
        coeffs=coeffs,
        decay_constants=_fit_decay(coeffs, M),
    )


def delta_window(N: int, M: int = 64) -> PeriodizedWindow:
    """Test-mode window identically one: psi_m = delta(m, 0).

    With this window the smoothed kernels collapse to the raw spherical
    partial-sum kernels, which gives closed-form coefficient tables for
    exercising the telescoping machinery.
    """
    if M < 4 or M % 2:
        raise ResolutionError(f"grid size must be even and >= 4, got {M}")
    samples = np.ones((M,) * N)
    coeffs = np.zeros((M,) * N)
    coeffs[(M // 2,) * N] = 1.0
    coeffs.setflags(write=False)
    samples.setflags(write=False)
    return PeriodizedWindow(
        spec=None,
        grid_size=M,
        samples=samples,
        coeffs=coeffs,
        decay_constants={q: 1.0 for q in DECAY_ORDERS},
    )
