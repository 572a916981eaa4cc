"""Band-limited fields on the torus: grids, transforms, and norms.

Coefficient convention: f(x) = sum_n f_n exp(i n.x) with
f_n = (2 pi)^-N integral of f exp(-i n.x); the grid is x_k = 2 pi k / M - pi
per axis, and the rectangle rule on that grid is exact for band-limited
integrands, which is what makes grid Parseval identities hold to rounding.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import bessel
from .errors import (
    ConfigurationError,
    DimensionError,
    ParameterError,
    PreconditionError,
    ResolutionError,
    ResourceError,
)
from .windows import TWO_PI, _radius_grid


@dataclass(frozen=True)
class TorusGrid:
    """Uniform M^N sampling of (-pi, pi]^N with x_k = 2 pi k / M - pi."""

    dimension: int
    size: int

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.dimension}")
        if self.size < 2 or self.size & (self.size - 1):
            raise ResolutionError(
                f"grid size must be a power of two >= 2, got {self.size}"
            )

    def axis(self) -> np.ndarray:
        return TWO_PI * np.arange(self.size) / self.size - math.pi

    @property
    def cell_weight(self) -> float:
        return (TWO_PI / self.size) ** self.dimension

    def radius(self) -> np.ndarray:
        """Euclidean distance from the origin at every grid point."""
        return _radius_grid([self.axis()] * self.dimension)

    def ball_mask(self, radius: float) -> np.ndarray:
        return self.radius() < radius

    def points(self) -> np.ndarray:
        """All grid points as rows, in C order matching raveled samples."""
        grids = np.meshgrid(*([self.axis()] * self.dimension), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)


def mode_axis(band: int) -> np.ndarray:
    return np.arange(-band, band + 1)


def mode_grid(N: int, band: int) -> np.ndarray:
    """All modes |n_i| <= band as rows, ordered to match raveled coeffs."""
    grids = np.meshgrid(*([mode_axis(band)] * N), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def mode_norms_sq(N: int, band: int) -> np.ndarray:
    """|n|^2 on the coefficient grid, exact integers, shape (2*band+1,)^N."""
    sq = np.zeros((2 * band + 1,) * N, dtype=np.int64)
    ax = mode_axis(band) ** 2
    for i in range(N):
        shape = [1] * N
        shape[i] = 2 * band + 1
        sq = sq + ax.reshape(shape)
    return sq


@dataclass
class SpectralField:
    """Coefficients of a band-limited field, indexed by n + band per axis."""

    dimension: int
    band: int
    coeffs: np.ndarray
    real_valued: bool = False

    def __post_init__(self):
        expected = (2 * self.band + 1,) * self.dimension
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != expected:
            raise ParameterError(
                f"coefficient array must have shape {expected}, got {self.coeffs.shape}"
            )
        if self.real_valued:
            flipped = self.coeffs
            for ax in range(self.dimension):
                flipped = np.flip(flipped, axis=ax)
            gap = float(np.max(np.abs(np.conj(flipped) - self.coeffs)))
            scale = float(np.max(np.abs(self.coeffs)))
            if gap > 1e-8 * max(scale, 1e-300):
                raise ParameterError(
                    "real-valued flag set but coefficients are not "
                    f"conjugate-symmetric (gap {gap:.3e})"
                )

    def coefficient(self, n) -> complex:
        idx = tuple(int(c) + self.band for c in np.atleast_1d(n))
        if len(idx) != self.dimension or not all(
            0 <= i <= 2 * self.band for i in idx
        ):
            raise ParameterError(f"mode {n!r} outside the band")
        return complex(self.coeffs[idx])

    def norm_sq(self) -> float:
        """Squared L2 norm over the torus: (2 pi)^N sum |f_n|^2."""
        return float(TWO_PI ** self.dimension * np.sum(np.abs(self.coeffs) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def copy_with(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.dimension, self.band, coeffs, self.real_valued)


def _sign_grid(N: int, band: int) -> np.ndarray:
    s = np.where(mode_axis(band) % 2 == 0, 1.0, -1.0)
    out = s
    for _ in range(N - 1):
        out = np.multiply.outer(out, s)
    return out


def synthesize(field: SpectralField, M: int) -> np.ndarray:
    """Samples of the field on the M^N torus grid (real array if flagged)."""
    if M < 2 * field.band + 2:
        raise ResolutionError(
            f"grid size {M} cannot carry band {field.band}; need M >= {2 * field.band + 2}"
        )
    N, b = field.dimension, field.band
    spectrum = np.zeros((M,) * N, dtype=complex)
    idx = np.ix_(*([mode_axis(b) % M] * N))
    spectrum[idx] = field.coeffs * _sign_grid(N, b)
    out = np.fft.ifftn(spectrum) * (M ** N)
    return out.real if field.real_valued else out


def analyze(samples: np.ndarray, band: int) -> SpectralField:
    """Coefficients up to the band from full-grid samples."""
    samples = np.asarray(samples)
    N = samples.ndim
    M = samples.shape[0]
    if any(s != M for s in samples.shape):
        raise ParameterError(f"samples must be a cube, got shape {samples.shape}")
    if band > M // 2 - 1:
        raise ConfigurationError(
            f"band {band} risks aliasing on grid size {M}; need M >= {2 * band + 2}"
        )
    spectrum = np.fft.fftn(samples) / (M ** N)
    idx = np.ix_(*([mode_axis(band) % M] * N))
    coeffs = spectrum[idx] * _sign_grid(N, band)
    return SpectralField(
        dimension=N,
        band=band,
        coeffs=coeffs,
        real_valued=bool(np.isrealobj(samples)),
    )


def evaluate(field: SpectralField, points: np.ndarray) -> np.ndarray:
    """Direct evaluation sum_n f_n exp(i n.x) at arbitrary points (rows)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != field.dimension:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, field has {field.dimension}"
        )
    modes = mode_grid(field.dimension, field.band)
    phases = np.exp(1j * (pts @ modes.T))
    vals = phases @ field.coeffs.ravel()
    return vals.real if field.real_valued else vals


def grid_norm_sq(samples: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Quadrature L2 norm squared with the (2 pi / M)^N cell weight."""
    samples = np.asarray(samples)
    M = samples.shape[0]
    weight = (TWO_PI / M) ** samples.ndim
    data = np.abs(samples) ** 2
    if mask is not None:
        data = data[mask]
    return float(weight * np.sum(data))


def random_field(N: int, band: int, rng: np.random.Generator, real_valued: bool = True) -> SpectralField:
    """Complex-Gaussian coefficients, Hermitian-symmetrized when real."""
    shape = (2 * band + 1,) * N
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if real_valued:
        flipped = coeffs
        for ax in range(N):
            flipped = np.flip(flipped, axis=ax)
        coeffs = 0.5 * (coeffs + np.conj(flipped))
    return SpectralField(N, band, coeffs, real_valued=real_valued)


@functools.lru_cache(maxsize=8)
def ball_vanishing_basis(
    N: int,
    band: int,
    radius: float,
    max_rel_residual: float = 1e-8,
) -> np.ndarray:
    """Orthonormal mode-space basis of fields that are quiet on the ball.

    Diagonalizes the band-limited ball-energy form K[n, n'] =
    integral_{|x| < radius} exp(i (n - n').x) dx, evaluated in closed form
    (a Bessel function of the displacement length), and keeps the
    eigenvectors whose relative ball energy is at most max_rel_residual^2.
    Because the integral is exact rather than a grid quadrature, any
    combination c = V a satisfies ||f||_{L^2(ball)} <= max_rel_residual
    ||f||_{L^2} as a continuum statement, uniformly over evaluation grids.
    This is how annulus-supported trial fields are drawn exactly instead of
    by iterative masking (the alternating mask/band-limit iteration stalls
    near 1e-2 relative and cannot reach useful tolerances).

    The returned matrix has unit-norm columns of length (2*band+1)^N; it is
    cached because the eigendecomposition is the expensive step.
    """
    if band < 1:
        raise ParameterError(f"band must be >= 1, got {band}")
    if not 0.0 < radius <= math.pi:
        raise ParameterError(
            f"ball radius must lie in (0, pi] to fit the fundamental cell, got {radius}"
        )
    width = 2 * band + 1
    if width**N > 6000:
        raise ResourceError(
            f"basis would need an eigendecomposition of a {width**N} x "
            f"{width**N} matrix; reduce the band"
        )
    # translation kernel k(d) = integral over the ball of e^{-i d.x} dx:
    # real, radial, and even, so K is real symmetric
    axis = np.arange(-2 * band, 2 * band + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * N), indexing="ij")
    dist = np.sqrt(sum((m.astype(float) ** 2 for m in mesh), np.zeros(mesh[0].shape)))
    table = bessel.ball_fourier_integral(dist.ravel(), radius, N).reshape(dist.shape)
    modes = mode_grid(N, band)
    diff_idx = []
    for i in range(N):
        d = modes[:, i][:, None] - modes[:, i][None, :]
        diff_idx.append(d + 2 * band)
    flat = np.ravel_multi_index(tuple(diff_idx), table.shape)
    K = table.ravel()[flat]
    eigvals, eigvecs = np.linalg.eigh(K)
    # relative ball energy of eigenvector v is eigval / (2 pi)^N; clamp the
    # rounding-level negatives of the positive-semidefinite form
    rel = np.clip(eigvals, 0.0, None) / (TWO_PI ** N)
    keep = rel <= max_rel_residual ** 2
    if not np.any(keep):
        raise PreconditionError("no ball-vanishing modes at this band and radius")
    basis = np.ascontiguousarray(eigvecs[:, keep])
    basis.setflags(write=False)
    return basis


def random_annulus_field(
    N: int,
    band: int,
    radius: float,
    rng: np.random.Generator,
    real_valued: bool = True,
    max_rel_residual: float = 1e-8,
) -> SpectralField:
    """Random band-limited field with relative ball residual below tolerance."""
    basis = ball_vanishing_basis(N, band, radius, max_rel_residual)
    weights = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(
        basis.shape[1]
    )
    coeffs = (basis @ weights).reshape((2 * band + 1,) * N)
    if real_valued:
        flipped = coeffs
        for ax in range(N):
            flipped = np.flip(flipped, axis=ax)
        # the kept subspace is flip-conjugation invariant, so symmetrizing
        # keeps the ball residual guarantee
        coeffs = 0.5 * (coeffs + np.conj(flipped))
    out = SpectralField(N, band, coeffs, real_valued=real_valued)
    if out.norm() == 0.0:
        raise PreconditionError("degenerate draw: zero field")
    return out


def project_off_ball(
    field: SpectralField,
    M: int,
    radius: float,
    iterations: int = 20,
    tol: float = 1e-6,
) -> tuple[SpectralField, float, int]:
    """Alternate 'zero the ball' and 're-band-limit' until the ball is quiet.

    Returns (projected field, relative ball residual, iterations used).  The
    residual is the grid L2 norm of the synthesized field inside the ball
    divided by the full norm; callers decide whether a non-converged trial
    is usable.
    """
    if radius <= 0 or radius >= math.pi:
        raise ParameterError(f"ball radius must be in (0, pi), got {radius}")
    grid = TorusGrid(field.dimension, M)
    mask = grid.ball_mask(radius)
    current = field
    residual = math.inf
    used = 0
    for it in range(1, iterations + 1):
        samples = synthesize(current, M)
        samples = np.array(samples)
        samples[mask] = 0.0
        current = analyze(samples, field.band)
        current.real_valued = field.real_valued
        used = it
        total = current.norm()
        if total == 0.0:
            raise PreconditionError("projection annihilated the field")
        ball = math.sqrt(grid_norm_sq(synthesize(current, M), mask))
        residual = ball / total
        if residual < tol:
            break
    return current, residual, used
