"""Partial sums of multiple Fourier series and their maximal operator.

Spherical cuts keep modes with |n|^2 strictly below the parameter, square
and rectangular cuts bound each coordinate, elliptic cuts use sublevel sets
of a positive homogeneous form, and the two-axis diagonal split writes the
square sum as two families of one-dimensional sums.  Everything operates on
band-limited fields, so each cut is a mask on the coefficient grid and the
sums are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import (
    DimensionError,
    NotEllipticError,
    ParameterError,
    PreconditionError,
    RangeError,
    ResolutionError,
)
from .fields import (
    SpectralField,
    TorusGrid,
    evaluate,
    grid_norm_sq,
    mode_grid,
    mode_norms_sq,
    synthesize,
)
from .kernels import KernelCoeffs
from .windows import TWO_PI

# sphere sampling for the positivity screen; deterministic per dimension
SCREEN_POINTS = 10_000
_SCREEN_SEED = 603173


def _restrict(field: SpectralField, mask: np.ndarray) -> SpectralField:
    """Field with coefficients kept where mask holds, zeroed elsewhere."""
    return field.copy_with(np.where(mask, field.coeffs, 0.0))


def spherical_projection(field: SpectralField, lam: float) -> SpectralField:
    """Coefficient-level spherical cut: keep modes with |n|^2 < lam."""
    if not lam > 0:
        raise RangeError(f"spherical cut needs lambda > 0, got {lam}")
    return _restrict(field, mode_norms_sq(field.dimension, field.band) < lam)


def spherical_sum(field: SpectralField, lam: float, M: int) -> np.ndarray:
    """Samples of the spherical partial sum on the M^N grid."""
    return synthesize(spherical_projection(field, lam), M)


def square_projection(field: SpectralField, k: int) -> SpectralField:
    if k < 0:
        raise RangeError(f"square cut needs k >= 0, got {k}")
    return rectangular_projection(field, (k,) * field.dimension)


def square_sum(field: SpectralField, k: int, M: int) -> np.ndarray:
    """Samples of the square partial sum: modes with every |n_i| <= k."""
    return synthesize(square_projection(field, k), M)


def rectangular_projection(field: SpectralField, limits) -> SpectralField:
    limits = [int(l) for l in np.atleast_1d(limits)]
    if len(limits) != field.dimension:
        raise DimensionError(
            f"need {field.dimension} per-axis limits, got {len(limits)}"
        )
    if any(l < 0 for l in limits):
        raise RangeError(f"per-axis limits must be >= 0, got {limits}")
    mask = np.ones((2 * field.band + 1,) * field.dimension, dtype=bool)
    axis_modes = np.abs(np.arange(-field.band, field.band + 1))
    for i, limit in enumerate(limits):
        shape = [1] * field.dimension
        shape[i] = 2 * field.band + 1
        mask &= (axis_modes <= limit).reshape(shape)
    return _restrict(field, mask)


def rectangular_sum(field: SpectralField, limits, M: int) -> np.ndarray:
    """Samples of the rectangular partial sum: |n_i| <= limits[i] per axis."""
    return synthesize(rectangular_projection(field, limits), M)


def generalized_square_sum(field: SpectralField, limit_fns, k: int, M: int) -> np.ndarray:
    """Rectangular sum with per-axis limits taken from functions of k."""
    if k < 0:
        raise RangeError(f"cut index must be >= 0, got {k}")
    limits = [int(fn(k)) for fn in limit_fns]
    return rectangular_sum(field, limits, M)


def tevzadze_split(
    field: SpectralField, k: int, M: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split the two-axis square sum into two one-dimensional families.

    The first family collects modes with |n2| <= |n1| (summed over
    |n1| <= k), the second the strict complement |n1| < |n2| (summed over
    |n2| <= k), so their recombination is exactly the square partial sum.
    Returns (first, second, recombined) samples on the M^2 grid.
    """
    if field.dimension != 2:
        raise DimensionError(
            f"diagonal split is defined for two axes, got {field.dimension}"
        )
    if k < 0:
        raise RangeError(f"square cut needs k >= 0, got {k}")
    axis = np.abs(np.arange(-field.band, field.band + 1))
    n1 = axis[:, None]
    n2 = axis[None, :]
    first = synthesize(_restrict(field, (n1 <= k) & (n2 <= n1)), M)
    second = synthesize(_restrict(field, (n2 <= k) & (n1 < n2)), M)
    return first, second, first + second


def unit_sphere_points(N: int, count: int = SCREEN_POINTS) -> np.ndarray:
    """Deterministic quasi-uniform sample of the unit sphere, rows of length N."""
    if N < 1:
        raise DimensionError(f"dimension must be >= 1, got {N}")
    if count < 2:
        raise ParameterError(f"need at least 2 screen points, got {count}")
    if N == 1:
        return np.array([[1.0], [-1.0]])
    if N == 2:
        angles = TWO_PI * np.arange(count) / count
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if N == 3:
        # Fibonacci sphere
        i = np.arange(count)
        z = 1.0 - (2.0 * i + 1.0) / count
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        golden = math.pi * (3.0 - math.sqrt(5.0))
        return np.stack([rho * np.cos(golden * i), rho * np.sin(golden * i), z], axis=1)
    rng = np.random.default_rng(_SCREEN_SEED + N)
    raw = rng.standard_normal((count, N))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def _validate_form(coeffs: dict, degree: int, N: int) -> None:
    if degree < 1:
        raise ParameterError(f"form degree must be >= 1, got {degree}")
    if not coeffs:
        raise ParameterError("the form has no terms")
    for alpha in coeffs:
        if len(alpha) != N:
            raise DimensionError(f"multi-index {alpha!r} does not have length {N}")
        if any(not isinstance(a, (int, np.integer)) or a < 0 for a in alpha):
            raise ParameterError(f"multi-index {alpha!r} must be non-negative integers")
        if sum(alpha) != degree:
            raise ParameterError(
                f"multi-index {alpha!r} has degree {sum(alpha)}, form is homogeneous "
                f"of degree {degree}"
            )


def evaluate_form(coeffs: dict, degree: int, points: np.ndarray) -> np.ndarray:
    """Evaluate the homogeneous form sum_a c_a x^a at rows of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    _validate_form(coeffs, degree, pts.shape[1])
    total = np.zeros(pts.shape[0])
    for alpha, c in coeffs.items():
        term = np.full(pts.shape[0], float(c))
        for i, power in enumerate(alpha):
            if power:
                term = term * pts[:, i] ** power
        total += term
    return total


def elliptic_screen(coeffs: dict, degree: int, N: int) -> float:
    """Positivity screen on the unit sphere; returns the observed minimum.

    The screen is necessary only: passing it does not prove ellipticity,
    but any form failing it is certainly not elliptic.  Minima that are
    positive yet negligible against the maximum are also rejected: they
    are degenerate up to rounding (the screen grid cannot distinguish
    them from a true zero), and downstream bounding radii scale like
    1 / min, so admitting them would silently produce absurd domains.
    """
    values = evaluate_form(coeffs, degree, unit_sphere_points(N))
    low = float(values.min())
    if low <= 1e-9 * abs(float(values.max())):
        where = unit_sphere_points(N)[int(values.argmin())]
        raise NotEllipticError(
            f"form is not positive on the unit sphere: min {low:.6g} near {where}"
        )
    return low


def elliptic_projection(
    field: SpectralField, coeffs: dict, degree: int, lam: float
) -> SpectralField:
    """Keep modes in the open sublevel set {A(n) < lam} of the form."""
    elliptic_screen(coeffs, degree, field.dimension)
    values = evaluate_form(coeffs, degree, mode_grid(field.dimension, field.band))
    mask = (values < lam).reshape(field.coeffs.shape)
    return _restrict(field, mask)


def elliptic_sum(
    field: SpectralField, coeffs: dict, degree: int, lam: float, M: int
) -> np.ndarray:
    """Samples of the elliptic partial sum over {A(n) < lam}."""
    return synthesize(elliptic_projection(field, coeffs, degree, lam), M)


def _sorted_mode_data(field: SpectralField):
    norms = mode_norms_sq(field.dimension, field.band).ravel()
    order = np.argsort(norms, kind="stable")
    modes = mode_grid(field.dimension, field.band)[order]
    return norms[order], modes, field.coeffs.ravel()[order]


def sum_trajectory(field: SpectralField, lambdas, points: np.ndarray) -> np.ndarray:
    """Spherical partial sums at each cut of an ascending lambda list.

    Shells are accumulated incrementally, so the sweep costs one pass over
    the modes.  Returns a (len(lambdas), n_points) complex matrix.
    """
    lams = [float(l) for l in np.atleast_1d(lambdas)]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ParameterError("lambda list must be strictly ascending")
    if lams and lams[0] <= 0:
        raise RangeError(f"spherical cut needs lambda > 0, got {lams[0]}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != field.dimension:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, field has {field.dimension}"
        )
    norms, modes, coeffs = _sorted_mode_data(field)
    out = np.zeros((len(lams), pts.shape[0]), dtype=complex)
    current = np.zeros(pts.shape[0], dtype=complex)
    lo = 0
    for row, lam in enumerate(lams):
        hi = int(np.searchsorted(norms, lam, side="left"))
        if hi > lo:
            phases = np.exp(1j * (pts @ modes[lo:hi].T))
            current = current + phases @ coeffs[lo:hi]
            lo = hi
        out[row] = current
    return out


def maximal_sum(field: SpectralField, lambda_max: int, points: np.ndarray) -> np.ndarray:
    """Pointwise max of |spherical partial sum| over integer cuts 1..lambda_max.

    On a band-limited field the partial sum changes only when the cut
    crosses an occupied shell, so one incremental sweep over shells in
    [0, lambda_max - 1] visits every distinct value.
    """
    if not isinstance(lambda_max, (int, np.integer)) or lambda_max < 1:
        raise RangeError(f"lambda_max must be a positive integer, got {lambda_max!r}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != field.dimension:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, field has {field.dimension}"
        )
    norms, modes, coeffs = _sorted_mode_data(field)
    cutoff = int(np.searchsorted(norms, lambda_max - 1, side="right"))
    best = np.zeros(pts.shape[0])
    current = np.zeros(pts.shape[0], dtype=complex)
    lo = 0
    while lo < cutoff:
        hi = lo + 1
        while hi < cutoff and norms[hi] == norms[lo]:
            hi += 1
        phases = np.exp(1j * (pts @ modes[lo:hi].T))
        current = current + phases @ coeffs[lo:hi]
        np.maximum(best, np.abs(current), out=best)
        lo = hi
    return best


def check_ball_support(
    field: SpectralField, M: int, radius: float, tol: float = 1e-6
) -> float:
    """Relative grid norm of the field inside the ball; raises above tol."""
    grid = TorusGrid(field.dimension, M)
    total = field.norm()
    if total == 0.0:
        return 0.0
    ball = math.sqrt(grid_norm_sq(synthesize(field, M), grid.ball_mask(radius)))
    residual = ball / total
    if residual > tol:
        raise PreconditionError(
            f"field carries {residual:.3e} of its norm inside the ball of "
            f"radius {radius} (tolerance {tol:.1e})"
        )
    return residual


def _kernel_slices(kc: KernelCoeffs, field: SpectralField) -> tuple:
    if kc.dimension != field.dimension:
        raise DimensionError(
            f"kernel table dimension {kc.dimension} != field dimension {field.dimension}"
        )
    if kc.band < field.band:
        raise RangeError(
            f"kernel table band {kc.band} cannot cover field band {field.band}"
        )
    center = kc.band
    return (slice(center - field.band, center + field.band + 1),) * field.dimension


def windowed_convolution(
    field: SpectralField,
    kc: KernelCoeffs,
    j: int,
    points: np.ndarray,
    support_tol: float = 1e-6,
) -> np.ndarray:
    """Convolution of the field with the cut-j windowed ball kernel at points.

    For fields vanishing on the ball {|x| < R} of the window geometry this
    agrees with the raw spherical partial sum at every |x| <= r, which is
    the identity the whole windowed construction exists to provide.  The
    support precondition is enforced on the window's own grid; the
    delta-window test mode and explicit-ramp scan windows carry no
    quiet-ball geometry and skip the check.
    """
    if not 0 <= j <= kc.j_max + 1:
        raise RangeError(f"cut {j} outside the tabulated range {kc.j_max + 1}")
    sl = _kernel_slices(kc, field)
    quiet = getattr(kc.window.spec, "R", None)
    if quiet is not None:
        check_ball_support(field, kc.window.grid_size, quiet, support_tol)
    conv = field.copy_with(TWO_PI**field.dimension * kc.ball[j][sl] * field.coeffs)
    return evaluate(conv, points)


def kernel_field_table(
    kc: KernelCoeffs,
    field: SpectralField,
    points: np.ndarray,
    support_tol: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate every tabulated kernel convolution of the field at points.

    Returns (ball_values, shell_values) with shapes (j_max + 2, n_points)
    and (j_max + 1, n_points): row j holds the cut-j windowed ball (resp.
    shell) kernel convolved with the field.  One phase matrix is shared
    across all cuts, which is what makes full-table sweeps affordable.
    """
    sl = _kernel_slices(kc, field)
    quiet = getattr(kc.window.spec, "R", None)
    if quiet is not None:
        check_ball_support(field, kc.window.grid_size, quiet, support_tol)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != field.dimension:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, field has {field.dimension}"
        )
    modes = mode_grid(field.dimension, field.band)
    weighted = TWO_PI**field.dimension * field.coeffs.ravel()
    phases = np.exp(1j * (modes @ pts.T))
    width = 2 * field.band + 1
    ball = kc.ball[(slice(None), *sl)].reshape(kc.j_max + 2, width**field.dimension)
    shell = kc.shell[(slice(None), *sl)].reshape(kc.j_max + 1, width**field.dimension)
    ball_vals = (ball * weighted) @ phases
    shell_vals = (shell * weighted) @ phases
    if field.real_valued:
        return ball_vals.real, shell_vals.real
    return ball_vals, shell_vals


_SUM_KINDS = ("spherical", "square", "rectangular", "generalized-square", "elliptic")


@dataclass(frozen=True)
class PartialSumRequest:
    """A partial-sum computation to run: which cut, its payload, the grid.

    payload keys by kind: spherical -> lam; square -> k;
    rectangular -> limits; generalized-square -> limits (already evaluated
    at the cut index); elliptic -> coeffs, degree, lam.
    """

    kind: str
    payload: dict
    grid_size: int

    def __post_init__(self):
        if self.kind not in _SUM_KINDS:
            raise ParameterError(
                f"unknown partial-sum kind {self.kind!r}; expected one of {_SUM_KINDS}"
            )


def partial_sum(field: SpectralField, request: PartialSumRequest) -> np.ndarray:
    """Dispatch a partial-sum request to the matching cut."""
    p = request.payload
    M = request.grid_size
    try:
        if request.kind == "spherical":
            return spherical_sum(field, p["lam"], M)
        if request.kind == "square":
            return square_sum(field, p["k"], M)
        if request.kind in ("rectangular", "generalized-square"):
            return rectangular_sum(field, p["limits"], M)
        return elliptic_sum(field, p["coeffs"], p["degree"], p["lam"], M)
    except KeyError as missing:
        raise ParameterError(
            f"partial-sum payload for {request.kind!r} is missing key {missing}"
        ) from None
