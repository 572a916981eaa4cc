"""Bessel functions of the first kind for the orders the ball kernels need.

Supported orders are the integers and half-integers that arise as N/2 or
N/2 - 1 in low dimension.  Half-integer orders use their elementary closed
forms (with ascending series near zero, where the closed forms cancel);
integer orders use the ascending series up to a switch point and the Hankel
large-argument expansion beyond it.  The target is absolute accuracy 1e-10
on [0, 1000], checked against an independent high-precision oracle in the
test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError

# ascending series is numerically safe below this; the Hankel expansion is
# at full accuracy above it
T_SWITCH = 15.0
_SERIES_TERMS = 64
_SMALL_HALF = 0.5  # below this, half-integer closed forms lose digits


def _ascending_series(nu: float, t: np.ndarray) -> np.ndarray:
    """sum_k (-1)^k (t/2)^{nu+2k} / (k! Gamma(nu+k+1)), Kahan-compensated."""
    half = t / 2.0
    term = half**nu / math.gamma(nu + 1.0)
    total = np.zeros_like(t)
    carry = np.zeros_like(t)
    quarter_sq = half * half
    for k in range(1, _SERIES_TERMS + 1):
        y = term - carry
        fresh = total + y
        carry = (fresh - total) - y
        total = fresh
        term = term * (-quarter_sq) / (k * (nu + k))
    return total


def _hankel(nu: float, t: np.ndarray) -> np.ndarray:
    """Large-argument expansion, truncated where the terms stop shrinking."""
    mu = 4.0 * nu * nu
    inv8t = 1.0 / (8.0 * t)
    p = np.ones_like(t)
    q = np.zeros_like(t)
    term = np.ones_like(t)
    active = np.ones_like(t, dtype=bool)
    for k in range(1, 24):
        factor = (mu - (2.0 * k - 1.0) ** 2) / k * inv8t
        nxt = term * factor
        # asymptotic series: freeze lanes once terms start growing
        active = active & (np.abs(nxt) < np.abs(term))
        term = np.where(active, nxt, 0.0)
        sign = (-1.0) ** (k // 2)
        if k % 2:
            q += sign * term
        else:
            p += sign * term
        if not np.any(active):
            break
    phase = t - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * t)) * (p * np.cos(phase) - q * np.sin(phase))


def _integer_order(nu: int, t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    low = t <= T_SWITCH
    if np.any(low):
        out[low] = _ascending_series(float(nu), t[low])
    if np.any(~low):
        out[~low] = _hankel(float(nu), t[~low])
    return out


def _half_order(nu: float, t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    small = t < _SMALL_HALF
    if np.any(small):
        out[small] = _ascending_series(nu, t[small])
    big = ~small
    if not np.any(big):
        return out
    tb = t[big]
    amp = np.sqrt(2.0 / (math.pi * tb))
    if nu == -0.5:
        val = amp * np.cos(tb)
    elif nu == 0.5:
        val = amp * np.sin(tb)
    elif nu == 1.5:
        val = amp * (np.sin(tb) / tb - np.cos(tb))
    else:  # nu == 2.5
        val = amp * ((3.0 / (tb * tb) - 1.0) * np.sin(tb) - 3.0 * np.cos(tb) / tb)
    out[big] = val
    return out


def bessel_j(nu: float, t):
    """J_nu(t) for nu in {-1/2, 0, 1/2, 1, 3/2, 2, 5/2, 3, ...}, t >= 0.

    Scalar in, scalar out; arrays are mapped elementwise.
    """
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ParameterError("argument must be finite and >= 0")
    nu = float(nu)
    out = np.empty_like(arr)
    # exact limits at t = 0, kept out of the series to avoid 0**nu noise
    zero = arr == 0.0
    out[zero] = 1.0 if nu == 0.0 else 0.0 if nu > 0.0 else np.inf
    pos = ~zero
    if nu >= 0.0 and nu == int(nu):
        out[pos] = _integer_order(int(nu), arr[pos])
    elif 2.0 * nu == int(2.0 * nu) and -0.5 <= nu <= 2.5:
        out[pos] = _half_order(nu, arr[pos])
    else:
        raise ParameterError(
            f"order {nu} not supported; need a non-negative integer or a "
            "half-integer in [-1/2, 5/2]"
        )
    if scalar:
        return float(out[0])
    return out


def unit_ball_volume(N: int) -> float:
    """Lebesgue volume of the unit ball in N dimensions."""
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)


def unit_sphere_area(N: int) -> float:
    """Surface measure of the unit sphere in N dimensions (a 2-point set
    of measure 2 when N = 1)."""
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


def sphere_wave_integral(s, N: int):
    """Integral of e^{i s u.v} over unit vectors u, any fixed unit v.

    Closed form (2 pi)^{N/2} s^{1 - N/2} J_{N/2 - 1}(s); the limit at s = 0
    is the sphere's surface measure.  This is the angular factor that turns
    every radial Fourier integral into a one-dimensional one.
    """
    if N < 1:
        raise ParameterError(f"dimension must be >= 1, got {N}")
    arr = np.asarray(s, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0):
        raise ParameterError("arguments must be >= 0")
    out = np.empty_like(arr)
    # below 1e-4 the two-term Taylor expansion about s = 0 is exact to
    # ~1e-17 relative and sidesteps s^{1 - N/2} overflow at denormal s
    tiny = arr < 1e-4
    out[tiny] = unit_sphere_area(N) * (1.0 - arr[tiny] ** 2 / (2.0 * N))
    pos = ~tiny
    if np.any(pos):
        t = arr[pos]
        out[pos] = (
            (2.0 * math.pi) ** (N / 2.0)
            * t ** (1.0 - N / 2.0)
            * bessel_j(N / 2.0 - 1.0, t)
        )
    if scalar:
        return float(out[0])
    return out


def ball_fourier_integral(dist, radius: float, N: int):
    """Integral of e^{i d.x} over the ball {|x| < radius}, |d| = dist.

    Closed form (2 pi)^{N/2} radius^{N/2} |d|^{-N/2} J_{N/2}(radius |d|);
    the removable singularity at d = 0 is the ball volume.  Real, radial,
    and even; scalar in, scalar out.
    """
    if radius <= 0.0:
        raise ParameterError(f"ball radius must be positive, got {radius}")
    if N < 1:
        raise ParameterError(f"dimension must be >= 1, got {N}")
    arr = np.asarray(dist, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0):
        raise ParameterError("distances must be >= 0")
    out = np.empty_like(arr)
    # for radius * dist below 1e-4 the two-term Taylor expansion about the
    # removable singularity is exact to ~1e-17 relative, and it avoids the
    # overflow of d^{-N/2} at denormal distances
    t = radius * arr
    tiny = t < 1e-4
    out[tiny] = (
        unit_ball_volume(N) * radius**N * (1.0 - t[tiny] ** 2 / (2.0 * (N + 2.0)))
    )
    pos = ~tiny
    if np.any(pos):
        d = arr[pos]
        out[pos] = (
            (2.0 * math.pi) ** (N / 2.0)
            * radius ** (N / 2.0)
            * d ** (-N / 2.0)
            * bessel_j(N / 2.0, radius * d)
        )
    if scalar:
        return float(out[0])
    return out
