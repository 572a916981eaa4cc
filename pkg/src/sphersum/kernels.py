"""Windowed spherical-cut kernels and their Fourier coefficient tables.

The raw spherical partial-sum kernel has coefficients (2 pi)^-N on ball
modes.  Multiplying the kernel by the annulus window smears each mode into
a translate of the window coefficients, so the windowed ball kernel at cut
j has coefficients (2 pi)^-N sum_{|m|^2 < j} psi_{n-m}, and its increment
from cut j to j+1 is the windowed shell kernel over |m|^2 = j.  Tables are
built once per (window, j_max, band) and are immutable; everything
downstream consumes them by slicing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .errors import ParameterError, RangeError, ResourceError
from .windows import TWO_PI, PeriodizedWindow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelCoeffs:
    """Coefficient tables of the windowed ball and shell kernels.

    ball[j] holds the coefficients of the cut-j ball kernel on the mode
    grid |n_i| <= band (indexed n + band per axis), for j = 0 .. j_max + 1;
    shell[j] holds the cut-j shell kernel for j = 0 .. j_max.  ball[0] is
    zero (empty sum) and ball[j+1] - ball[j] = shell[j] by construction.
    Values are real because the window coefficients are real and even.
    """

    window: PeriodizedWindow
    j_max: int
    band: int
    ball: np.ndarray
    shell: np.ndarray

    @property
    def dimension(self) -> int:
        return self.window.dimension

    def _mode_index(self, n) -> tuple[int, ...]:
        idx = []
        for c in np.atleast_1d(np.asarray(n)):
            s = int(c) + self.band
            if not 0 <= s <= 2 * self.band:
                raise RangeError(f"mode {n!r} outside the tabulated band {self.band}")
            idx.append(s)
        if len(idx) != self.dimension:
            raise RangeError(f"mode {n!r} has wrong dimension")
        return tuple(idx)

    def ball_coeff(self, j: int, n) -> complex:
        """Coefficient of the cut-j windowed ball kernel at mode n."""
        if not 0 <= j <= self.j_max + 1:
            raise RangeError(f"cut {j} outside the tabulated range {self.j_max + 1}")
        return complex(self.ball[(j, *self._mode_index(n))])

    def shell_coeff(self, j: int, n) -> complex:
        """Coefficient of the cut-j windowed shell kernel at mode n."""
        if not 0 <= j <= self.j_max:
            raise RangeError(f"cut {j} outside the tabulated range {self.j_max}")
        return complex(self.shell[(j, *self._mode_index(n))])


def build_kernel_coeffs(
    window: PeriodizedWindow, j_max: int, band: int
) -> KernelCoeffs:
    """Tabulate windowed kernel coefficients for all cuts j <= j_max.

    Each shell point v contributes the translated window slice
    psi_{n - v} over the mode grid; window coefficients outside the stored
    table are treated as zero, with the size of the neglected mass logged
    from the fitted sixth-order decay constant.
    """
    if j_max < 0:
        raise ParameterError(f"j_max must be >= 0, got {j_max}")
    if band < 0:
        raise ParameterError(f"band must be >= 0, got {band}")
    N = window.dimension
    M = window.grid_size
    width = 2 * band + 1
    cells = (j_max + 2) * width**N
    if cells > lattice.POINT_BUDGET:
        raise ResourceError(
            f"kernel table of {cells} cells exceeds the budget of {lattice.POINT_BUDGET}"
        )
    reach = math.isqrt(j_max) if j_max else 0
    pad = max(0, band + reach - (M // 2 - 1))
    if pad:
        c6 = window.decay_constants.get(6, math.inf)
        logger.info(
            "window table truncated: modes beyond |m_i| <= %d treated as zero, "
            "per-coefficient bound ~ %.3e",
            M // 2,
            c6 * (1.0 + M // 2) ** -6,
        )
    table = window.coeffs
    if pad:
        padded = np.zeros((M + 2 * pad,) * N)
        padded[(slice(pad, pad + M),) * N] = table
        table = padded
    origin = pad + M // 2

    shell = np.zeros((j_max + 1,) + (width,) * N)
    for j in range(j_max + 1):
        for v in lattice.sphere_shell(j, N):
            window_slice = tuple(
                slice(origin - band - int(c), origin + band + 1 - int(c)) for c in v
            )
            shell[j] += table[window_slice]
    shell *= TWO_PI**-N

    ball = np.zeros((j_max + 2,) + (width,) * N)
    np.cumsum(shell, axis=0, out=ball[1:])
    ball.setflags(write=False)
    shell.setflags(write=False)
    return KernelCoeffs(window=window, j_max=j_max, band=band, ball=ball, shell=shell)


def dirichlet_kernel(x, lam: float, N: int) -> complex:
    """Raw spherical-cut kernel (2 pi)^-N sum over |n|^2 < lam of e^{i n.x}.

    Real up to rounding for every x because ball modes come in +/- pairs;
    the complex value is returned unreduced so callers can check that.
    """
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.shape != (N,):
        raise ParameterError(f"point {x!r} does not have dimension {N}")
    modes = lattice.enumerate_ball(lam, N)
    if modes.shape[0] == 0:
        return 0.0 + 0.0j
    return complex(TWO_PI**-N * np.sum(np.exp(1j * (modes @ point))))
