"""A tour of partial-sum shapes on the 2-torus.

Builds a single-mode field and a random band-limited field, then compares
the spherical, square, and rectangular cuts: how fast each converges at a
point, and how the spherical cut sweeps mode shells one squared norm at a
time.  Run with ``python3 demos/partial_sum_tour.py``.
"""

import numpy as np

from sphersum.fields import SpectralField, random_field
from sphersum.sums import (
    rectangular_projection,
    spherical_projection,
    square_projection,
    sum_trajectory,
)


def single_mode(N: int, mode: tuple[int, ...]) -> SpectralField:
    band = max(1, max(abs(m) for m in mode))
    coeffs = np.zeros((2 * band + 1,) * N, dtype=complex)
    coeffs[tuple(m + band for m in mode)] = 1.0
    return SpectralField(N, band, coeffs)


def main() -> None:
    print("== single mode (2, 1): which cuts contain it? ==")
    field = single_mode(2, (2, 1))
    for lam in (4, 5, 6):
        kept = spherical_projection(field, lam).coeffs.any()
        print(f"  spherical cut lambda = {lam}: mode kept = {bool(kept)}"
              f"   (|n|^2 = 5 needs lambda > 5)")
    for k in (1, 2):
        kept = square_projection(field, k).coeffs.any()
        print(f"  square cut k = {k}:        mode kept = {bool(kept)}")
    kept = rectangular_projection(field, (2, 0)).coeffs.any()
    print(f"  rectangle (2, 0):          mode kept = {bool(kept)}  (needs |n_2| <= 0)")

    print("\n== random band-limited field: spherical sweep at two points ==")
    rng = np.random.default_rng(20260816)
    field = random_field(2, 12, rng, real_valued=True)
    points = np.array([[0.0, 0.0], [1.1, -0.7]])
    lambdas = [1, 2, 4, 8, 16, 32, 64, 128, 289]
    trajectory = sum_trajectory(field, lambdas, points)
    full = trajectory[-1]  # lambda = 2*12^2 + 1 covers the whole band
    print(f"  {'lambda':>7} {'|S at origin|':>14} {'gap to full':>12}"
          f" {'|S at (1.1,-0.7)|':>18} {'gap to full':>12}")
    for row, lam in enumerate(lambdas):
        gaps = np.abs(trajectory[row] - full)
        print(f"  {lam:>7} {abs(trajectory[row, 0]):>14.6f} {gaps[0]:>12.2e}"
              f" {abs(trajectory[row, 1]):>18.6f} {gaps[1]:>12.2e}")
    print("  the last cut reproduces the field exactly: the sweep has left the band")


if __name__ == "__main__":
    main()
