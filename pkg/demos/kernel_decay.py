"""How windowed-kernel coefficients decay away from the cut sphere.

Builds the coefficient tables for a smooth window and measures, for each
shell index j, how the ball-kernel coefficients fall off with the distance
| |n| - sqrt(j) | from the cut.  The fitted constants C_l are the smallest
values making |coeff| <= C_l (1 + | |n| - sqrt(j) |)^{-l} hold everywhere
at this scan size; their stability under doubling is what the `coef2`
verification lemma checks.  Run with ``python3 demos/kernel_decay.py``.
"""

import numpy as np

from sphersum.fields import mode_norms_sq
from sphersum.kernels import build_kernel_coeffs
from sphersum.windows import WindowSpec, build_window


def main() -> None:
    band, j_max, M = 12, 36, 128
    window = build_window(WindowSpec(2.5, 0.5, 2), M)
    kc = build_kernel_coeffs(window, j_max, band)
    norms = np.sqrt(mode_norms_sq(2, band)).ravel()

    print(f"ball-kernel tables: band {band}, shells 0..{j_max}, grid {M}^2")
    print(f"{'l':>3} {'fitted C_l':>12}")
    for l in (1, 2, 4):
        worst = 0.0
        for j in range(1, j_max + 1):
            weight = (1.0 + np.abs(norms - np.sqrt(j))) ** l
            worst = max(worst, float(np.max(np.abs(kc.ball[j].ravel()) * weight)))
        print(f"{l:>3} {worst:>12.6f}")

    print("\nper-distance envelope at the largest shell, j =", j_max)
    j, l = j_max, 4
    dist = np.abs(norms - np.sqrt(j))
    mags = np.abs(kc.ball[j].ravel())
    weighted = mags * (1.0 + dist) ** l
    print(f"  {'| |n|-sqrt(j) |':>16} {'max |coeff|':>12} {'x (1+d)^4':>12}")
    for lo in range(0, 8):
        mask = (dist >= lo) & (dist < lo + 1)
        if mask.any():
            print(
                f"  [{lo:>5}, {lo + 1:>2})      {float(mags[mask].max()):>12.2e}"
                f" {float(weighted[mask].max()):>12.2e}"
            )
    print(
        "  the raw envelope decays polynomially with distance to the cut,"
        " so the\n  weighted column stays bounded by the fitted C_4 above"
    )


if __name__ == "__main__":
    main()
