"""State-space realizations, Riesz projectors and Fourier coefficients.

Run with ``python3 demos/realizations.py``.
"""
import numpy as np

from bcwiener import (
    PartialFractions,
    PolePart,
    build_realization,
    eval_realization,
    fourier_coefficients,
    riesz_projection,
    spectral_fourier_coeffs,
    stein_solve,
)

# 1 + 1/(z - 1/2) - 1/(z - 2) + (1/2)/(z - 2)^2
pf = PartialFractions(
    [[1.0]],
    (PolePart(0.5, ([[1.0]],)), PolePart(2.0, ([[-1.0]], [[0.5]]))),
)
R = build_realization(pf)
print("order", R.order, "eigenvalues", np.round(R.eigenvalues(), 12))
z = 0.3 + 0.4j
print("realization matches the rational function:", np.allclose(eval_realization(R, z), pf(z)))

P = riesz_projection(R.A)
print("rank of the outside projector:", P.rank)
F = fourier_coefficients(R, -3, 3, P)
print("Fourier coefficients n = -3..3:", np.round(F.coeffs[:, 0, 0].real, 10))

# coefficients of the density |d + c z (1 - a z)^-1 b|^2 via a Stein equation
a, b, c, d = 0.5, 1.0, 1.0, 1.0
X = stein_solve([[a]], [[b]])
print("\nStein solution X =", X[0, 0].real)
print("density coefficients k = 0..2:",
      [round(float(spectral_fourier_coeffs([[a]], [[b]], [[c]], [[d]], k)[0, 0].real), 12) for k in range(3)])
