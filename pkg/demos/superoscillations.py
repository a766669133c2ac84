"""Superoscillating sequences and the approximation of Wiener series.

Run with ``python3 demos/superoscillations.py``.
"""
import numpy as np

from bcwiener import (
    BCLaurentSeries,
    Bicomplex,
    BoundaryPoint,
    approximation_error,
    superosc_coeffs,
    superosc_eval,
)

m, a = 64, 2.0
c = superosc_coeffs(m, a)
# the coefficients sum to 1 but their absolute values sum to a^m
print(f"m={m}, a={a}: sum |c_k| = {np.abs(c).sum():.3e}, a^m = {a ** m:.3e}")

# every frequency lies in [-1, 1], yet near t = 0 the sequence behaves like e^{iat}
for t in (0.05, 0.2, 0.5):
    print(f"t={t}: |F_m - e^(iat)| = {abs(superosc_eval(m, a, t) - np.exp(1j * a * t)):.2e}")

# approximating a series through superoscillating sums improves with m
# (terms with |n| <= 1 are kept exact, so only the higher ones contribute)
f = BCLaurentSeries.scalar({n: Bicomplex(1, 0.5j) * 2.0 ** -abs(n) for n in range(-4, 5)})
pts = [BoundaryPoint(x, y) for x in np.linspace(-0.5, 0.5, 3) for y in np.linspace(-0.5, 0.5, 3)]
for m in (16, 32, 64, 128):
    print(f"m={m}: max approximation error {approximation_error(f, m, pts):.3e}")
