"""Inversion and spectral factorization of bicomplex Wiener series.

Run with ``python3 demos/factorization.py``.
"""
import numpy as np

from bcwiener import (
    BCLaurentSeries,
    Bicomplex,
    FactorOptions,
    invert,
    spectral_factorize,
    split_channels,
)
from bcwiener.errors import NotPositive

# 1 - z/2 inverts to a geometric series in both channels
f = BCLaurentSeries.scalar({0: Bicomplex(1, 0), 1: Bicomplex(-0.5, 0)})
res = invert(f, K=40, N=256)
c1, _ = split_channels(res.series)
print("inverse of 1 - z/2, first coefficients:")
print(np.round(c1.coeffs[40:48, 0, 0].real, 6))
print("residual", res.residual, "tail", res.tail_mass)

# the density 2/z + 5 + 2z is |2 + z|^2 on the circle; the channels may differ
g = BCLaurentSeries.scalar({
    -1: Bicomplex.from_idempotent(2, 1.5),
    0: Bicomplex.from_idempotent(5, 3.25),
    1: Bicomplex.from_idempotent(2, 1.5),
})
fac = spectral_factorize(g, FactorOptions(K=4))
c1, c2 = split_channels(fac.series)
print("\nfactor, channel 1:", np.round(c1.coeffs[:, 0, 0].real, 10) + 0.0)
print("factor, channel 2:", np.round(c2.coeffs[:, 0, 0].real, 10) + 0.0)
print("iterations", fac.iterations, "residual", fac.residual)

# a density that changes sign on the circle is rejected
try:
    spectral_factorize(BCLaurentSeries.scalar({-1: Bicomplex(2, 0), 0: Bicomplex(1, 0), 1: Bicomplex(2, 0)}))
except NotPositive as exc:
    print("\nnot positive:", exc)
