"""Bicomplex arithmetic through the idempotent channels.

Every bicomplex number splits as ``lam1 e1 + lam2 e2``; products, inverses
and norms act channel-wise.  Run with ``python3 demos/idempotent_algebra.py``.
"""
import numpy as np

from bcwiener import (
    E1,
    E2,
    BCMatrix,
    Bicomplex,
    BoundaryPoint,
    boundary_value,
    embed_sharp,
    idempotent_decompose,
    inverse,
    is_hyperbolic_positive,
    norm,
)

Z = Bicomplex(1 + 2j, 0.5 - 1j)
W = Bicomplex(-0.3j, 2.0)
print("Z =", Z)
print("channels of Z:", idempotent_decompose(Z))

# the product is computed channel-wise
l1, l2 = idempotent_decompose(Z * W)
a1, a2 = idempotent_decompose(Z)
b1, b2 = idempotent_decompose(W)
print("channel product error:", abs(l1 - a1 * b1) + abs(l2 - a2 * b2))

print("e1 * e2 =", E1 * E2, " e1 + e2 =", E1 + E2)
print("Z * Z^-1 =", Z * inverse(Z))
print("dual-Lie norm |Z| =", norm(Z), " hyperbolic norm:", norm(Z, "hyperbolic"))

# a point of the distinguished boundary and its two angles
pt = BoundaryPoint(0.7, -2.1)
print("boundary point", (pt.theta1, pt.theta2), "->", boundary_value(pt))

# hyperbolic positivity means both channels are real and nonnegative
P = Bicomplex.from_idempotent(3.0, 0.25)
print("is_hyperbolic_positive(3 e1 + 0.25 e2):", is_hyperbolic_positive(P))

# matrices embed as complex matrices of twice the size
rng = np.random.default_rng(0)
M = BCMatrix(rng.standard_normal((2, 2)), rng.standard_normal((2, 2)))
N = BCMatrix(rng.standard_normal((2, 2)), rng.standard_normal((2, 2)))
err = np.abs(embed_sharp(M @ N) - embed_sharp(M) @ embed_sharp(N)).max()
print("embedding is multiplicative, error:", err)
