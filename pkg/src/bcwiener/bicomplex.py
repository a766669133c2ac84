"""Bicomplex scalars.

A bicomplex number is ``Z = z1 + j z2`` with ``z1, z2`` complex and ``i, j``
commuting imaginary units.  Writing ``e1 = (1 + k)/2`` and ``e2 = (1 - k)/2``
with ``k = ij`` gives the idempotent form ``Z = lam1 e1 + lam2 e2`` where::

    lam1 = z1 - i z2,    lam2 = z1 + i z2

and all ring operations act independently on ``lam1`` and ``lam2``.  Values are
stored in cartesian form; the idempotent pair is computed on demand.

The ``dual_lie`` norm is ``|lam1| + |lam2|`` *without* a factor 1/2, so
``dual_lie(1) == 2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from .errors import ZeroDivisor

__all__ = [
    "Bicomplex",
    "HyperbolicNorm",
    "BoundaryPoint",
    "E1",
    "E2",
    "I",
    "J",
    "K",
    "ONE",
    "ZERO",
    "idempotent_decompose",
    "from_idempotent",
    "mul",
    "inverse",
    "conjugate",
    "norm",
    "boundary_value",
    "is_hyperbolic_positive",
]

DEFAULT_INV_RTOL = 1e-12


def _as_finite_complex(x, name: str) -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True, slots=True)
class Bicomplex:
    """Bicomplex number ``z1 + j z2``."""

    z1: complex = 0j
    z2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "z1", _as_finite_complex(self.z1, "z1"))
        object.__setattr__(self, "z2", _as_finite_complex(self.z2, "z2"))

    @classmethod
    def from_idempotent(cls, lam1, lam2) -> Bicomplex:
        lam1, lam2 = complex(lam1), complex(lam2)
        return cls((lam1 + lam2) / 2, 1j * (lam1 - lam2) / 2)

    @property
    def lambda1(self) -> complex:
        return self.z1 - 1j * self.z2

    @property
    def lambda2(self) -> complex:
        return self.z1 + 1j * self.z2

    def idempotent(self) -> tuple[complex, complex]:
        return self.lambda1, self.lambda2

    def is_complex(self, tol: float = 0.0) -> bool:
        return abs(self.z2) <= tol

    # ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other) -> Bicomplex | None:
        if isinstance(other, Bicomplex):
            return other
        if isinstance(other, (int, float, complex)):
            return Bicomplex(other, 0)
        return None

    def __add__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return Bicomplex(self.z1 + w.z1, self.z2 + w.z2)

    __radd__ = __add__

    def __sub__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return Bicomplex(self.z1 - w.z1, self.z2 - w.z2)

    def __rsub__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return w - self

    def __neg__(self):
        return Bicomplex(-self.z1, -self.z2)

    def __mul__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        # j^2 = -1
        return Bicomplex(
            self.z1 * w.z1 - self.z2 * w.z2,
            self.z1 * w.z2 + self.z2 * w.z1,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return self * inverse(w)

    def __rtruediv__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return w * inverse(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        l1, l2 = self.idempotent()
        return Bicomplex.from_idempotent(l1**n, l2**n)

    def __abs__(self):
        return norm(self, "dual_lie")

    def __repr__(self):
        return f"Bicomplex(z1={self.z1!r}, z2={self.z2!r})"


@dataclass(frozen=True, slots=True)
class HyperbolicNorm:
    """Hyperbolic-valued norm ``c1 e1 + c2 e2`` with ``c1, c2 >= 0``."""

    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 >= 0 and self.c2 >= 0):
            raise ValueError("hyperbolic norm coefficients must be nonnegative")

    def as_bicomplex(self) -> Bicomplex:
        return Bicomplex.from_idempotent(self.c1, self.c2)


@dataclass(frozen=True, slots=True)
class BoundaryPoint:
    """Point ``e^{it} e^{js}`` of the distinguished boundary."""

    t: float
    s: float

    def __post_init__(self):
        two_pi = 2 * math.pi
        object.__setattr__(self, "t", float(self.t) % two_pi)
        object.__setattr__(self, "s", float(self.s) % two_pi)

    # channel angles are reduced to [-pi, pi): superoscillatory approximants
    # are not 2 pi-periodic and are accurate only near 0

    @property
    def theta1(self) -> float:
        """Argument ``t - s`` of the first idempotent channel."""
        return _wrap(self.t - self.s)

    @property
    def theta2(self) -> float:
        """Argument ``t + s`` of the second idempotent channel."""
        return _wrap(self.t + self.s)


def _wrap(x: float) -> float:
    return (x + math.pi) % (2 * math.pi) - math.pi


ONE = Bicomplex(1, 0)
ZERO = Bicomplex(0, 0)
I = Bicomplex(1j, 0)
J = Bicomplex(0, 1)
K = Bicomplex(0, 1j)
E1 = Bicomplex(0.5, 0.5j)
E2 = Bicomplex(0.5, -0.5j)


def idempotent_decompose(Z: Bicomplex) -> tuple[complex, complex]:
    """Return the idempotent channels ``(lam1, lam2)`` of ``Z``."""
    return Z.lambda1, Z.lambda2


def from_idempotent(lam1, lam2) -> Bicomplex:
    return Bicomplex.from_idempotent(lam1, lam2)


def mul(Z: Bicomplex, W: Bicomplex) -> Bicomplex:
    return Z * W


def inverse(Z: Bicomplex, tol_inv: float | None = None) -> Bicomplex:
    """Multiplicative inverse ``lam1^-1 e1 + lam2^-1 e2``.

    Parameters
    ----------
    Z : Bicomplex
    tol_inv : float, optional
        Absolute threshold below which a channel counts as zero.  Defaults to
        ``1e-12 * dual_lie(Z)``.

    Raises
    ------
    ZeroDivisor
        If either channel is (numerically) zero, e.g. for multiples of ``e1``.
    """
    l1, l2 = Z.idempotent()
    if tol_inv is None:
        tol_inv = DEFAULT_INV_RTOL * (abs(l1) + abs(l2))
    if abs(l1) <= tol_inv or abs(l2) <= tol_inv or l1 == 0 or l2 == 0:
        raise ZeroDivisor(f"{Z!r} is a zero divisor (channels {l1!r}, {l2!r})")
    return Bicomplex.from_idempotent(1 / l1, 1 / l2)


ConjugateKind = Literal["bar", "dagger", "star"]


def conjugate(Z: Bicomplex, kind: ConjugateKind) -> Bicomplex:
    """Bicomplex conjugates.

    ``bar`` conjugates both components, ``dagger`` flips the sign of the
    ``j`` part, and ``star`` is their composition.  In channel terms ``star``
    conjugates each channel, while ``dagger`` swaps them.
    """
    if kind == "bar":
        return Bicomplex(Z.z1.conjugate(), Z.z2.conjugate())
    if kind == "dagger":
        return Bicomplex(Z.z1, -Z.z2)
    if kind == "star":
        return Bicomplex(Z.z1.conjugate(), -Z.z2.conjugate())
    raise ValueError(f"unknown conjugate kind {kind!r}")


NormKind = Literal["dual_lie", "lie", "hyperbolic"]


def norm(Z: Bicomplex, kind: NormKind = "dual_lie"):
    l1, l2 = abs(Z.lambda1), abs(Z.lambda2)
    if kind == "dual_lie":
        return l1 + l2
    if kind == "lie":
        return max(l1, l2)
    if kind == "hyperbolic":
        return HyperbolicNorm(l1, l2)
    raise ValueError(f"unknown norm kind {kind!r}")


def boundary_value(pt: BoundaryPoint) -> Bicomplex:
    """Return ``e^{it} e^{js} = e^{it} cos s + j e^{it} sin s``.

    Its channels are ``e^{i(t-s)}`` and ``e^{i(t+s)}``.
    """
    w = cmath.exp(1j * pt.t)
    return Bicomplex(w * math.cos(pt.s), w * math.sin(pt.s))


def is_hyperbolic_positive(Z: Bicomplex, tol: float = 1e-10) -> bool:
    """True iff both channels are real (to ``tol``) and exceed ``tol``."""
    return all(abs(lam.imag) <= tol and lam.real > tol for lam in Z.idempotent())
