"""Truncated Laurent series with complex or bicomplex matrix coefficients.

:class:`ChannelSeries` is a complex ``p x q`` matrix Laurent polynomial
``sum_n c_n e^{in theta}``; it represents one idempotent channel of a
bicomplex series, and also any plain complex series (e.g. a ``2p x 2p``
sharp-symmetric embedding).

:class:`BCLaurentSeries` holds bicomplex coefficients in cartesian form.  On
the boundary point ``Z = e^{it} e^{js}`` its channels are evaluated at
``e^{i(t-s)}`` and ``e^{i(t+s)}`` respectively.

Coefficients are stored densely as an array of shape ``(L, p, q)`` together
with the index ``n_min`` of the first slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .bicomplex import BoundaryPoint
from .errors import OddDimension, ShapeMismatch
from .linalg import (
    DEFAULT_SYM_RTOL,
    BCMatrix,
    embed_sharp,
    is_sharp_symmetric,
    op_norm,
)

__all__ = [
    "ChannelSeries",
    "BCLaurentSeries",
    "evaluate",
    "wiener_norm",
    "multiply",
    "project",
    "split_channels",
    "merge_channels",
    "coefficients_from_samples",
    "is_sharp_symmetric_series",
    "tail_mass",
    "default_grid_size",
    "grid",
]


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def default_grid_size(n_min: int, n_max: int) -> int:
    """Smallest power of two ``>= max(256, 8 * (n_max - n_min))``."""
    target = max(256, 8 * (n_max - n_min))
    return 1 << (target - 1).bit_length()


def grid(N: int) -> np.ndarray:
    """The angles ``2 pi m / N``, ``m = 0..N-1``."""
    return 2 * np.pi * np.arange(N) / N


def _as_stack(coeffs, p=None, q=None) -> np.ndarray:
    arr = np.array(coeffs, dtype=complex)
    if arr.ndim == 1 and p == 1 and q == 1:
        arr = arr.reshape(-1, 1, 1)
    if arr.ndim != 3:
        raise ValueError(f"coefficient stack must be 3-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    return arr


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    La, Lb = a.shape[0], b.shape[0]
    out = np.zeros((La + Lb - 1, a.shape[1], b.shape[2]), dtype=complex)
    for i in range(La):
        out[i : i + Lb] += a[i] @ b
    return out


def _wrap_to_grid(coeffs: np.ndarray, n_min: int, N: int) -> np.ndarray:
    """Fold coefficients onto ``Z/NZ`` (exact for evaluation on the N-grid)."""
    buf = np.zeros((N,) + coeffs.shape[1:], dtype=complex)
    idx = (n_min + np.arange(coeffs.shape[0])) % N
    np.add.at(buf, idx, coeffs)
    return buf


@dataclass(frozen=True, eq=False)
class ChannelSeries:
    """Complex matrix Laurent polynomial ``sum_{n=n_min}^{n_max} c_n z^n``."""

    n_min: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_stack(self.coeffs)
        if arr.shape[0] == 0:
            raise ValueError("a series needs at least one coefficient slot")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "n_min", int(self.n_min))

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], shape: tuple[int, int] | None = None) -> ChannelSeries:
        mats = {int(n): np.atleast_2d(np.asarray(c, dtype=complex)) for n, c in terms.items()}
        if not mats:
            if shape is None:
                raise ValueError("empty series needs an explicit shape")
            return cls.zeros(*shape)
        shapes = {m.shape for m in mats.values()}
        if len(shapes) != 1 or (shape is not None and shapes != {tuple(shape)}):
            raise ShapeMismatch(f"inconsistent coefficient shapes {shapes}")
        lo, hi = min(mats), max(mats)
        p, q = shapes.pop()
        arr = np.zeros((hi - lo + 1, p, q), dtype=complex)
        for n, m in mats.items():
            arr[n - lo] = m
        return cls(lo, arr)

    @classmethod
    def zeros(cls, p: int, q: int) -> ChannelSeries:
        return cls(0, np.zeros((1, p, q), dtype=complex))

    @classmethod
    def constant(cls, C) -> ChannelSeries:
        C = np.atleast_2d(np.asarray(C, dtype=complex))
        return cls(0, C[None])

    # views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    @property
    def n_max(self) -> int:
        return self.n_min + self.coeffs.shape[0] - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def coeff(self, n: int) -> np.ndarray:
        if self.n_min <= n <= self.n_max:
            return self.coeffs[n - self.n_min]
        return np.zeros(self.shape, dtype=complex)

    def terms(self):
        for n, c in zip(self.indices, self.coeffs):
            yield int(n), c

    # evaluation -------------------------------------------------------------

    def eval(self, theta):
        """Value at ``e^{i theta}``; ``theta`` may be a scalar or an array."""
        th = np.asarray(theta, dtype=float)
        phases = np.exp(1j * np.multiply.outer(th, self.indices))
        return np.tensordot(phases, self.coeffs, axes=([-1], [0]))

    def grid_values(self, N: int) -> np.ndarray:
        """Values at ``theta_m = 2 pi m / N`` via one inverse FFT."""
        return N * np.fft.ifft(_wrap_to_grid(self.coeffs, self.n_min, N), axis=0)

    # algebra ------------------------------------------------------------------

    def _check_same_shape(self, other: ChannelSeries):
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: ChannelSeries) -> ChannelSeries:
        self._check_same_shape(other)
        lo, hi = min(self.n_min, other.n_min), max(self.n_max, other.n_max)
        arr = np.zeros((hi - lo + 1,) + self.shape, dtype=complex)
        arr[self.n_min - lo : self.n_max - lo + 1] += self.coeffs
        arr[other.n_min - lo : other.n_max - lo + 1] += other.coeffs
        return ChannelSeries(lo, arr)

    def __neg__(self) -> ChannelSeries:
        return ChannelSeries(self.n_min, -self.coeffs)

    def __sub__(self, other: ChannelSeries) -> ChannelSeries:
        return self + (-other)

    def __matmul__(self, other: ChannelSeries) -> ChannelSeries:
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return ChannelSeries(self.n_min + other.n_min, _convolve(self.coeffs, other.coeffs))

    def right_multiply(self, M) -> ChannelSeries:
        return ChannelSeries(self.n_min, self.coeffs @ np.asarray(M, dtype=complex))

    def left_multiply(self, M) -> ChannelSeries:
        return ChannelSeries(self.n_min, np.asarray(M, dtype=complex) @ self.coeffs)

    def adjoint(self) -> ChannelSeries:
        """Series whose value on the circle is the conjugate transpose of ours."""
        flipped = self.coeffs[::-1].conj().transpose(0, 2, 1)
        return ChannelSeries(-self.n_max, flipped)

    def map_coeffs(self, fn: Callable[[np.ndarray], np.ndarray]) -> ChannelSeries:
        return ChannelSeries(self.n_min, np.stack([fn(c) for c in self.coeffs]))

    def truncate(self, lo: int, hi: int) -> ChannelSeries:
        """Keep only the coefficients with ``lo <= n <= hi``."""
        if hi < lo:
            raise ValueError("empty index window")
        arr = np.zeros((hi - lo + 1,) + self.shape, dtype=complex)
        a, b = max(lo, self.n_min), min(hi, self.n_max)
        if a <= b:
            arr[a - lo : b - lo + 1] = self.coeffs[a - self.n_min : b - self.n_min + 1]
        return ChannelSeries(lo, arr)

    def trim(self, atol: float = 0.0) -> ChannelSeries:
        """Drop leading and trailing coefficients with all entries ``<= atol``."""
        mags = np.abs(self.coeffs).reshape(self.coeffs.shape[0], -1).max(axis=1)
        keep = np.nonzero(mags > atol)[0]
        if keep.size == 0:
            return ChannelSeries.zeros(*self.shape)
        return ChannelSeries(self.n_min + keep[0], self.coeffs[keep[0] : keep[-1] + 1])

    def norm(self) -> float:
        """Wiener norm ``sum_n ||c_n||_op``."""
        return float(sum(op_norm(c) for c in self.coeffs))

    def tail_mass(self, K: int) -> float:
        return float(sum(op_norm(c) for n, c in self.terms() if abs(n) > K))

    def allclose(self, other: ChannelSeries, atol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        return float(np.max(np.abs((self - other).coeffs))) <= atol

    def __repr__(self):
        return f"ChannelSeries(n={self.n_min}..{self.n_max}, shape={self.shape})"


@dataclass(frozen=True, eq=False)
class BCLaurentSeries:
    """Bicomplex matrix Laurent polynomial ``sum_n f_n Z^n`` in cartesian storage."""

    n_min: int
    Z1: np.ndarray
    Z2: np.ndarray

    def __post_init__(self):
        z1, z2 = _as_stack(self.Z1), _as_stack(self.Z2)
        if z1.shape != z2.shape:
            raise ShapeMismatch(f"cartesian parts {z1.shape} and {z2.shape} differ")
        if z1.shape[0] == 0:
            raise ValueError("a series needs at least one coefficient slot")
        z1.flags.writeable = False
        z2.flags.writeable = False
        object.__setattr__(self, "Z1", z1)
        object.__setattr__(self, "Z2", z2)
        object.__setattr__(self, "n_min", int(self.n_min))

    @classmethod
    def from_terms(cls, terms: Mapping[int, BCMatrix], shape: tuple[int, int] | None = None) -> BCLaurentSeries:
        c1 = ChannelSeries.from_terms({n: M.M1 for n, M in terms.items()}, shape)
        c2 = ChannelSeries.from_terms({n: M.M2 for n, M in terms.items()}, c1.shape)
        c1, c2 = _align(c1, c2)
        return cls(c1.n_min, c1.coeffs, c2.coeffs)

    @classmethod
    def from_complex(cls, series: ChannelSeries) -> BCLaurentSeries:
        return cls(series.n_min, series.coeffs, np.zeros_like(series.coeffs))

    @classmethod
    def from_channels(cls, c1: ChannelSeries, c2: ChannelSeries) -> BCLaurentSeries:
        return merge_channels(c1, c2)

    @classmethod
    def scalar(cls, terms: Mapping[int, object]) -> BCLaurentSeries:
        """Scalar series from ``{n: value}`` where values are complex or Bicomplex."""
        mats = {}
        for n, v in terms.items():
            if isinstance(v, BCMatrix):
                mats[n] = v
            elif hasattr(v, "z1"):
                mats[n] = BCMatrix.from_scalar(v)
            else:
                mats[n] = BCMatrix.from_complex([[v]])
        return cls.from_terms(mats)

    # views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.Z1.shape[1], self.Z1.shape[2]

    @property
    def p(self) -> int:
        return self.shape[0]

    @property
    def q(self) -> int:
        return self.shape[1]

    @property
    def n_max(self) -> int:
        return self.n_min + self.Z1.shape[0] - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def coeff(self, n: int) -> BCMatrix:
        if self.n_min <= n <= self.n_max:
            k = n - self.n_min
            return BCMatrix(self.Z1[k], self.Z2[k])
        return BCMatrix.zeros(*self.shape)

    def terms(self):
        for k, n in enumerate(self.indices):
            yield int(n), BCMatrix(self.Z1[k], self.Z2[k])

    def channels(self) -> tuple[ChannelSeries, ChannelSeries]:
        return split_channels(self)

    # operations -------------------------------------------------------------

    def eval(self, pt: BoundaryPoint) -> BCMatrix:
        return evaluate(self, pt)

    def __add__(self, other: BCLaurentSeries) -> BCLaurentSeries:
        a1, a2 = self.channels()
        b1, b2 = other.channels()
        return merge_channels(a1 + b1, a2 + b2)

    def __sub__(self, other: BCLaurentSeries) -> BCLaurentSeries:
        a1, a2 = self.channels()
        b1, b2 = other.channels()
        return merge_channels(a1 - b1, a2 - b2)

    def __matmul__(self, other: BCLaurentSeries) -> BCLaurentSeries:
        return multiply(self, other)

    def star(self) -> BCLaurentSeries:
        """Coefficients ``(f_n)^*`` placed at ``-n``; pointwise adjoint on the boundary."""
        c1, c2 = self.channels()
        return merge_channels(c1.adjoint(), c2.adjoint())

    def embed(self) -> ChannelSeries:
        """Coefficientwise sharp-symmetric embedding (``2p x 2q`` complex series)."""
        return ChannelSeries(self.n_min, np.stack([embed_sharp(M) for _, M in self.terms()]))

    def norm(self) -> float:
        return wiener_norm(self)

    def tail_mass(self, K: int) -> float:
        return tail_mass(self, K)

    def truncate(self, lo: int, hi: int) -> BCLaurentSeries:
        c1, c2 = self.channels()
        return merge_channels(c1.truncate(lo, hi), c2.truncate(lo, hi))

    def allclose(self, other: BCLaurentSeries, atol: float = 1e-12) -> bool:
        a1, a2 = self.channels()
        b1, b2 = other.channels()
        return a1.allclose(b1, atol) and a2.allclose(b2, atol)

    def __repr__(self):
        return f"BCLaurentSeries(n={self.n_min}..{self.n_max}, shape={self.shape})"


def _align(c1: ChannelSeries, c2: ChannelSeries) -> tuple[ChannelSeries, ChannelSeries]:
    lo, hi = min(c1.n_min, c2.n_min), max(c1.n_max, c2.n_max)
    return c1.truncate(lo, hi), c2.truncate(lo, hi)


def split_channels(f: BCLaurentSeries) -> tuple[ChannelSeries, ChannelSeries]:
    """Idempotent channel series ``(f^1, f^2)`` with ``f_n = f^1_n e1 + f^2_n e2``."""
    return (
        ChannelSeries(f.n_min, f.Z1 - 1j * f.Z2),
        ChannelSeries(f.n_min, f.Z1 + 1j * f.Z2),
    )


def merge_channels(c1: ChannelSeries, c2: ChannelSeries) -> BCLaurentSeries:
    if c1.shape != c2.shape:
        raise ShapeMismatch(f"channel shapes {c1.shape} and {c2.shape} differ")
    c1, c2 = _align(c1, c2)
    return BCLaurentSeries(c1.n_min, (c1.coeffs + c2.coeffs) / 2, 1j * (c1.coeffs - c2.coeffs) / 2)


def evaluate(f: BCLaurentSeries, pt: BoundaryPoint) -> BCMatrix:
    """``sum_n f_n Z^n`` at ``Z = e^{it} e^{js}``, computed channelwise."""
    c1, c2 = split_channels(f)
    return BCMatrix.from_channels(c1.eval(pt.theta1), c2.eval(pt.theta2))


def wiener_norm(f: BCLaurentSeries) -> float:
    """``sum_n (||f^1_n||_op + ||f^2_n||_op)``."""
    c1, c2 = split_channels(f)
    return c1.norm() + c2.norm()


def tail_mass(f: BCLaurentSeries, K: int) -> float:
    """Wiener-norm mass carried by the coefficients with ``|n| > K``."""
    c1, c2 = split_channels(f)
    return c1.tail_mass(K) + c2.tail_mass(K)


def multiply(f: BCLaurentSeries, g: BCLaurentSeries) -> BCLaurentSeries:
    if f.q != g.p:
        raise ShapeMismatch(f"cannot multiply {f.shape} by {g.shape}")
    f1, f2 = split_channels(f)
    g1, g2 = split_channels(g)
    return merge_channels(f1 @ g1, f2 @ g2)


def project(f: BCLaurentSeries, side: str) -> BCLaurentSeries:
    """Causal (``plus``: ``n >= 0``) or anticausal (``minus``: ``n <= 0``) part."""
    if side == "plus":
        lo, hi = 0, max(f.n_max, 0)
    elif side == "minus":
        lo, hi = min(f.n_min, 0), 0
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    return f.truncate(lo, hi)


def coefficients_from_samples(sampler: Callable[[float], object], K: int, N: int) -> ChannelSeries:
    """Fourier coefficients ``|n| <= K`` of a circle function from N samples.

    The sampler is called at ``theta_m = 2 pi m / N`` and must return a complex
    matrix (or scalar).  The result is exact for trigonometric polynomials
    whose degree is below ``N/2``; otherwise coefficient ``n`` picks up the
    aliases ``n + kN``.
    """
    if not is_power_of_two(N):
        raise ValueError(f"N must be a power of two, got {N}")
    if N < 2 * K + 2:
        raise ValueError(f"N={N} too small for K={K}; need N >= 2K + 2")
    samples = np.stack([np.atleast_2d(np.asarray(sampler(th), dtype=complex)) for th in grid(N)])
    return samples_to_coefficients(samples, K)


def samples_to_coefficients(samples: np.ndarray, K: int) -> ChannelSeries:
    """Coefficients ``|n| <= K`` from values on the uniform ``N``-grid."""
    N = samples.shape[0]
    spec = np.fft.fft(samples, axis=0) / N
    idx = np.arange(-K, K + 1) % N
    return ChannelSeries(-K, spec[idx])


def is_sharp_symmetric_series(F: ChannelSeries, tol_sym: float = DEFAULT_SYM_RTOL) -> bool:
    p, q = F.shape
    if p % 2 or q % 2:
        raise OddDimension(f"sharp symmetry needs even dimensions, got {F.shape}")
    return all(is_sharp_symmetric(c, tol_sym) for c in F.coeffs)
