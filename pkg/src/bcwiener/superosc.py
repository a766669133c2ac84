"""Superoscillatory sequences and superoscillatory approximation of Wiener series.

``F_m(t, a) = (cos(t/m) + i a sin(t/m))^m = sum_k c_k(m, a) e^{i t (1 - 2k/m)}``
uses only frequencies in ``[-1, 1]`` yet tends to ``e^{iat}`` as ``m -> oo``,
uniformly on compact sets, with error ``O(1/m)``.  The bicomplex version acts
on the two idempotent channels independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .bicomplex import Bicomplex, BoundaryPoint
from .linalg import BCMatrix, bc_operator_norm
from .series import BCLaurentSeries, split_channels

__all__ = [
    "SuperoscParams",
    "BCSuperoscParams",
    "superosc_coeffs",
    "superosc_eval",
    "superosc_sum",
    "bc_superosc_eval",
    "approximate_series",
    "approximation_error",
    "LOG_POLAR_THRESHOLD",
]

LOG_POLAR_THRESHOLD = 512


@dataclass(frozen=True)
class SuperoscParams:
    m: int
    a: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")


@dataclass(frozen=True)
class BCSuperoscParams:
    m: int
    a: float
    b: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")


def superosc_coeffs(m: int, a: float) -> np.ndarray:
    """``c_k = C(m, k) ((1+a)/2)^{m-k} ((1-a)/2)^k`` for ``k = 0..m``."""
    SuperoscParams(m, a)
    u, v = (1 + a) / 2, (1 - a) / 2
    return np.array([comb(m, k) * u ** (m - k) * v**k for k in range(m + 1)], dtype=float)


def superosc_sum(m: int, a: float, t) -> np.ndarray | complex:
    """``sum_k c_k e^{it(1 - 2k/m)}``, evaluated term by term in index order."""
    c = superosc_coeffs(m, a)
    freqs = 1 - 2 * np.arange(m + 1) / m
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(1j * np.multiply.outer(t_arr, freqs)) @ c
    return complex(out) if t_arr.ndim == 0 else out


def superosc_eval(m: int, a: float, t) -> np.ndarray | complex:
    """Closed form ``(cos(t/m) + i a sin(t/m))^m``.

    For ``m > LOG_POLAR_THRESHOLD`` the power is taken as
    ``|w|^m e^{i m arg w}`` so no intermediate product overflows first.
    """
    SuperoscParams(m, a)
    t_arr = np.asarray(t, dtype=float)
    w = np.cos(t_arr / m) + 1j * a * np.sin(t_arr / m)
    if m > LOG_POLAR_THRESHOLD:
        out = np.exp(m * np.log(np.abs(w))) * np.exp(1j * m * np.angle(w))
    else:
        out = w**m
    return complex(out) if t_arr.ndim == 0 else out


def bc_superosc_eval(params: BCSuperoscParams, x: float, y: float) -> Bicomplex:
    """``F_m(x, a) e1 + F_m(y, b) e2``."""
    return Bicomplex.from_idempotent(
        superosc_eval(params.m, params.a, x),
        superosc_eval(params.m, params.b, y),
    )


def _approx_channel(coeffs: np.ndarray, n_min: int, m: int, theta: float) -> np.ndarray:
    out = np.zeros(coeffs.shape[1:], dtype=complex)
    for k, c in enumerate(coeffs):
        n = n_min + k
        if not c.any():
            continue
        if -1 <= n <= 1:
            phase = np.exp(1j * n * theta)
        else:
            phase = superosc_eval(m, n, theta)
        out = out + c * phase
    return out


def approximate_series(f: BCLaurentSeries, m: int, pt: BoundaryPoint) -> BCMatrix:
    """Superoscillatory approximant of ``f`` at ``Z = e^{it} e^{js}``.

    Terms with ``n in {-1, 0, 1}`` are kept exactly; every other ``f_n Z^n``
    is replaced channelwise by ``f^l_n F_m(theta_l, n)`` with
    ``theta_1 = t - s`` and ``theta_2 = t + s``.  Negative ``n`` enter the
    coefficient formula directly as ``a = n``.
    """
    c1, c2 = split_channels(f)
    return BCMatrix.from_channels(
        _approx_channel(c1.coeffs, c1.n_min, m, pt.theta1),
        _approx_channel(c2.coeffs, c2.n_min, m, pt.theta2),
    )


def approximation_error(f: BCLaurentSeries, m: int, grid) -> float:
    """``max`` over ``grid`` of ``||f(Z) - approximant(Z)||`` in the bicomplex operator norm.

    ``grid`` is an iterable of :class:`BoundaryPoint` or ``(t, s)`` pairs.
    """
    worst = 0.0
    for pt in grid:
        if not isinstance(pt, BoundaryPoint):
            pt = BoundaryPoint(*pt)
        worst = max(worst, bc_operator_norm(f.eval(pt) - approximate_series(f, m, pt)))
    return worst
