"""Inversion and spectral factorization of bicomplex Wiener series.

Both operations run on the idempotent channels: a bicomplex series is
invertible (resp. positive) on the distinguished boundary exactly when each
channel is invertible (resp. positive) on the unit circle, and the channel
results recombine into the bicomplex answer.  The sharp route instead factors
the ``2p x 2p`` sharp-symmetric embedding as an ordinary complex series.

Factors are computed with Wilson's Newton-type iteration on a uniform grid
of ``N`` angles and truncated to ``0 <= n <= K``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import (
    NoConvergence,
    NormalizationUnavailable,
    NotInvertibleOnBoundary,
    NotPositive,
    NotRelated,
    NotSharpSymmetric,
    ShapeMismatch,
)
from .linalg import DEFAULT_SYM_RTOL, op_norm, sharp_conjugate
from .series import (
    BCLaurentSeries,
    ChannelSeries,
    default_grid_size,
    grid,
    is_power_of_two,
    is_sharp_symmetric_series,
    merge_channels,
    split_channels,
)

__all__ = [
    "FactorOptions",
    "SeriesResult",
    "UnitaryCertificate",
    "invert",
    "invert_channel",
    "spectral_factorize",
    "factorize_channel",
    "factor_uniqueness_unitary",
    "sharp_route_factorize",
    "similarity_defect",
]


def max_workers() -> int:
    """Worker cap from ``BCW_THREADS`` (default 2, one per channel)."""
    try:
        return max(1, int(os.environ.get("BCW_THREADS", "2")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FactorOptions:
    K: int | None = None
    N: int | None = None
    newton_tol: float = 1e-10
    max_iter: int = 60
    pd_tol: float | None = None
    normalization: Literal["pd0", "at_one"] = "pd0"
    at_one_tol: float = 1e-8

    def __post_init__(self):
        if self.normalization not in ("pd0", "at_one"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.N is not None and not is_power_of_two(self.N):
            raise ValueError(f"N must be a power of two, got {self.N}")
        if self.K is not None and self.K < 0:
            raise ValueError("K must be nonnegative")


@dataclass(frozen=True)
class SeriesResult:
    """A computed series plus its numerical certificate.

    ``residual`` is the sup over a grid twice as fine as the computation grid
    (summed over channels for bicomplex input); ``tail_mass`` is the norm
    mass discarded by truncation to the reported window.
    """

    series: BCLaurentSeries | ChannelSeries
    residual: float
    tail_mass: float
    N: int
    K: int
    iterations: tuple[int, ...] = ()
    info: dict = field(default_factory=dict)

    def report(self) -> dict:
        out = {
            "residual": self.residual,
            "tail_mass": self.tail_mass,
            "N": self.N,
            "K": self.K,
            "iterations": list(self.iterations),
        }
        out.update(self.info)
        return out


def _channel_map(fn, channels):
    if max_workers() == 1:
        return [fn(i, c) for i, c in enumerate(channels, start=1)]
    with ThreadPoolExecutor(max_workers=min(max_workers(), len(channels))) as ex:
        futures = [ex.submit(fn, i, c) for i, c in enumerate(channels, start=1)]
        return [f.result() for f in futures]


def _spectrum(values: np.ndarray) -> np.ndarray:
    """DFT coefficients of grid values, index ``n mod N``."""
    return np.fft.fft(values, axis=0) / values.shape[0]


def _window(spec: np.ndarray, lo: int, hi: int) -> np.ndarray:
    return spec[np.arange(lo, hi + 1) % spec.shape[0]]


def _discarded(spec: np.ndarray, lo: int, hi: int) -> float:
    N = spec.shape[0]
    kept = set((np.arange(lo, hi + 1) % N).tolist())
    return float(sum(op_norm(spec[k]) for k in range(N) if k not in kept))


# --------------------------------------------------------------------------
# inversion


def invert_channel(c: ChannelSeries, K: int, N: int, tol: float, channel: int = 1) -> SeriesResult:
    p, q = c.shape
    if p != q:
        raise ShapeMismatch(f"inversion needs square coefficients, got {c.shape}")
    values = c.grid_values(N)
    sig = np.linalg.svd(values, compute_uv=False)[:, -1]
    bad = int(np.argmin(sig))
    if sig[bad] <= tol:
        raise NotInvertibleOnBoundary(channel, float(grid(N)[bad]), float(sig[bad]))
    spec = _spectrum(np.linalg.inv(values))
    g = ChannelSeries(-K, _window(spec, -K, K))
    fine = 2 * N
    prod = c.grid_values(fine) @ g.grid_values(fine) - np.eye(p)
    residual = float(np.max(np.linalg.norm(prod, 2, axis=(1, 2))))
    return SeriesResult(g, residual, _discarded(spec, -K, K), N, K)


def invert(f: BCLaurentSeries, K: int | None = None, N: int | None = None, tol: float | None = None) -> SeriesResult:
    """Inverse of a bicomplex Wiener series, truncated to ``|n| <= K``.

    Each channel is sampled on the ``N``-grid, inverted pointwise, and turned
    back into coefficients by FFT.

    Parameters
    ----------
    f : BCLaurentSeries
        Square series.
    K : int, optional
        Truncation order; defaults to ``N // 4``.
    N : int, optional
        Grid size (power of two); defaults to :func:`default_grid_size`.
    tol : float, optional
        Singular-value floor; defaults to ``1e-10 * ||f||``.

    Raises
    ------
    NotInvertibleOnBoundary
        If some channel value has smallest singular value ``<= tol``.
    """
    if f.p != f.q:
        raise ShapeMismatch(f"inversion needs a square series, got {f.shape}")
    N = N or default_grid_size(f.n_min, f.n_max)
    if not is_power_of_two(N):
        raise ValueError(f"N must be a power of two, got {N}")
    K = N // 4 if K is None else K
    if N < 2 * K + 2:
        raise ValueError(f"N={N} too small for K={K}")
    if tol is None:
        tol = 1e-10 * f.norm()
    parts = [invert_channel(c, K, N, tol, i) for i, c in enumerate(split_channels(f), start=1)]
    g = merge_channels(parts[0].series, parts[1].series)
    return SeriesResult(
        g,
        residual=parts[0].residual + parts[1].residual,
        tail_mass=parts[0].tail_mass + parts[1].tail_mass,
        N=N,
        K=K,
    )


# --------------------------------------------------------------------------
# factorization


def _causal_half(values: np.ndarray) -> np.ndarray:
    """Keep lags ``n > 0`` and half of lag 0, on grid values."""
    N = values.shape[0]
    spec = np.fft.fft(values, axis=0)
    spec[0] *= 0.5
    spec[N // 2 :] = 0
    return np.fft.ifft(spec, axis=0)


def _hermitian_check(S: np.ndarray, pd_tol: float, channel: int, thetas: np.ndarray) -> np.ndarray:
    asym = np.linalg.norm(S - S.conj().transpose(0, 2, 1), 2, axis=(1, 2))
    m = int(np.argmax(asym))
    if asym[m] > max(pd_tol, 1e-12):
        raise NotPositive(channel, float(thetas[m]), f"not Hermitian, defect {asym[m]:.3e}")
    S = (S + S.conj().transpose(0, 2, 1)) / 2
    lam = np.linalg.eigvalsh(S)[:, 0]
    m = int(np.argmin(lam))
    if lam[m] <= pd_tol:
        raise NotPositive(channel, float(thetas[m]), f"smallest eigenvalue {lam[m]:.3e}")
    return S


def factorize_channel(c: ChannelSeries, opts: FactorOptions = FactorOptions(), channel: int = 1) -> SeriesResult:
    """Outer factor ``c_+`` of a positive complex matrix series, ``c = c_+ c_+^*``.

    Wilson's iteration ``W <- W ([W^-1 S W^-*]_+ + I/2)`` on grid values ``S``,
    started from the Cholesky factor of the zeroth coefficient, where
    ``[.]_+`` keeps positive lags and half of lag 0.
    """
    p, q = c.shape
    if p != q:
        raise ShapeMismatch(f"factorization needs square coefficients, got {c.shape}")
    N = opts.N or default_grid_size(c.n_min, c.n_max)
    K = opts.K if opts.K is not None else max(c.n_max, -c.n_min, 0)
    if N < 2 * K + 2:
        raise ValueError(f"N={N} too small for K={K}")
    fnorm = c.norm()
    pd_tol = opts.pd_tol if opts.pd_tol is not None else 1e-10 * fnorm
    thetas = grid(N)
    S = _hermitian_check(c.grid_values(N), pd_tol, channel, thetas)
    scale = float(np.max(np.linalg.norm(S, 2, axis=(1, 2))))

    g0 = c.coeff(0)
    W0 = np.linalg.cholesky((g0 + g0.conj().T) / 2)
    W = np.broadcast_to(W0, S.shape).copy()
    eye = np.eye(p)

    def sweep(W):
        Winv = np.linalg.inv(W)
        g = Winv @ S @ Winv.conj().transpose(0, 2, 1)
        W = W @ (_causal_half(g) + eye / 2)
        WW = W @ W.conj().transpose(0, 2, 1)
        return W, float(np.max(np.linalg.norm(S - WW, 2, axis=(1, 2)))) / scale

    residual = np.inf
    for it in range(1, opts.max_iter + 1):
        W, residual = sweep(W)
        if residual < opts.newton_tol:
            break
    else:
        raise NoConvergence(opts.max_iter, residual)
    # convergence is quadratic, so one more sweep usually reaches rounding level
    W2, r2 = sweep(W)
    if r2 < residual:
        W, it = W2, it + 1

    spec = _spectrum(W)
    factor = ChannelSeries(0, _window(spec, 0, K))
    tail = _discarded(spec, 0, K)
    factor = _normalize(factor, opts)

    fine = 2 * N
    F = factor.grid_values(fine)
    final = float(np.max(np.linalg.norm(c.grid_values(fine) - F @ F.conj().transpose(0, 2, 1), 2, axis=(1, 2))))
    return SeriesResult(factor, final, tail, N, K, (it,))


def _normalize(factor: ChannelSeries, opts: FactorOptions) -> ChannelSeries:
    if opts.normalization == "pd0":
        # a0 = P Q with P Hermitian PD; right-multiply by Q^* so the new a0 is P
        Q, _ = scipy.linalg.polar(factor.coeff(0), side="left")
        return factor.right_multiply(Q.conj().T)
    at_one = factor.eval(0.0)
    defect = op_norm(at_one @ at_one.conj().T - np.eye(factor.shape[0]))
    if defect > opts.at_one_tol:
        raise NormalizationUnavailable(
            f"f(1) differs from I by {defect:.3e}; use normalization='pd0'"
        )
    return factor.right_multiply(np.linalg.inv(at_one))


def spectral_factorize(f: BCLaurentSeries, opts: FactorOptions = FactorOptions()) -> SeriesResult:
    """Causal factor ``f_+`` with ``f = f_+ f_+^*`` on the distinguished boundary.

    Each idempotent channel must be Hermitian positive definite on the circle.
    With ``normalization='pd0'`` (default) the zeroth coefficient of each
    channel factor is Hermitian positive definite; ``'at_one'`` instead
    enforces ``f_+(1) = I`` and requires ``f(1) = I``.

    Raises
    ------
    NotPositive
        If a channel value is not Hermitian positive definite.
    NoConvergence
        If the iteration does not reach ``opts.newton_tol``.
    """
    if f.p != f.q:
        raise ShapeMismatch(f"factorization needs a square series, got {f.shape}")
    parts = _channel_map(lambda i, c: factorize_channel(c, opts, i), split_channels(f))
    factor = merge_channels(parts[0].series, parts[1].series)
    return SeriesResult(
        factor,
        residual=parts[0].residual + parts[1].residual,
        tail_mass=parts[0].tail_mass + parts[1].tail_mass,
        N=parts[0].N,
        K=parts[0].K,
        iterations=parts[0].iterations + parts[1].iterations,
    )


@dataclass(frozen=True)
class UnitaryCertificate:
    unitaries: tuple[np.ndarray, ...]
    residual: float
    unitarity_defect: float


def _link(a: ChannelSeries, b: ChannelSeries, N: int) -> tuple[np.ndarray, float, float]:
    for name, s in (("a", a), ("b", b)):
        if s.n_min < 0 and np.any(s.coeffs[: -s.n_min] != 0):
            raise ValueError(f"{name} is not causal")
    U = np.linalg.solve(a.coeff(0), b.coeff(0))
    defect = op_norm(U.conj().T @ U - np.eye(U.shape[0]))
    diff = a.right_multiply(U).grid_values(N) - b.grid_values(N)
    return U, float(np.max(np.linalg.norm(diff, 2, axis=(1, 2)))), defect


def factor_uniqueness_unitary(a, b, tol: float = 1e-6, N: int | None = None) -> UnitaryCertificate:
    """Certify ``b = a U`` with ``U = a_0^{-1} b_0`` unitary.

    Accepts two bicomplex series (one ``U`` per channel) or two complex
    series.  ``tol`` bounds both the unitarity defect ``||U^*U - I||`` and the
    sup-grid residual relative to ``max(1, ||b||)``.

    Raises
    ------
    NotRelated
        If either bound fails.
    """
    if isinstance(a, BCLaurentSeries):
        pairs = list(zip(split_channels(a), split_channels(b)))
        scale = max(1.0, b.norm())
    else:
        pairs = [(a, b)]
        scale = max(1.0, b.norm())
    if N is None:
        lo = min(x.n_min for pair in pairs for x in pair)
        hi = max(x.n_max for pair in pairs for x in pair)
        N = default_grid_size(lo, hi)
    links = [_link(x, y, N) for x, y in pairs]
    residual = sum(r for _, r, _ in links)
    defect = max(d for _, _, d in links)
    if defect > tol:
        raise NotRelated(f"a_0^-1 b_0 is not unitary (defect {defect:.3e})")
    if residual > tol * scale:
        raise NotRelated(f"a U differs from b by {residual:.3e} on the grid")
    return UnitaryCertificate(tuple(U for U, _, _ in links), residual, defect)


# --------------------------------------------------------------------------
# sharp route


def sharp_route_factorize(
    F: ChannelSeries,
    opts: FactorOptions = FactorOptions(),
    tol_sym: float = DEFAULT_SYM_RTOL,
    cert_tol: float = 1e-8,
) -> SeriesResult:
    """Factor a sharp-symmetric positive ``2p x 2p`` complex series.

    The factor is computed as for any complex series; it is then certified
    sharp-symmetric (relative defect ``<= cert_tol``) and replaced by its
    average with its sharp conjugate.

    Raises
    ------
    NotSharpSymmetric
        If the input coefficients, or the computed factor, are not
        sharp-symmetric.
    """
    if not is_sharp_symmetric_series(F, tol_sym):
        raise NotSharpSymmetric("input series has a non sharp-symmetric coefficient")
    res = factorize_channel(F, opts, channel=0)
    Fp = res.series
    sharp = Fp.map_coeffs(sharp_conjugate)
    defect = float(max(np.linalg.norm(c) for c in (Fp - sharp).coeffs)) / max(Fp.norm(), 1.0)
    if defect > cert_tol:
        raise NotSharpSymmetric(f"factor sharp defect {defect:.3e} exceeds {cert_tol:.1e}")
    sym = ChannelSeries(Fp.n_min, (Fp.coeffs + sharp.coeffs) / 2)
    info = dict(res.info, sharp_defect=defect)
    return SeriesResult(sym, res.residual, res.tail_mass, res.N, res.K, res.iterations, info)


def similarity_defect(F: ChannelSeries, Y) -> float:
    """``max_n ||F_n - Y F_n Y^{-1}||_F``; zero for a Y-symmetric series."""
    Y = np.asarray(Y, dtype=complex)
    Yinv = np.linalg.inv(Y)
    return float(max(np.linalg.norm(c - Y @ c @ Yinv) for c in F.coeffs))
