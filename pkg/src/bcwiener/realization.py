"""Rational matrix functions as state-space realizations ``D + C (zI - A)^-1 B``.

Laurent coefficients on the unit circle use the convention
``f(z) = sum_n f_n z^n``.  With ``P`` the Riesz projector of ``A`` onto the
eigenvalues outside the closed unit disk::

    f_{-n} = C A^{n-1} (I - P) B                        n >= 1
    f_n    = D delta_{n0} - C (A|range P)^{-n-1} P B     n >= 0

The stable part of the resolvent generates the negative powers of ``z`` and
the unstable part the nonnegative ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import (
    DuplicatePole,
    EigenvalueOnCircle,
    NotSharpSymmetric,
    NotStable,
    OddDimension,
    ShapeMismatch,
    SingularA,
    SingularD,
    SingularResolvent,
    UnstableA,
)
from .linalg import BCMatrix, channel_unitary, embed_sharp, sharp_conjugate
from .series import ChannelSeries

__all__ = [
    "Realization",
    "PolePart",
    "PartialFractions",
    "RieszProjector",
    "build_realization",
    "eval_realization",
    "riesz_projection",
    "fourier_from_realization",
    "fourier_coefficients",
    "stein_solve",
    "stein_residual",
    "spectral_density_realization",
    "spectral_fourier_coeffs",
    "sharp_symmetrize_realization",
]

TOL_CIRCLE = 1e-8
QUAD_NODES = 4096


def _mat(x, rows=None, cols=None) -> np.ndarray:
    a = np.array(x, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim == 1 and a.size == 0 and rows is not None and cols is not None:
        a = a.reshape(rows, cols)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


@dataclass(frozen=True, eq=False)
class Realization:
    """``f(z) = D + C (z I_N - A)^{-1} B``; ``N`` may be zero."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        D = _mat(self.D)
        p, q = D.shape
        A = _mat(self.A, 0, 0)
        n = A.shape[0]
        B = _mat(self.B, n, q)
        C = _mat(self.C, p, n)
        if A.shape != (n, n) or B.shape != (n, q) or C.shape != (p, n):
            raise ShapeMismatch(
                f"inconsistent realization shapes A{A.shape} B{B.shape} C{C.shape} D{D.shape}"
            )
        for name, m in zip("ABCD", (A, B, C, D)):
            m.flags.writeable = False
            object.__setattr__(self, name, m)

    @property
    def order(self) -> int:
        return self.A.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.D.shape

    def eigenvalues(self) -> np.ndarray:
        if self.order == 0:
            return np.zeros(0, dtype=complex)
        return np.linalg.eigvals(self.A)

    def is_regular_on_circle(self, tol_circle: float = TOL_CIRCLE) -> bool:
        ev = self.eigenvalues()
        return bool(np.all(np.abs(np.abs(ev) - 1) > tol_circle))

    def __call__(self, z):
        return eval_realization(self, z)

    def on_circle(self, theta) -> np.ndarray:
        """Values at ``e^{i theta}`` for an array of angles, shape ``(T, p, q)``."""
        z = np.exp(1j * np.atleast_1d(np.asarray(theta, dtype=float)))
        if self.order == 0:
            return np.broadcast_to(self.D, z.shape + self.D.shape).copy()
        R = z[:, None, None] * np.eye(self.order) - self.A
        return self.D + self.C @ np.linalg.solve(R, np.broadcast_to(self.B, z.shape + self.B.shape))


@dataclass(frozen=True, eq=False)
class PolePart:
    """Principal part ``sum_k H_k / (z - p)^k`` at one pole."""

    p: complex
    H: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        H = tuple(_mat(h) for h in self.H)
        if not H:
            raise ValueError("a pole needs at least one coefficient")
        if len({h.shape for h in H}) != 1:
            raise ShapeMismatch("principal part coefficients differ in shape")
        object.__setattr__(self, "H", H)

    @property
    def order(self) -> int:
        return len(self.H)


@dataclass(frozen=True, eq=False)
class PartialFractions:
    """``f(z) = D + sum_m sum_k H_{k,m} / (z - p_m)^k``."""

    D: np.ndarray
    poles: tuple = ()

    def __post_init__(self):
        D = _mat(self.D)
        poles = tuple(pp if isinstance(pp, PolePart) else PolePart(*pp) for pp in self.poles)
        for pp in poles:
            if pp.H[0].shape != D.shape:
                raise ShapeMismatch(f"pole coefficient shape {pp.H[0].shape} != D shape {D.shape}")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "poles", poles)

    def __call__(self, z: complex) -> np.ndarray:
        out = self.D.copy()
        for pp in self.poles:
            for k, h in enumerate(pp.H, start=1):
                out = out + h / (z - pp.p) ** k
        return out


def build_realization(pf: PartialFractions, pole_tol: float = 0.0) -> Realization:
    """Block-diagonal realization with one Jordan-like block per pole.

    The block for a pole ``p`` of order ``k`` is ``p I`` plus identity blocks
    on the superdiagonal, ``B`` stacks ``H_1 .. H_k`` and ``C`` selects the
    first block row; the result is generally not minimal.

    Raises
    ------
    DuplicatePole
        If two poles coincide to within ``pole_tol``.
    """
    ps = [pp.p for pp in pf.poles]
    for i in range(len(ps)):
        for j in range(i):
            if abs(ps[i] - ps[j]) <= pole_tol:
                raise DuplicatePole(f"pole {ps[i]!r} appears more than once")
    a, b = pf.D.shape
    As, Bs, Cs = [], [], []
    for pp in pf.poles:
        k = pp.order
        shift = np.eye(k, k, 1)
        As.append(pp.p * np.eye(k * a) + np.kron(shift, np.eye(a)))
        Bs.append(np.vstack([h for h in pp.H]))
        Cs.append(np.hstack([np.eye(a)] + [np.zeros((a, a))] * (k - 1)))
    if not As:
        return Realization(np.zeros((0, 0)), np.zeros((0, b)), np.zeros((a, 0)), pf.D)
    return Realization(scipy.linalg.block_diag(*As), np.vstack(Bs), np.hstack(Cs), pf.D)


def eval_realization(R: Realization, z: complex, tol: float | None = None) -> np.ndarray:
    """``D + C solve(zI - A, B)``.

    Raises
    ------
    SingularResolvent
        If the smallest singular value of ``zI - A`` is ``<= tol``
        (default ``1e-12 * max(1, ||A||)``).
    """
    if R.order == 0:
        return R.D.copy()
    M = complex(z) * np.eye(R.order) - R.A
    if tol is None:
        tol = 1e-12 * max(1.0, float(np.linalg.norm(R.A, 2)))
    if np.linalg.svd(M, compute_uv=False)[-1] <= tol:
        raise SingularResolvent(f"z={z!r} is (numerically) an eigenvalue of A")
    return R.D + R.C @ np.linalg.solve(M, R.B)


# --------------------------------------------------------------------------
# Riesz projection


@dataclass(frozen=True, eq=False)
class RieszProjector:
    """Spectral projector of ``A``.

    ``side='outside'`` projects onto the invariant subspace for eigenvalues
    with ``|lambda| > 1``; ``side='inside'`` is the complementary projector
    ``(1/2 pi i) \\oint (zI - A)^{-1} dz``.
    """

    P: np.ndarray
    rank: int
    side: str = "outside"
    method: str = "schur"

    def complement(self) -> RieszProjector:
        other = "inside" if self.side == "outside" else "outside"
        n = self.P.shape[0]
        return RieszProjector(np.eye(n) - self.P, n - self.rank, other, self.method)

    def range_basis(self) -> np.ndarray:
        """Orthonormal basis of ``range(P)``."""
        if self.rank == 0:
            return np.zeros((self.P.shape[0], 0), dtype=complex)
        U, _, _ = np.linalg.svd(self.P)
        return U[:, : self.rank]


def _check_circle(A: np.ndarray, tol_circle: float) -> np.ndarray:
    ev = np.linalg.eigvals(A) if A.size else np.zeros(0, dtype=complex)
    near = np.abs(np.abs(ev) - 1) <= tol_circle
    if np.any(near):
        raise EigenvalueOnCircle(f"eigenvalue {ev[near][0]!r} lies on the unit circle")
    return ev


def riesz_projection(
    A,
    method: Literal["schur", "quadrature"] = "schur",
    side: Literal["outside", "inside"] = "outside",
    tol_circle: float = TOL_CIRCLE,
    n_nodes: int = QUAD_NODES,
) -> RieszProjector:
    """Spectral projector of ``A`` for the eigenvalues outside the unit disk.

    ``method='schur'`` reorders a complex Schur form so that the outside
    eigenvalues lead and decouples the blocks with a Sylvester solve;
    ``method='quadrature'`` applies the trapezoid rule with ``n_nodes`` nodes
    to ``P = I - (1/2 pi i) \\oint_{|z|=1} (zI - A)^{-1} dz``.

    Raises
    ------
    EigenvalueOnCircle
        If some eigenvalue has ``||lambda| - 1| <= tol_circle``.
    """
    A = _mat(A, 0, 0)
    n = A.shape[0]
    ev = _check_circle(A, tol_circle)
    k = int(np.sum(np.abs(ev) > 1))
    if method == "schur":
        if k in (0, n):
            P = np.eye(n, dtype=complex) * (k == n)
        else:
            T, Z, sdim = scipy.linalg.schur(A.astype(complex), output="complex", sort=lambda x: abs(x) > 1)
            # T = [[T11, T12], [0, T22]]; P_T = [[I, Y], [0, 0]] commutes with T
            # iff T11 Y - Y T22 = T12
            Y = scipy.linalg.solve_sylvester(T[:sdim, :sdim], -T[sdim:, sdim:], T[:sdim, sdim:])
            PT = np.zeros((n, n), dtype=complex)
            PT[:sdim, :sdim] = np.eye(sdim)
            PT[:sdim, sdim:] = Y
            P = Z @ PT @ Z.conj().T
    elif method == "quadrature":
        z = np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
        res = np.linalg.inv(z[:, None, None] * np.eye(n) - A)
        # dz = i z dtheta, so (1/2 pi i) dz -> z / n_nodes
        inside = np.sum(z[:, None, None] * res, axis=0) / n_nodes
        P = np.eye(n) - inside
    else:
        raise ValueError(f"unknown method {method!r}")
    proj = RieszProjector(P, k, "outside", method)
    return proj if side == "outside" else proj.complement()


# --------------------------------------------------------------------------
# Fourier coefficients


def _outside_projector(R: Realization, P) -> RieszProjector:
    if P is None:
        return riesz_projection(R.A)
    if isinstance(P, RieszProjector):
        if P.side != "outside":
            return P.complement()
        return P
    P = _mat(P)
    ev = _check_circle(R.A, TOL_CIRCLE)
    return RieszProjector(P, int(np.sum(np.abs(ev) > 1)))


def fourier_from_realization(R: Realization, P: RieszProjector | np.ndarray | None, n: int) -> np.ndarray:
    """Coefficient of ``z^n`` in the Laurent expansion of ``R`` on ``|z| = 1``.

    Powers are taken of the restrictions of ``A`` to ``range(P)`` and
    ``range(I - P)``.  The first is invertible even when ``A`` is not, and
    neither mixes in the rounding error of the other's modes.
    """
    if R.order == 0:
        return R.D.copy() if n == 0 else np.zeros(R.shape, dtype=complex)
    _check_circle(R.A, TOL_CIRCLE)
    proj = _outside_projector(R, P)
    if n < 0:
        inside = proj.complement()
        if inside.rank == 0:
            return np.zeros(R.shape, dtype=complex)
        # powers of A itself would amplify rounding along the unstable modes
        Q = inside.range_basis()
        As = Q.conj().T @ R.A @ Q
        coords = Q.conj().T @ (inside.P @ R.B)
        return R.C @ Q @ np.linalg.matrix_power(As, -n - 1) @ coords
    out = R.D.copy() if n == 0 else np.zeros(R.shape, dtype=complex)
    if proj.rank == 0:
        return out
    Q = proj.range_basis()
    Ar = Q.conj().T @ R.A @ Q
    coords = Q.conj().T @ (proj.P @ R.B)
    return out - R.C @ Q @ np.linalg.solve(np.linalg.matrix_power(Ar, n + 1), coords)


def fourier_coefficients(R: Realization, lo: int, hi: int, P=None) -> ChannelSeries:
    """Coefficients ``lo <= n <= hi`` as a :class:`ChannelSeries`."""
    proj = _outside_projector(R, P) if R.order else None
    return ChannelSeries(lo, np.stack([fourier_from_realization(R, proj, n) for n in range(lo, hi + 1)]))


# --------------------------------------------------------------------------
# Stein equation and spectral densities


def _spectral_radius(a: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(a)))) if a.size else 0.0


def stein_residual(a, b, X) -> float:
    """``||X - a X a^* - b b^*||_F``."""
    a, b, X = _mat(a), _mat(b), _mat(X)
    return float(np.linalg.norm(X - a @ X @ a.conj().T - b @ b.conj().T))


def stein_solve(a, b, tol: float = 1e-12, max_doublings: int = 64) -> np.ndarray:
    """Solution of ``X - a X a^* = b b^*`` for stable ``a``.

    Sums ``X = sum_k a^k b b^* a^{*k}`` by repeated squaring
    (``X <- X + a_k X a_k^*``, ``a_k <- a_k^2``); falls back to a direct
    solve when the residual misses ``1e-12 ||b b^*||_F``.

    Raises
    ------
    UnstableA
        If the spectral radius of ``a`` is ``>= 1 - tol``.
    """
    a, b = _mat(a), _mat(b)
    if a.shape[0] != a.shape[1] or b.shape[0] != a.shape[0]:
        raise ShapeMismatch(f"incompatible shapes a{a.shape} b{b.shape}")
    rho = _spectral_radius(a)
    if rho >= 1 - tol:
        raise UnstableA(f"spectral radius {rho!r} is not below 1")
    Q = b @ b.conj().T
    X, ak = Q.copy(), a.copy()
    for _ in range(max_doublings):
        step = ak @ X @ ak.conj().T
        X = X + step
        ak = ak @ ak
        if np.linalg.norm(step) <= np.finfo(float).eps * np.linalg.norm(X):
            break
    X = (X + X.conj().T) / 2
    qn = np.linalg.norm(Q)
    if stein_residual(a, b, X) > 1e-12 * qn:
        X = scipy.linalg.solve_discrete_lyapunov(a, Q)
        X = (X + X.conj().T) / 2
    return X


def _check_factor(a, b, c, d):
    a, b, c, d = _mat(a), _mat(b), _mat(c), _mat(d)
    m = a.shape[0]
    if a.shape != (m, m) or b.shape[0] != m or c.shape[1] != m:
        raise ShapeMismatch(f"incompatible shapes a{a.shape} b{b.shape} c{c.shape}")
    if d.shape != (c.shape[0], b.shape[1]) or d.shape[0] != d.shape[1]:
        raise ShapeMismatch(f"d must be square and match c, b; got {d.shape}")
    if np.linalg.cond(a) > 1 / np.finfo(float).eps:
        raise SingularA("a is singular")
    if np.linalg.cond(d) > 1 / np.finfo(float).eps:
        raise SingularD("d is singular")
    if _spectral_radius(a) >= 1:
        raise NotStable("a has an eigenvalue outside the open unit disk")
    if _spectral_radius(a - b @ np.linalg.solve(d, c)) >= 1:
        raise NotStable("a - b d^-1 c has an eigenvalue outside the open unit disk")
    return a, b, c, d


def spectral_density_realization(a, b, c, d) -> Realization:
    """Realization of ``f(z) = w(z) w(1/conj z)^*`` with ``w = d + c (zI - a)^{-1} b``.

    The state dimension is twice that of ``a``; the projector onto the
    eigenvalues inside the disk is ``[[I, X], [0, 0]]`` with ``X`` the Stein
    solution for ``(a, b)``.

    Raises
    ------
    SingularA, SingularD, NotStable
    """
    a, b, c, d = _check_factor(a, b, c, d)
    m = a.shape[0]
    ais = np.linalg.inv(a).conj().T
    bs, cs, ds = b.conj().T, c.conj().T, d.conj().T
    tail = ds - bs @ ais @ cs
    A = np.block([[a, -b @ bs @ ais], [np.zeros((m, m)), ais]])
    B = np.vstack([b @ tail, ais @ cs])
    C = np.hstack([c, -d @ bs @ ais])
    D = d @ tail
    return Realization(A, B, C, D)


def spectral_fourier_coeffs(a, b, c, d, k: int) -> np.ndarray:
    """Coefficient of ``z^k`` of the spectral density of ``w = d + c (zI - a)^{-1} b``.

    ``f_0 = d d^* + c X c^*``, ``f_k = (d b^* + c X a^*) a^{*(k-1)} c^*`` for
    ``k >= 1`` and ``f_{-k} = f_k^*``, with ``X`` the Stein solution.
    """
    a, b, c, d = _check_factor(a, b, c, d)
    X = stein_solve(a, b)
    if k == 0:
        return d @ d.conj().T + c @ X @ c.conj().T
    kk = abs(k)
    fk = (d @ b.conj().T + c @ X @ a.conj().T) @ np.linalg.matrix_power(a.conj().T, kk - 1) @ c.conj().T
    return fk if k > 0 else fk.conj().T


# --------------------------------------------------------------------------
# sharp symmetry


def _sharp_defect(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M - sharp_conjugate(M)))


def _is_blockwise_sharp(R: Realization, rtol: float) -> bool:
    mats = (R.A, R.B, R.C, R.D)
    if any(m.shape[0] % 2 or m.shape[1] % 2 for m in mats):
        return False
    return all(_sharp_defect(m) <= rtol * max(1.0, float(np.linalg.norm(m))) for m in mats)


def _symmetrize_pf(pf: PartialFractions, tol: float) -> PartialFractions:
    def sym(h):
        s = (h + sharp_conjugate(h)) / 2
        if np.linalg.norm(s - h) > tol * max(1.0, float(np.linalg.norm(h))):
            raise NotSharpSymmetric("partial-fraction coefficient is not sharp-symmetric")
        return s

    poles = tuple(PolePart(pp.p, tuple(sym(h) for h in pp.H)) for pp in pf.poles)
    return PartialFractions(sym(pf.D), poles)


def sharp_symmetrize_realization(
    R: Realization | PartialFractions,
    tol: float = 1e-8,
    n_samples: int = 64,
) -> Realization:
    """A realization whose ``A, B, C, D`` are each sharp-symmetric.

    For partial fractions the coefficients ``H_{k,m}`` and ``D`` are
    averaged with their sharp conjugates and the realization is rebuilt.
    A general realization whose values are sharp-symmetric is lifted through
    its idempotent channels: both channels share the state matrix ``A``, so
    the bicomplex realization with state matrix ``A`` (no ``j`` part) and
    channelwise ``B, C, D`` embeds to a sharp-symmetric realization of order
    ``2N`` with the same values.

    Raises
    ------
    NotSharpSymmetric
        If sampled values (or partial-fraction coefficients) are not
        sharp-symmetric to relative tolerance ``tol``.
    """
    if isinstance(R, PartialFractions):
        p, q = R.D.shape
        if p % 2 or q % 2:
            raise OddDimension(f"sharp symmetry needs even dimensions, got {R.D.shape}")
        return build_realization(_symmetrize_pf(R, tol))

    p, q = R.shape
    if p % 2 or q % 2:
        raise OddDimension(f"sharp symmetry needs even dimensions, got {R.shape}")
    # sample slightly off the grid of 2 pi m / n to avoid landing on eigenvalues
    thetas = 2 * np.pi * (np.arange(n_samples) + 0.37) / n_samples
    vals = R.on_circle(thetas)
    worst = max(_sharp_defect(v) / max(1.0, float(np.linalg.norm(v))) for v in vals)
    if worst > tol:
        raise NotSharpSymmetric(f"realization values have sharp defect {worst:.3e}")
    if _is_blockwise_sharp(R, 1e-12):
        return R

    Vp, Vq = channel_unitary(p // 2), channel_unitary(q // 2)
    v1, v2 = Vp[:, 0::2], Vp[:, 1::2]
    w1, w2 = Vq[:, 0::2], Vq[:, 1::2]
    h = lambda m: m.conj().T  # noqa: E731
    A_bc = BCMatrix.from_complex(R.A) if R.order else None
    B_bc = BCMatrix.from_channels(R.B @ w1, R.B @ w2) if R.order else None
    C_bc = BCMatrix.from_channels(h(v1) @ R.C, h(v2) @ R.C) if R.order else None
    D_bc = BCMatrix.from_channels(h(v1) @ R.D @ w1, h(v2) @ R.D @ w2)
    if R.order == 0:
        return Realization(np.zeros((0, 0)), np.zeros((0, q)), np.zeros((p, 0)), embed_sharp(D_bc))
    return Realization(embed_sharp(A_bc), embed_sharp(B_bc), embed_sharp(C_bc), embed_sharp(D_bc))
