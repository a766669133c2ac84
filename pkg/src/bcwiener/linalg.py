"""Bicomplex matrices and their sharp-symmetric complex embedding.

A ``p x q`` bicomplex matrix ``M = M1 + j M2`` is stored as the pair of complex
arrays ``(M1, M2)``.  Its idempotent channels are ``P1 = M1 - i M2`` and
``P2 = M1 + i M2``; products, sums and adjoints act on the channels
independently.

The complex embedding used throughout is block-interleaved: entry ``(s, t)``
becomes the 2x2 block ``[[z1, -z2], [z2, z1]]`` at rows ``2s:2s+2`` and
columns ``2t:2t+2``.  In that layout the sharp conjugation is
``C -> J_a C J_b^*`` with ``J_a = I_a (x) J``; the alternative
``J (x) I_a`` layout, which pairs with ``[[M1, -M2], [M2, M1]]``, is
reachable through :func:`to_block_form` / :func:`to_interleaved_form`.

Complex matrices are plain ``numpy`` arrays of complex dtype.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .bicomplex import Bicomplex
from .errors import NotSharpSymmetric, OddDimension, ShapeMismatch, SingularY

__all__ = [
    "BCMatrix",
    "SharpStructure",
    "J2",
    "U_DIAG",
    "embed_sharp",
    "extract_sharp",
    "sharp_conjugate",
    "is_sharp_symmetric",
    "similarity_conjugate",
    "matmul",
    "add",
    "star_adjoint",
    "is_positive",
    "bc_operator_norm",
    "op_norm",
    "to_block_form",
    "to_interleaved_form",
    "channel_unitary",
]

J2 = np.array([[0, -1], [1, 0]], dtype=complex)
# columns are the eigenvectors of [[z1, -z2], [z2, z1]] for lam1, lam2
U_DIAG = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)

Layout = Literal["interleaved", "kron"]

DEFAULT_SYM_RTOL = 1e-10


def _carray(a) -> np.ndarray:
    out = np.array(a, dtype=complex)
    if out.ndim == 0:
        out = out.reshape(1, 1)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entries must be finite")
    return out


def op_norm(a: np.ndarray) -> float:
    """Spectral norm (largest singular value); 0 for empty arrays."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


@dataclass(frozen=True, eq=False)
class BCMatrix:
    """Bicomplex matrix ``M1 + j M2``."""

    M1: np.ndarray
    M2: np.ndarray

    def __post_init__(self):
        m1, m2 = _carray(self.M1), _carray(self.M2)
        if m1.shape != m2.shape:
            raise ShapeMismatch(f"M1 {m1.shape} and M2 {m2.shape} differ")
        m1.flags.writeable = False
        m2.flags.writeable = False
        object.__setattr__(self, "M1", m1)
        object.__setattr__(self, "M2", m2)

    # constructors -----------------------------------------------------

    @classmethod
    def from_channels(cls, P1, P2) -> BCMatrix:
        P1, P2 = _carray(P1), _carray(P2)
        return cls((P1 + P2) / 2, 1j * (P1 - P2) / 2)

    @classmethod
    def from_complex(cls, M) -> BCMatrix:
        M = _carray(M)
        return cls(M, np.zeros_like(M))

    @classmethod
    def from_scalar(cls, Z: Bicomplex) -> BCMatrix:
        return cls([[Z.z1]], [[Z.z2]])

    @classmethod
    def identity(cls, p: int) -> BCMatrix:
        return cls.from_complex(np.eye(p))

    @classmethod
    def zeros(cls, p: int, q: int) -> BCMatrix:
        z = np.zeros((p, q), dtype=complex)
        return cls(z, z)

    # views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.M1.shape

    @property
    def P1(self) -> np.ndarray:
        return self.M1 - 1j * self.M2

    @property
    def P2(self) -> np.ndarray:
        return self.M1 + 1j * self.M2

    def channels(self) -> tuple[np.ndarray, np.ndarray]:
        return self.P1, self.P2

    def entry(self, s: int, t: int) -> Bicomplex:
        return Bicomplex(self.M1[s, t], self.M2[s, t])

    # algebra --------------------------------------------------------------

    def __add__(self, other: BCMatrix) -> BCMatrix:
        return add(self, other)

    def __sub__(self, other: BCMatrix) -> BCMatrix:
        return add(self, -other)

    def __neg__(self) -> BCMatrix:
        return BCMatrix(-self.M1, -self.M2)

    def __matmul__(self, other: BCMatrix) -> BCMatrix:
        return matmul(self, other)

    def scale(self, Z: Bicomplex) -> BCMatrix:
        l1, l2 = Z.idempotent()
        return BCMatrix.from_channels(l1 * self.P1, l2 * self.P2)

    def star(self) -> BCMatrix:
        return star_adjoint(self)

    def allclose(self, other: BCMatrix, rtol=1e-12, atol=1e-12) -> bool:
        return np.allclose(self.M1, other.M1, rtol=rtol, atol=atol) and np.allclose(
            self.M2, other.M2, rtol=rtol, atol=atol
        )

    def __repr__(self):
        return f"BCMatrix(shape={self.shape}, M1={self.M1!r}, M2={self.M2!r})"


@dataclass(frozen=True)
class SharpStructure:
    """The structural matrix ``J_a`` for ``a`` blocks."""

    a: int
    layout: Layout = "interleaved"

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("block count must be positive")
        if self.layout not in ("interleaved", "kron"):
            raise ValueError(f"unknown layout {self.layout!r}")

    @property
    def J_a(self) -> np.ndarray:
        eye = np.eye(self.a)
        if self.layout == "kron":
            return np.kron(J2, eye)
        return np.kron(eye, J2)


def embed_sharp(M: BCMatrix) -> np.ndarray:
    """Block-interleaved ``2p x 2q`` complex image of ``M``."""
    return np.kron(M.M1, np.eye(2)) + np.kron(M.M2, J2)


def sharp_conjugate(C, layout: Layout = "interleaved") -> np.ndarray:
    """``J_a C J_b^*`` for a ``2a x 2b`` complex matrix."""
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] % 2 or C.shape[1] % 2:
        raise OddDimension(f"sharp conjugation needs even dimensions, got {C.shape}")
    Ja = SharpStructure(C.shape[0] // 2, layout).J_a
    Jb = SharpStructure(C.shape[1] // 2, layout).J_a
    return Ja @ C @ Jb.conj().T


def _sharp_defect(C, layout: Layout = "interleaved") -> float:
    return float(np.linalg.norm(C - sharp_conjugate(C, layout)))


def is_sharp_symmetric(C, tol_sym: float = DEFAULT_SYM_RTOL, layout: Layout = "interleaved") -> bool:
    """``||C - C#||_F <= tol_sym * ||C||_F``."""
    C = np.asarray(C, dtype=complex)
    return _sharp_defect(C, layout) <= tol_sym * np.linalg.norm(C)


def extract_sharp(C, tol_sym: float = DEFAULT_SYM_RTOL) -> BCMatrix:
    """Inverse of :func:`embed_sharp`.

    Raises
    ------
    OddDimension
        If ``C`` does not have even dimensions.
    NotSharpSymmetric
        If ``||C - C#||_F > tol_sym * ||C||_F``.
    """
    C = np.asarray(C, dtype=complex)
    defect = _sharp_defect(C)
    if defect > tol_sym * np.linalg.norm(C):
        raise NotSharpSymmetric(f"sharp defect {defect:.3e} exceeds tolerance")
    # average the two copies so that slightly perturbed input lands on the
    # nearest embedded matrix; exact input is returned bit-for-bit
    z1 = (C[0::2, 0::2] + C[1::2, 1::2]) / 2
    z2 = (C[1::2, 0::2] - C[0::2, 1::2]) / 2
    return BCMatrix(z1, z2)


def _interleave_perm(n: int) -> np.ndarray:
    # interleaved index 2s + r  <->  block index r*n + s
    return np.array([r * n + s for s in range(n) for r in range(2)])


def to_block_form(C) -> np.ndarray:
    """Reorder an interleaved ``2p x 2q`` matrix into ``[[M1, -M2], [M2, M1]]`` form."""
    C = np.asarray(C, dtype=complex)
    if C.shape[0] % 2 or C.shape[1] % 2:
        raise OddDimension(f"expected even dimensions, got {C.shape}")
    rp, cp = _interleave_perm(C.shape[0] // 2), _interleave_perm(C.shape[1] // 2)
    out = np.empty_like(C)
    out[np.ix_(rp, cp)] = C
    return out


def to_interleaved_form(C) -> np.ndarray:
    C = np.asarray(C, dtype=complex)
    if C.shape[0] % 2 or C.shape[1] % 2:
        raise OddDimension(f"expected even dimensions, got {C.shape}")
    rp, cp = _interleave_perm(C.shape[0] // 2), _interleave_perm(C.shape[1] // 2)
    return C[np.ix_(rp, cp)]


def channel_unitary(p: int) -> np.ndarray:
    """``I_p (x) U``; its columns ``0::2`` / ``1::2`` pick out the two channels.

    For any bicomplex ``M`` (``p x q``), ``V_p^* embed_sharp(M) V_q`` has
    ``P1`` on the even/even and ``P2`` on the odd/odd positions and zeros
    elsewhere.
    """
    return np.kron(np.eye(p), U_DIAG)


def similarity_conjugate(C, Y) -> np.ndarray:
    """``Y C Y^{-1}``."""
    C = np.asarray(C, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1] or C.shape != Y.shape:
        raise ShapeMismatch(f"incompatible shapes C {C.shape}, Y {Y.shape}")
    if np.linalg.cond(Y) > 1 / np.finfo(float).eps:
        raise SingularY("similarity matrix is singular")
    # Y C Y^{-1} = (Y^{-*} (Y C)^*)^*
    return np.linalg.solve(Y.conj().T, (Y @ C).conj().T).conj().T


def matmul(M: BCMatrix, N: BCMatrix) -> BCMatrix:
    if M.shape[1] != N.shape[0]:
        raise ShapeMismatch(f"cannot multiply {M.shape} by {N.shape}")
    return BCMatrix(M.M1 @ N.M1 - M.M2 @ N.M2, M.M1 @ N.M2 + M.M2 @ N.M1)


def add(M: BCMatrix, N: BCMatrix) -> BCMatrix:
    if M.shape != N.shape:
        raise ShapeMismatch(f"cannot add {M.shape} and {N.shape}")
    return BCMatrix(M.M1 + N.M1, M.M2 + N.M2)


def star_adjoint(M: BCMatrix) -> BCMatrix:
    """Transpose with the star conjugate applied entrywise; channels go to ``P^*``."""
    return BCMatrix(M.M1.conj().T, -M.M2.conj().T)


def _is_psd(P: np.ndarray, tol: float | None) -> bool:
    scale = op_norm(P)
    if tol is None:
        tol = 1e-10 * scale
    if np.linalg.norm(P - P.conj().T, 2) > max(tol, 1e-14 * scale):
        return False
    return bool(np.linalg.eigvalsh((P + P.conj().T) / 2)[0] >= -tol)


def is_positive(M: BCMatrix, tol: float | None = None) -> bool:
    """Both channels Hermitian with smallest eigenvalue ``>= -tol``.

    ``tol`` defaults to ``1e-10 * ||P||_op`` per channel.
    """
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"positivity needs a square matrix, got {M.shape}")
    return _is_psd(M.P1, tol) and _is_psd(M.P2, tol)


def bc_operator_norm(M: BCMatrix) -> float:
    """``||P1||_op + ||P2||_op``."""
    return op_norm(M.P1) + op_norm(M.P2)
