"""Dense complex Hermitian linear algebra.

Matrices are numpy ``complex128`` arrays throughout (row-major, shape
(rows, cols)); 0x0 matrices are legal everywhere and behave as empty
operators.  Unless stated otherwise every tolerance is relative to
max(1, Frobenius norm).

The eigensolver is cyclic Jacobi with complex plane rotations —
unconditionally stable and dependency-free, which is all we need at the
dimensions that arise here (a few hundred at most).  A compiled core is
used when available; ``_backend`` picks at import time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import BACKEND, jacobi_eigh
from .errors import (
    DimensionMismatch,
    NotPSD,
    NotSquare,
    NotWellDefined,
)

__all__ = [
    "BACKEND",
    "DEFAULT_TOL",
    "EigDecomposition",
    "QuotientSpace",
    "hermitian_eig",
    "is_psd",
    "build_quotient",
    "induced_operator",
    "orth_projector",
    "orth_basis",
    "psd_sqrt",
    "pinv_psd",
    "row_defect",
    "rel_scale",
]

DEFAULT_TOL = 1e-9


def as_cmatrix(a) -> np.ndarray:
    out = np.asarray(a, dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={out.ndim}")
    return out


def rel_scale(a) -> float:
    """max(1, ||a||_F) — the reference scale for relative tolerances."""
    return max(1.0, float(np.linalg.norm(a)))


@dataclass(frozen=True)
class EigDecomposition:
    """Eigendecomposition a = vectors @ diag(values) @ vectors^H with
    real ascending values and unitary vectors."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class QuotientSpace:
    """Coordinates for the completion of an ambient space modulo the
    null space of a PSD Gram matrix.

    ``q`` (rank x N) sends an ambient coefficient vector to coordinates
    in which the Gram inner product becomes the standard one; ``q_pinv``
    (N x rank) is its right inverse; ``null_basis`` (N x (N - rank)) has
    orthonormal columns spanning the Gram-null vectors.
    """

    q: np.ndarray
    q_pinv: np.ndarray
    rank: int
    null_basis: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.q.shape[1]


def hermitian_eig(a) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix (symmetrized as
    (a + a^H)/2 first), values ascending."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    w, v = jacobi_eigh(a)
    return EigDecomposition(values=w, vectors=v)


def is_psd(a, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """PSD test by smallest eigenvalue.

    Returns (verdict, min_eigenvalue); the verdict is True iff the
    smallest eigenvalue is >= -tol * max(1, ||a||_F).  Eigenvalues are
    used instead of a Cholesky attempt so the offending eigenvalue can
    be reported in certificates.
    """
    a = as_cmatrix(a)
    if a.shape[0] == 0:
        return True, 0.0
    dec = hermitian_eig(a)
    min_eig = float(dec.values[0])
    return min_eig >= -tol * rel_scale(a), min_eig


def build_quotient(g, tol: float = DEFAULT_TOL) -> QuotientSpace:
    """Quotient coordinates for a PSD Gram matrix g.

    With g = U diag(w) U^H, eigenpairs with w > tol * max(1, ||g||_F)
    are kept: q = diag(w_+)^{1/2} U_+^H and q_pinv = U_+ diag(w_+)^{-1/2},
    so that q^H q reproduces g up to the discarded tail and
    q q_pinv = I exactly in exact arithmetic.
    """
    g = as_cmatrix(g)
    if g.shape[0] != g.shape[1]:
        raise NotSquare(f"Gram matrix must be square, got shape {g.shape}")
    dim = g.shape[0]
    if dim == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return QuotientSpace(q=empty, q_pinv=empty, rank=0, null_basis=empty)
    scale = rel_scale(g)
    dec = hermitian_eig(g)
    if dec.values[0] < -tol * scale:
        raise NotPSD(
            f"Gram matrix has eigenvalue {dec.values[0]:.3e} below "
            f"-{tol:.1e} * {scale:.3e}"
        )
    cutoff = tol * scale
    keep = dec.values > cutoff
    u_pos = dec.vectors[:, keep]
    w_pos = dec.values[keep]
    rank = int(keep.sum())
    q = np.sqrt(w_pos)[:, None] * u_pos.conj().T
    q_pinv = u_pos / np.sqrt(w_pos)[None, :]
    null_basis = dec.vectors[:, ~keep]
    return QuotientSpace(q=q, q_pinv=q_pinv, rank=rank, null_basis=null_basis)


def induced_operator(m, qs: QuotientSpace, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Push an ambient operator down to quotient coordinates: q m q_pinv.

    Refuses (NotWellDefined) unless m maps Gram-null vectors into
    Gram-null vectors, i.e. ||q m null_basis|| <= tol * max(1, ||q m||).
    A failure here means the positivity hypothesis that makes the
    quotient construction work does not actually hold upstream; it is
    never silently projected away.
    """
    m = as_cmatrix(m)
    dim = qs.ambient_dim
    if m.shape != (dim, dim):
        raise DimensionMismatch(
            f"operator shape {m.shape} does not act on ambient dimension {dim}"
        )
    qm = qs.q @ m
    residual = float(np.linalg.norm(qm @ qs.null_basis))
    if residual > tol * rel_scale(qm):
        raise NotWellDefined(
            f"operator does not respect the quotient: residual {residual:.3e} "
            f"exceeds {tol:.1e} * {rel_scale(qm):.3e}"
        )
    return qm @ qs.q_pinv


def orth_basis(columns, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span, via the
    eigendecomposition of columns @ columns^H with a relative rank
    cutoff."""
    columns = as_cmatrix(columns)
    if columns.shape[1] == 0 or columns.shape[0] == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    gram = columns @ columns.conj().T
    dec = hermitian_eig(gram)
    keep = dec.values > tol * rel_scale(gram)
    return dec.vectors[:, keep]


def orth_projector(columns, complement: bool = False) -> np.ndarray:
    """Hermitian idempotent projecting onto the column span of
    ``columns`` (or onto its orthogonal complement)."""
    columns = as_cmatrix(columns)
    dim = columns.shape[0]
    basis = orth_basis(columns)
    p = basis @ basis.conj().T
    if complement:
        p = np.eye(dim, dtype=complex) - p
    return 0.5 * (p + p.conj().T)


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-tol*scale, 0) are
    clamped to zero, anything lower raises NotPSD."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    scale = rel_scale(a)
    dec = hermitian_eig(a)
    if dec.values[0] < -tol * scale:
        raise NotPSD(
            f"matrix has eigenvalue {dec.values[0]:.3e} below "
            f"-{tol:.1e} * {scale:.3e}"
        )
    w = np.clip(dec.values, 0.0, None)
    root = dec.vectors @ (np.sqrt(w)[:, None] * dec.vectors.conj().T)
    return 0.5 * (root + root.conj().T)


def pinv_psd(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a Hermitian PSD matrix: invert the
    eigenvalues above the relative cutoff, kill the rest."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    scale = rel_scale(a)
    dec = hermitian_eig(a)
    if dec.values[0] < -tol * scale:
        raise NotPSD(
            f"matrix has eigenvalue {dec.values[0]:.3e} below "
            f"-{tol:.1e} * {scale:.3e}"
        )
    pos = dec.values > tol * scale
    inv = np.zeros_like(dec.values)
    inv[pos] = 1.0 / dec.values[pos]
    out = dec.vectors @ (inv[:, None] * dec.vectors.conj().T)
    return 0.5 * (out + out.conj().T)


def row_defect(mats) -> np.ndarray:
    """I - sum_i T_i T_i^H for a tuple of square matrices of equal
    dimension; the caller decides what to do with its PSD-ness."""
    mats = [as_cmatrix(m) for m in mats]
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape != (dim, dim):
            raise DimensionMismatch(
                f"expected all matrices square of dimension {dim}, got {m.shape}"
            )
    out = np.eye(dim, dtype=complex)
    for m in mats:
        out -= m @ m.conj().T
    return out
