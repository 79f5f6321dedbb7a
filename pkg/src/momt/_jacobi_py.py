"""Cyclic Jacobi eigensolver for Hermitian matrices, reference
implementation.

This is the pure-Python twin of the compiled extension ``_jacobi``:
same rotation order (row-cyclic over the upper triangle), same rotation
formulas, same stopping rule, so the two backends agree to rounding.
The import-time choice between them lives in ``_backend``.
"""

import numpy as np

from .errors import NonConvergence, NotSquare

DEFAULT_EIG_TOL = 1e-14
MAX_SWEEPS = 100


def _offdiag_norm(a):
    return np.sqrt(2.0) * np.linalg.norm(np.triu(a, 1))


def _sweep(a, v, elem_tol):
    """One row-cyclic pass of plane rotations over the strict upper
    triangle of ``a``, accumulating the rotations into ``v``.

    For the pivot (p, q) the unitary is G = [[c, s], [-conj(s), c]] in
    the (p, q) plane with c real, s = sigma * apq/|apq|, and
    t = sigma/c the small-magnitude root of t^2 - 2*tau*t - 1 = 0,
    tau = (app - aqq) / (2 |apq|); this choice zeroes the pivot entry
    of G^H A G while keeping the rotation angle at most pi/4.
    """
    n = a.shape[0]
    rotations = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            b = a[p, q]
            absb = abs(b)
            if absb <= elem_tol:
                continue
            rotations += 1
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (app - aqq) / (2.0 * absb)
            if tau >= 0.0:
                t = -1.0 / (tau + np.sqrt(1.0 + tau * tau))
            else:
                t = 1.0 / (-tau + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = (t * c) * (b / absb)
            sc = s.conjugate()
            # rows p and q of G^H A
            rp = a[p, :].copy()
            rq = a[q, :].copy()
            a[p, :] = c * rp - s * rq
            a[q, :] = sc * rp + c * rq
            # columns p and q of (G^H A) G
            cp = a[:, p].copy()
            cq = a[:, q].copy()
            a[:, p] = c * cp - sc * cq
            a[:, q] = s * cp + c * cq
            # the rotation is designed to annihilate the pivot and keep
            # the diagonal real; enforce both exactly
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = c * vp - sc * vq
            v[:, q] = s * vp + c * vq
    return rotations


def jacobi_eigh(a, tol=DEFAULT_EIG_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Returns (w, v) with w ascending and a @ v == v @ diag(w) to within
    the stopping tolerance; columns of v are orthonormal.  The input is
    Hermitized as (a + a^H)/2 first.  Raises NonConvergence if the
    off-diagonal Frobenius norm is still above tol * max(1, ||a||_F)
    after ``max_sweeps`` full sweeps.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n <= 1:
        return np.diagonal(a).real.copy(), v
    scale = max(1.0, float(np.linalg.norm(a)))
    stop = tol * scale
    # if every pivot is below stop/n then the whole off-diagonal norm
    # is below stop, so skipping small pivots cannot stall convergence
    elem_tol = stop / n
    converged = False
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= stop:
            converged = True
            break
        _sweep(a, v, elem_tol)
    if not converged and _offdiag_norm(a) > stop:
        raise NonConvergence(
            f"off-diagonal norm {_offdiag_norm(a):.3e} still above "
            f"{stop:.3e} after {max_sweeps} sweeps"
        )
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])
