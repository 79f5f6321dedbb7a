# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cyclic Jacobi eigensolver for Hermitian matrices, compiled core.

Keep this in lockstep with ``_jacobi_py``: identical rotation order,
rotation formulas, and stopping rule.  The pure module is the readable
reference; this one exists because the rotation loops dominate the
package's runtime on larger kernels.
"""

import numpy as np

from libc.math cimport hypot, sqrt

from .errors import NonConvergence, NotSquare

DEFAULT_EIG_TOL = 1e-14
MAX_SWEEPS = 100


cdef inline double complex _conj(double complex z) noexcept:
    return z.real - 1j * z.imag


cdef int _sweep(double complex[:, ::1] a, double complex[:, ::1] v,
                double elem_tol) noexcept:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef double absb, tau, t, c, app, aqq
    cdef double complex b, s, sc, xp, xq
    cdef int rotations = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            b = a[p, q]
            absb = hypot(b.real, b.imag)
            if absb <= elem_tol:
                continue
            rotations += 1
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (app - aqq) / (2.0 * absb)
            if tau >= 0.0:
                t = -1.0 / (tau + sqrt(1.0 + tau * tau))
            else:
                t = 1.0 / (-tau + sqrt(1.0 + tau * tau))
            c = 1.0 / sqrt(1.0 + t * t)
            s = (t * c) * (b / absb)
            sc = _conj(s)
            # rows p and q of G^H A
            for k in range(n):
                xp = a[p, k]
                xq = a[q, k]
                a[p, k] = c * xp - s * xq
                a[q, k] = sc * xp + c * xq
            # columns p and q of (G^H A) G
            for k in range(n):
                xp = a[k, p]
                xq = a[k, q]
                a[k, p] = c * xp - sc * xq
                a[k, q] = s * xp + c * xq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            for k in range(n):
                xp = v[k, p]
                xq = v[k, q]
                v[k, p] = c * xp - sc * xq
                v[k, q] = s * xp + c * xq
    return rotations


def _offdiag_norm(a):
    return np.sqrt(2.0) * np.linalg.norm(np.triu(a, 1))


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
    a = np.ascontiguousarray(0.5 * (a + a.conj().T))
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n <= 1:
        return np.diagonal(a).real.copy(), v
    scale = max(1.0, float(np.linalg.norm(a)))
    stop = tol * scale
    elem_tol = stop / n
    cdef double complex[:, ::1] amv = a
    cdef double complex[:, ::1] vmv = v
    converged = False
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= stop:
            converged = True
            break
        _sweep(amv, vmv, elem_tol)
    if not converged and _offdiag_norm(a) > stop:
        raise NonConvergence(
            f"off-diagonal norm {_offdiag_norm(a):.3e} still above "
            f"{stop:.3e} after {max_sweeps} sweeps"
        )
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])
