# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic complex Jacobi kernel.

Rotation-for-rotation identical to the pure numpy fallback in
``qsl_lab._core_py``: same pivot order, same angles, same stopping rule.
"""

import numpy as np

from libc.math cimport sqrt

ctypedef double complex cplx

MAX_SWEEPS_DEFAULT = 100
CONV_TOL_DEFAULT = 1e-14


cdef inline double _cabs(cplx z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline cplx _conj(cplx z) noexcept nogil:
    return z.real - 1j * z.imag


cdef double _fro_norm(cplx[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            acc += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return sqrt(acc)


cdef double _off_norm(cplx[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return sqrt(acc)


cdef Py_ssize_t _sweep(cplx[:, ::1] a, cplx[:, ::1] v, Py_ssize_t n, double skip) noexcept nogil:
    cdef Py_ssize_t p, q, k, rotations = 0
    cdef double mod, tau, t, c, s
    cdef cplx apq, phi, sphi, sphic, xp, xq
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            mod = _cabs(apq)
            if mod <= skip:
                continue
            rotations += 1
            tau = (a[q, q].real - a[p, p].real) / (2.0 * mod)
            if tau >= 0.0:
                t = 1.0 / (tau + sqrt(1.0 + tau * tau))
            else:
                t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
            c = 1.0 / sqrt(1.0 + t * t)
            s = t * c
            phi = apq / mod
            sphi = s * phi
            sphic = s * _conj(phi)
            # rows:  A <- U^dagger A
            for k in range(n):
                xp = a[p, k]
                xq = a[q, k]
                a[p, k] = c * xp - sphi * xq
                a[q, k] = sphic * xp + c * xq
            # columns:  A <- A U
            for k in range(n):
                xp = a[k, p]
                xq = a[k, q]
                a[k, p] = c * xp - sphic * xq
                a[k, q] = sphi * xp + c * xq
            a[p, q] = 0.0
            a[q, p] = 0.0
            # accumulate the rotation:  V <- V U
            for k in range(n):
                xp = v[k, p]
                xq = v[k, q]
                v[k, p] = c * xp - sphic * xq
                v[k, q] = sphi * xp + c * xq
    return rotations


def jacobi_diagonalize(a, double conv_tol=1e-14, int max_sweeps=100):
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(diag, vectors, sweeps)``: unsorted real eigenvalue
    estimates, the accumulated unitary (eigenvectors as columns) and the
    number of sweeps performed.  Raises RuntimeError if the off-diagonal
    norm has not converged within ``max_sweeps``.
    """
    work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0]
    vectors = np.eye(n, dtype=np.complex128)
    cdef cplx[:, ::1] av = work
    cdef cplx[:, ::1] vv = vectors
    cdef double fro, threshold, skip
    cdef int sweeps
    with nogil:
        fro = _fro_norm(av, n)
    if fro == 0.0:
        return np.zeros(n, dtype=np.float64), vectors, 0
    threshold = conv_tol * fro
    skip = threshold / n
    for sweeps in range(max_sweeps + 1):
        if _off_norm(av, n) <= threshold:
            return np.real(np.diagonal(work)).copy(), vectors, sweeps
        if sweeps == max_sweeps:
            break
        with nogil:
            _sweep(av, vv, n, skip)
    raise RuntimeError(
        f"jacobi rotation failed to converge within {max_sweeps} sweeps (n={n})"
    )
