"""Pure numpy implementation of the cyclic complex Jacobi kernel.

This mirrors the compiled extension (``qsl_lab._core``) rotation for
rotation: fixed cyclic pivot order, identical rotation angles, identical
stopping rule.  Either backend may therefore be substituted for the other
without changing results beyond floating-point noise.
"""

from __future__ import annotations

import math

import numpy as np

MAX_SWEEPS_DEFAULT = 100
CONV_TOL_DEFAULT = 1e-14


def _off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part.

    Summed directly over off-diagonal entries; subtracting the diagonal
    from the total would cancel catastrophically near convergence.
    """
    sq = a.real**2 + a.imag**2
    sq[np.diag_indices_from(sq)] = 0.0
    return math.sqrt(float(sq.sum()))


def _sweep(a: np.ndarray, v: np.ndarray, skip: float) -> int:
    """One cyclic sweep of two-sided Jacobi rotations; returns rotation count."""
    n = a.shape[0]
    rotations = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            mod = abs(apq)
            if mod <= skip:
                continue
            rotations += 1
            tau = (a[q, q].real - a[p, p].real) / (2.0 * mod)
            if tau >= 0.0:
                t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
            else:
                t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            phi = apq / mod
            sphi = s * phi
            sphic = s * phi.conjugate()
            # rows:  A <- U^dagger A
            rp = a[p, :].copy()
            rq = a[q, :].copy()
            a[p, :] = c * rp - sphi * rq
            a[q, :] = sphic * rp + c * rq
            # columns:  A <- A U
            cp = a[:, p].copy()
            cq = a[:, q].copy()
            a[:, p] = c * cp - sphic * cq
            a[:, q] = sphi * cp + c * cq
            a[p, q] = 0.0
            a[q, p] = 0.0
            # accumulate the rotation:  V <- V U
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = c * vp - sphic * vq
            v[:, q] = sphi * vp + c * vq
    return rotations


def jacobi_diagonalize(
    a,
    conv_tol: float = CONV_TOL_DEFAULT,
    max_sweeps: int = MAX_SWEEPS_DEFAULT,
):
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian matrix (only read; a working copy is made).
    conv_tol : float
        Stop once the off-diagonal Frobenius norm drops to
        ``conv_tol * ||a||_F``.
    max_sweeps : int
        Sweep budget before giving up.

    Returns
    -------
    (diag, vectors, sweeps)
        Unsorted real eigenvalue estimates, the accumulated unitary whose
        columns are the matching eigenvectors, and the number of sweeps
        performed.

    Raises
    ------
    RuntimeError
        If the off-diagonal norm has not converged within ``max_sweeps``.
    """
    work = np.array(a, dtype=np.complex128, order="C", copy=True)
    n = work.shape[0]
    vectors = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(work))
    if fro == 0.0:
        return np.zeros(n, dtype=np.float64), vectors, 0
    threshold = conv_tol * fro
    skip = threshold / n
    for sweeps in range(max_sweeps + 1):
        if _off_norm(work) <= threshold:
            return np.real(np.diagonal(work)).copy(), vectors, sweeps
        if sweeps == max_sweeps:
            break
        _sweep(work, vectors, skip)
    raise RuntimeError(
        f"jacobi rotation failed to converge within {max_sweeps} sweeps (n={n})"
    )
