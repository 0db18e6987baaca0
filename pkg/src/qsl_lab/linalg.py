"""Hermitian linear algebra on explicit complex matrices.

All eigendecompositions in the package flow through :func:`hermitian_eig`,
which wraps the cyclic Jacobi kernel selected in :mod:`qsl_lab.backend`
and applies a deterministic ordering and phase convention, so repeated
runs on identical input bits return identical output bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import backend
from .config import DEFAULT_DIM_CAP, resolve_hbar
from .errors import (
    DimensionCapError,
    DimensionMismatchError,
    EigensolverError,
    NonHermitianError,
)

if TYPE_CHECKING:
    from .spaces import SpaceDescriptor

# A ComplexMatrix is a plain 2-d complex128 ndarray; helpers below coerce
# and validate rather than wrap it in a class.
ComplexMatrix = np.ndarray

HERMITICITY_RTOL = 1e-12
EIG_RESIDUAL_TOL = 1e-10
EIG_ORTHONORMALITY_TOL = 1e-10
UNITARITY_TOL = 1e-10


def as_complex_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite, 2-d complex128 array (copying only if needed)."""
    if isinstance(value, HermitianOperator):
        return value.matrix
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def max_asymmetry(matrix: np.ndarray) -> float:
    """Largest element modulus of M - M^dagger."""
    return float(np.abs(matrix - matrix.conj().T).max()) if matrix.size else 0.0


@dataclass(frozen=True)
class HermitianOperator:
    """A validated Hermitian matrix, optionally attached to a product space.

    The input must be square with ``max |M - M^dagger|`` at most
    ``1e-12 * (1 + max |M|)``; the stored matrix is the exactly Hermitian
    part ``(M + M^dagger)/2`` and is read-only.
    """

    matrix: np.ndarray
    space: "SpaceDescriptor | None" = None

    def __post_init__(self):
        arr = as_complex_matrix(self.matrix)
        if arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(
                f"hermitian operator must be square, got shape {arr.shape}"
            )
        scale = float(np.abs(arr).max()) if arr.size else 0.0
        asym = max_asymmetry(arr)
        if asym > HERMITICITY_RTOL * (1.0 + scale):
            raise NonHermitianError("matrix is not Hermitian within tolerance", asym)
        stored = (arr + arr.conj().T) / 2.0
        stored.setflags(write=False)
        object.__setattr__(self, "matrix", stored)
        if self.space is not None and self.space.dim != stored.shape[0]:
            raise DimensionMismatchError(
                f"operator dim {stored.shape[0]} != space dim {self.space.dim}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        """V diag(values) V^dagger."""
        return (self.vectors * self.values) @ self.vectors.conj().T


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first largest-modulus component is real >= 0."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        mod = abs(pivot)
        if mod > 0.0:
            out[:, k] = col * (pivot.conjugate() / mod)
    return out


def hermitian_eig(operator: HermitianOperator | np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian operator via Jacobi rotations.

    Eigenvalues are returned in ascending order (stable sort), and each
    eigenvector's phase is fixed by making its first component of largest
    modulus real and positive.  The result satisfies
    ``||A v_k - w_k v_k|| <= 1e-10 ||A||_inf`` and
    ``max |V^dagger V - I| <= 1e-10`` or EigensolverError is raised.
    """
    if not isinstance(operator, HermitianOperator):
        operator = HermitianOperator(operator)
    a = operator.matrix
    try:
        raw_values, raw_vectors, _ = backend.jacobi_diagonalize(a)
    except RuntimeError as exc:
        raise EigensolverError(str(exc)) from exc
    order = np.argsort(raw_values, kind="stable")
    values = np.ascontiguousarray(raw_values[order])
    vectors = _fix_phases(np.ascontiguousarray(raw_vectors[:, order]))

    scale = float(np.abs(values).max()) if values.size else 0.0
    residual = a @ vectors - vectors * values
    worst_residual = float(np.linalg.norm(residual, axis=0).max()) if values.size else 0.0
    if worst_residual > EIG_RESIDUAL_TOL * max(scale, 1e-300):
        raise EigensolverError(
            f"eigenpair residual {worst_residual:.3e} exceeds "
            f"{EIG_RESIDUAL_TOL:.0e} * ||A||_inf = {EIG_RESIDUAL_TOL * scale:.3e}"
        )
    gram = vectors.conj().T @ vectors
    ortho = float(np.abs(gram - np.eye(gram.shape[0])).max()) if values.size else 0.0
    if ortho > EIG_ORTHONORMALITY_TOL:
        raise EigensolverError(
            f"eigenvector orthonormality defect {ortho:.3e} exceeds "
            f"{EIG_ORTHONORMALITY_TOL:.0e}"
        )
    return EigenDecomposition(values=values, vectors=vectors)


def trace_norm(operator: HermitianOperator | np.ndarray) -> float:
    """Sum of absolute eigenvalues (Hermitian input)."""
    return float(np.abs(hermitian_eig(operator).values).sum())


def spectral_norm(operator: HermitianOperator | np.ndarray) -> float:
    """Largest absolute eigenvalue (Hermitian input)."""
    values = hermitian_eig(operator).values
    return float(np.abs(values).max()) if values.size else 0.0


def kron(a, b, *, dim_cap: int = DEFAULT_DIM_CAP):
    """Kronecker product with a guard on the resulting dimension."""
    am = np.asarray(a, dtype=np.complex128)
    bm = np.asarray(b, dtype=np.complex128)
    rows = am.shape[0] * bm.shape[0]
    cols = (am.shape[1] if am.ndim > 1 else 1) * (bm.shape[1] if bm.ndim > 1 else 1)
    if max(rows, cols) > dim_cap:
        raise DimensionCapError(
            f"kron result dimension {max(rows, cols)} exceeds cap {dim_cap}"
        )
    return np.kron(am, bm)


def unitary_exp(
    operator: HermitianOperator | np.ndarray,
    t: float,
    *,
    hbar: float | None = None,
) -> np.ndarray:
    """exp(-i H t / hbar) computed through the eigendecomposition of H."""
    hbar = resolve_hbar(hbar)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    dec = hermitian_eig(operator)
    phases = np.exp(-1j * dec.values * (t / hbar))
    u = (dec.vectors * phases) @ dec.vectors.conj().T
    defect = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
    if defect > UNITARITY_TOL:
        raise EigensolverError(
            f"propagator unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:.0e}"
        )
    return u
