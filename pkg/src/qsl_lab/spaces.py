"""Multipartite Hilbert-space bookkeeping: states, embeddings, reductions."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_DIM_CAP
from .errors import (
    DimensionCapError,
    DimensionMismatchError,
    NonHermitianError,
    NormalizationError,
)
from .linalg import HermitianOperator, max_asymmetry

STATE_NORM_TOL = 1e-10
REDUCTION_HERMITICITY_TOL = 1e-11
VARIANCE_CLAMP = -1e-12
ENSEMBLE_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class SpaceDescriptor:
    """An ordered list of local dimensions, one per party."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise DimensionMismatchError("a space needs at least one party")
        if any(d < 2 for d in dims):
            raise DimensionMismatchError(f"every local dimension must be >= 2, got {dims}")
        total = math.prod(dims)
        if total > DEFAULT_DIM_CAP:
            raise DimensionCapError(
                f"total dimension {total} exceeds cap {DEFAULT_DIM_CAP}"
            )
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)


def _as_state_vector(vec, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.complex128).reshape(-1).copy()
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(f"state length {arr.shape[0]} != expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state vector contains non-finite entries")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise NormalizationError(f"state norm {norm!r} deviates from 1 beyond 1e-10")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """A unit vector on the full product space."""

    space: SpaceDescriptor
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", _as_state_vector(self.vector, self.space.dim))

    @classmethod
    def from_vector(cls, vec, dims: tuple[int, ...] | None = None) -> "PureState":
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        space = SpaceDescriptor(dims if dims is not None else (arr.shape[0],))
        return cls(space=space, vector=arr)


@dataclass(frozen=True)
class ProductState:
    """One unit local ket per party."""

    space: SpaceDescriptor
    locals: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.locals) != self.space.n_parties:
            raise DimensionMismatchError(
                f"{len(self.locals)} local kets for {self.space.n_parties} parties"
            )
        kets = tuple(
            _as_state_vector(v, d) for v, d in zip(self.locals, self.space.dims)
        )
        object.__setattr__(self, "locals", kets)

    @classmethod
    def from_locals(cls, kets) -> "ProductState":
        kets = [np.asarray(k, dtype=np.complex128).reshape(-1) for k in kets]
        space = SpaceDescriptor(tuple(k.shape[0] for k in kets))
        return cls(space=space, locals=tuple(kets))


@dataclass(frozen=True)
class SeparableEnsemble:
    """A fixed convex mixture of product states on a common space."""

    weights: tuple[float, ...]
    members: tuple[ProductState, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(self.members) or not self.members:
            raise DimensionMismatchError("need one weight per member, at least one member")
        if any(w < 0.0 for w in weights):
            raise ValueError(f"mixture weights must be non-negative, got {weights}")
        if abs(sum(weights) - 1.0) > ENSEMBLE_WEIGHT_TOL:
            raise ValueError(f"mixture weights must sum to 1, got {sum(weights)!r}")
        spaces = {m.space for m in self.members}
        if len(spaces) != 1:
            raise DimensionMismatchError("ensemble members live on different spaces")
        object.__setattr__(self, "weights", weights)

    @property
    def space(self) -> SpaceDescriptor:
        return self.members[0].space


@dataclass(frozen=True)
class EnergyStats:
    """Mean and variance of an operator in a state; variance is clamped at 0."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            if self.variance < VARIANCE_CLAMP:
                raise ValueError(f"variance {self.variance!r} below clamp window")
            object.__setattr__(self, "variance", 0.0)

    @property
    def deviation(self) -> float:
        return math.sqrt(self.variance)


def embed(state: ProductState) -> PureState:
    """Tensor the local kets together into a full-space vector."""
    vec = np.ones(1, dtype=np.complex128)
    for ket in state.locals:
        vec = np.kron(vec, ket)
    return PureState(space=state.space, vector=vec)


@functools.lru_cache(maxsize=256)
def _digit_groups(dims: tuple[int, ...], party: int) -> tuple[np.ndarray, ...]:
    """Full-space indices grouped by the value of ``party``'s digit."""
    stride = math.prod(dims[party + 1 :])
    idx = np.arange(math.prod(dims))
    digit = (idx // stride) % dims[party]
    groups = tuple(np.flatnonzero(digit == c) for c in range(dims[party]))
    for g in groups:
        g.setflags(write=False)
    return groups


def reduced_matrix(
    h_matrix: np.ndarray, dims: tuple[int, ...], kets, party: int
) -> np.ndarray:
    """Raw d x d contraction of ``h_matrix`` with all kets except ``party``.

    Works by index arithmetic over the dense matrix: full-space indices
    are grouped by the party's own digit, and each output entry is a
    weighted block sum, so the cost is O(D^2) regardless of N.
    """
    weights = np.ones(1, dtype=np.complex128)
    for k, d in enumerate(dims):
        factor = np.ones(d, dtype=np.complex128) if k == party else kets[k]
        weights = np.kron(weights, factor)
    groups = _digit_groups(dims, party)
    d = dims[party]
    out = np.empty((d, d), dtype=np.complex128)
    for c in range(d):
        row_w = weights[groups[c]].conj()
        block_rows = h_matrix[groups[c], :]
        for c2 in range(d):
            col_w = weights[groups[c2]]
            out[c, c2] = row_w @ (block_rows[:, groups[c2]] @ col_w)
    return out


def partial_reduction(
    operator: HermitianOperator, state: ProductState, party: int
) -> HermitianOperator:
    """Contract an operator with every party's ket except ``party``.

    Returns the d_party x d_party operator whose expectation against any
    local ket equals the full expectation with that ket in slot ``party``.
    The party index is 0-based.
    """
    if operator.dim != state.space.dim:
        raise DimensionMismatchError(
            f"operator dim {operator.dim} != state space dim {state.space.dim}"
        )
    n = state.space.n_parties
    if not 0 <= party < n:
        raise DimensionMismatchError(f"party index {party} out of range for {n} parties")
    raw = reduced_matrix(operator.matrix, state.space.dims, state.locals, party)
    scale = float(np.abs(raw).max()) if raw.size else 0.0
    asym = max_asymmetry(raw)
    if asym > REDUCTION_HERMITICITY_TOL * (1.0 + scale):
        raise NonHermitianError("partial reduction lost Hermiticity", asym)
    return HermitianOperator(
        matrix=raw, space=SpaceDescriptor((state.space.dims[party],))
    )


def energy_stats(operator: HermitianOperator, state: PureState) -> EnergyStats:
    """Mean and variance of ``operator`` in ``state``.

    The variance is computed as ``||(H - <H>) psi||^2``, which cannot go
    negative by cancellation; tiny negative values from the subtraction
    inside the norm are clamped to zero by EnergyStats.
    """
    if operator.dim != state.vector.shape[0]:
        raise DimensionMismatchError(
            f"operator dim {operator.dim} != state dim {state.vector.shape[0]}"
        )
    hpsi = operator.matrix @ state.vector
    mean = float(np.vdot(state.vector, hpsi).real)
    centered = hpsi - mean * state.vector
    variance = float(np.vdot(centered, centered).real)
    return EnergyStats(mean=mean, variance=variance)
