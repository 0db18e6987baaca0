"""Exact and separable quantum speed limits.

The exact limit is the spectral width of the Hamiltonian over hbar.  The
separable limit comes from the extreme stationary values of the energy
over product states, found by alternating per-party eigenvector updates
from a seeded multistart.  Both extremes certify their stationarity
through per-party residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import resolve_hbar
from .errors import DimensionMismatchError
from .linalg import HermitianOperator, hermitian_eig
from .spaces import ProductState, PureState, SpaceDescriptor, embed, reduced_matrix

DEGENERATE_REDUCTION_RTOL = 1e-12
STATIONARITY_RTOL = 1e-8
PERTURBATION_ANGLE = 1e-3


@dataclass(frozen=True)
class SolverConfig:
    """Multistart alternating-solver settings."""

    starts: int = 32
    max_iters: int = 10000
    tol: float = 1e-12
    seed: int = 1234

    def __post_init__(self):
        if int(self.starts) < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not float(self.tol) >= 0.0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit non-negative integer, got {self.seed}")
        object.__setattr__(self, "starts", int(self.starts))
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "tol", float(self.tol))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class SeparabilityEigenpair:
    """A stationary product state and its energy."""

    value: float
    state: ProductState
    converged: bool
    iterations: int


class ExactSpeedLimit(NamedTuple):
    qsl: float
    e_min: float
    e_max: float
    state: PureState


@dataclass(frozen=True)
class SpeedReport:
    """Exact and separable speed limits of one Hamiltonian, with certificates."""

    qsl: float
    qsl_sep_plus: float
    ratio: float
    ratio_infinite: bool
    e_min: float
    e_max: float
    e_min_sep: float
    e_max_sep: float
    n_parties: int
    extremal_state: PureState
    max_sep: SeparabilityEigenpair
    min_sep: SeparabilityEigenpair

    @property
    def converged(self) -> bool:
        return self.max_sep.converged and self.min_sep.converged


# ---------------------------------------------------------------------------
# exact limit
# ---------------------------------------------------------------------------


def qsl_exact(
    operator: HermitianOperator, *, hbar: float | None = None
) -> ExactSpeedLimit:
    """Spectral-width speed limit (E_max - E_min)/hbar with an extremal ket.

    The returned state is the balanced superposition of the lowest and
    highest eigenvectors, which attains the limit.
    """
    hbar = resolve_hbar(hbar)
    if operator.dim < 2:
        raise DimensionMismatchError("speed limits need dimension >= 2")
    dec = hermitian_eig(operator)
    e_min = float(dec.values[0])
    e_max = float(dec.values[-1])
    vec = (dec.vectors[:, 0] + dec.vectors[:, -1]) / math.sqrt(2.0)
    space = operator.space or SpaceDescriptor((operator.dim,))
    state = PureState(space=space, vector=vec)
    return ExactSpeedLimit((e_max - e_min) / hbar, e_min, e_max, state)


# ---------------------------------------------------------------------------
# alternating separability solver
# ---------------------------------------------------------------------------


def _reduced_matrix(
    h_matrix: np.ndarray, dims: tuple[int, ...], kets: list[np.ndarray], party: int
) -> np.ndarray:
    """Symmetrized contraction of all parties but ``party``."""
    raw = reduced_matrix(h_matrix, dims, kets, party)
    return (raw + raw.conj().T) / 2.0


def _perturb_kets(kets: list[np.ndarray], skip: int) -> None:
    """Deterministically rotate every ket except ``skip`` off a degenerate point."""
    c = math.cos(PERTURBATION_ANGLE)
    s = math.sin(PERTURBATION_ANGLE)
    for k, ket in enumerate(kets):
        if k == skip:
            continue
        new = ket.copy()
        new[0] = c * ket[0] - s * ket[1]
        new[1] = s * ket[0] + c * ket[1]
        kets[k] = new / np.linalg.norm(new)


def _alternating_solve(
    operator: HermitianOperator,
    start: tuple[np.ndarray, ...],
    sense: int,
    config: SolverConfig,
    h_norm: float,
) -> tuple[SeparabilityEigenpair, list[float]]:
    """Monotone alternating optimization from one start.

    ``sense`` +1 maximizes the product-state energy, -1 minimizes it.
    Returns the eigenpair candidate and the per-update objective trace.
    """
    dims = operator.space.dims
    h_matrix = operator.matrix
    kets = [np.array(v, dtype=np.complex128) for v in start]
    degenerate_floor = DEGENERATE_REDUCTION_RTOL * (1.0 + h_norm)
    pick = -1 if sense > 0 else 0
    trace: list[float] = []
    previous = None
    converged = False
    sweeps = 0
    for sweeps in range(1, config.max_iters + 1):
        current = None
        for j in range(len(dims)):
            reduced = _reduced_matrix(h_matrix, dims, kets, j)
            attempts = 0
            while (
                float(np.abs(reduced).max()) <= degenerate_floor and attempts < 3
            ):
                _perturb_kets(kets, j)
                reduced = _reduced_matrix(h_matrix, dims, kets, j)
                attempts += 1
            dec = hermitian_eig(reduced)
            kets[j] = dec.vectors[:, pick].copy()
            current = float(dec.values[pick])
            trace.append(current)
        if previous is not None and abs(current - previous) <= config.tol:
            converged = True
            break
        previous = current
    state = ProductState(space=operator.space, locals=tuple(kets))
    full = embed(state).vector
    value = float(np.vdot(full, h_matrix @ full).real)
    residual_ok = _stationarity_residual(operator, state, value) <= (
        STATIONARITY_RTOL * max(h_norm, 1e-300)
    )
    pair = SeparabilityEigenpair(
        value=value,
        state=state,
        converged=converged and residual_ok,
        iterations=sweeps,
    )
    return pair, trace


def _stationarity_residual(
    operator: HermitianOperator, state: ProductState, value: float
) -> float:
    """Largest per-party norm of (reduced H) ket - value * ket."""
    kets = list(state.locals)
    worst = 0.0
    for j in range(len(kets)):
        reduced = _reduced_matrix(operator.matrix, operator.space.dims, kets, j)
        worst = max(worst, float(np.linalg.norm(reduced @ kets[j] - value * kets[j])))
    return worst


def _haar_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def _draw_starts(
    dims: tuple[int, ...], config: SolverConfig
) -> list[tuple[np.ndarray, ...]]:
    rng = np.random.default_rng(config.seed)
    return [
        tuple(_haar_ket(rng, d) for d in dims) for _ in range(config.starts)
    ]


def _require_product_space(operator: HermitianOperator) -> SpaceDescriptor:
    if operator.space is None:
        raise DimensionMismatchError(
            "separability analysis needs an operator with an attached product space"
        )
    if operator.space.n_parties < 2:
        raise DimensionMismatchError("separability analysis needs at least two parties")
    return operator.space


def _extremes(
    operator: HermitianOperator, config: SolverConfig, h_norm: float
) -> tuple[SeparabilityEigenpair, SeparabilityEigenpair]:
    starts = _draw_starts(operator.space.dims, config)
    best_max = best_min = None
    for start in starts:
        pair, _ = _alternating_solve(operator, start, +1, config, h_norm)
        if best_max is None or pair.value > best_max.value:
            best_max = pair
        pair, _ = _alternating_solve(operator, start, -1, config, h_norm)
        if best_min is None or pair.value < best_min.value:
            best_min = pair
    return best_max, best_min


def separability_extremes(
    operator: HermitianOperator, config: SolverConfig | None = None
) -> tuple[SeparabilityEigenpair, SeparabilityEigenpair]:
    """Extreme stationary product-state energies (max first, then min).

    Every start is run to convergence for both senses and the best value
    wins, ties resolved in favor of the earliest start, so results are a
    deterministic function of the matrix bits and the config.
    """
    _require_product_space(operator)
    config = config or SolverConfig()
    h_norm = float(np.abs(hermitian_eig(operator).values).max())
    return _extremes(operator, config, h_norm)


def qsl_sep_bound(
    operator: HermitianOperator,
    config: SolverConfig | None = None,
    *,
    hbar: float | None = None,
) -> SpeedReport:
    """Exact speed limit, separable bound, and their ratio, with certificates."""
    hbar = resolve_hbar(hbar)
    space = _require_product_space(operator)
    config = config or SolverConfig()
    dec = hermitian_eig(operator)
    e_min = float(dec.values[0])
    e_max = float(dec.values[-1])
    h_norm = float(np.abs(dec.values).max())
    max_pair, min_pair = _extremes(operator, config, h_norm)
    qsl = (e_max - e_min) / hbar
    qsl_sep_plus = (
        math.sqrt(space.n_parties) * (max_pair.value - min_pair.value) / hbar
    )
    if qsl_sep_plus > 0.0:
        ratio = qsl / qsl_sep_plus
        ratio_infinite = False
    else:
        ratio = math.inf
        ratio_infinite = True
    extremal = (dec.vectors[:, 0] + dec.vectors[:, -1]) / math.sqrt(2.0)
    return SpeedReport(
        qsl=qsl,
        qsl_sep_plus=qsl_sep_plus,
        ratio=ratio,
        ratio_infinite=ratio_infinite,
        e_min=e_min,
        e_max=e_max,
        e_min_sep=min_pair.value,
        e_max_sep=max_pair.value,
        n_parties=space.n_parties,
        extremal_state=PureState(space=space, vector=extremal),
        max_sep=max_pair,
        min_sep=min_pair,
    )
