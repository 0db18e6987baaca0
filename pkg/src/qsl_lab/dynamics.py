"""Entangling, mean-field and open-system dynamics with trace-norm rates.

Closed full dynamics is propagated spectrally (exact up to the
eigensolver).  The nonlinear mean-field flow — each party driven by the
Hamiltonian partially reduced over the others — is integrated with
classical RK4 on the concatenated local kets, renormalizing each ket
every step.  Lindblad dynamics uses the same fixed-step RK4 on the
density matrix.  All comparisons of states elsewhere in the package are
phase-insensitive; trajectories here never fix global phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.optimize

from . import backend
from .config import resolve_hbar
from .errors import (
    DimensionMismatchError,
    NormalizationError,
    PositivityError,
    SeriesFormatError,
    StepSizeError,
)
from .linalg import HermitianOperator, hermitian_eig, trace_norm
from .spaces import (
    ProductState,
    PureState,
    SeparableEnsemble,
    embed,
    energy_stats,
    reduced_matrix,
)
from .speedlimits import SolverConfig, qsl_exact, qsl_sep_bound

STEP_RULE = 0.01
LOCAL_NORM_DRIFT_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-7
POSITIVITY_FLOOR = -1e-7
POSITIVITY_CHECK_EVERY = 100


@dataclass(frozen=True)
class RateRecord:
    """Extreme commutator eigenvalue gamma and the trace-norm rate 2|gamma|."""

    gamma: float
    rate: float

    def __post_init__(self):
        if self.rate != 2.0 * abs(self.gamma):
            raise ValueError("rate must equal 2|gamma| exactly")


@dataclass(frozen=True)
class Trajectory:
    """Time grid with per-step states, trace-norm rates, and mean energies.

    ``states`` holds PureState, ProductState, or raw density matrices
    depending on which propagator produced the run.
    """

    times: np.ndarray
    states: tuple
    rates: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        rates = np.asarray(self.rates, dtype=np.float64)
        energies = np.asarray(self.energies, dtype=np.float64)
        if not (len(times) == len(self.states) == len(rates) == len(energies)):
            raise DimensionMismatchError("trajectory columns have unequal lengths")
        for arr in (times, rates, energies):
            arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus jump operators h_k (units sqrt(1/time))."""

    hamiltonian: HermitianOperator
    jumps: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        dim = self.hamiltonian.dim
        cleaned = []
        for k, jump in enumerate(self.jumps):
            arr = np.array(jump, dtype=np.complex128)
            if arr.shape != (dim, dim):
                raise DimensionMismatchError(
                    f"jump {k} has shape {arr.shape}, expected {(dim, dim)}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"jump {k} contains non-finite entries")
            arr.setflags(write=False)
            cleaned.append(arr)
        object.__setattr__(self, "jumps", tuple(cleaned))

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim


@dataclass(frozen=True)
class WitnessVerdict:
    """Outcome of the two-time separability test over all grid intervals."""

    violated: bool
    max_excess: float
    violating_interval: tuple[float, float] | None

    def __post_init__(self):
        if self.violated != (self.max_excess > 0.0):
            raise ValueError("violated flag must equal (max_excess > 0)")


class LindbladSpeedBounds(NamedTuple):
    qsl_d: float
    total_closed: float
    total_sep: float
    qsl_d_upper: float


# ---------------------------------------------------------------------------
# rates
# ---------------------------------------------------------------------------


def rate_full(
    operator: HermitianOperator, state: PureState, *, hbar: float | None = None
) -> RateRecord:
    """Trace-norm rate of the full von Neumann flow at ``state``.

    gamma is the energy deviation over hbar; the rate 2|gamma| equals the
    trace norm of (1/i hbar)[H, rho].
    """
    hbar = resolve_hbar(hbar)
    stats = energy_stats(operator, state)
    gamma = stats.deviation / hbar
    return RateRecord(gamma=gamma, rate=2.0 * abs(gamma))


def rate_separable(
    operator: HermitianOperator, state: ProductState, *, hbar: float | None = None
) -> RateRecord:
    """Trace-norm rate of the mean-field flow at a product state.

    gamma^2 sums the per-party variances of the partially reduced
    Hamiltonians.
    """
    hbar = resolve_hbar(hbar)
    if operator.dim != state.space.dim:
        raise DimensionMismatchError(
            f"operator dim {operator.dim} != state space dim {state.space.dim}"
        )
    total = 0.0
    for j, ket in enumerate(state.locals):
        reduced = _mean_field_matrix(operator.matrix, state.space.dims, list(state.locals), j)
        centered = reduced @ ket - complex(np.vdot(ket, reduced @ ket)) * ket
        total += float(np.vdot(centered, centered).real)
    gamma = math.sqrt(max(total, 0.0)) / hbar
    return RateRecord(gamma=gamma, rate=2.0 * abs(gamma))


def _mean_field_matrix(h_matrix, dims, kets, party) -> np.ndarray:
    raw = reduced_matrix(h_matrix, dims, kets, party)
    return (raw + raw.conj().T) / 2.0


# ---------------------------------------------------------------------------
# closed full dynamics (spectral propagation)
# ---------------------------------------------------------------------------


def _validated_grid(times) -> np.ndarray:
    grid = np.asarray(times, dtype=np.float64).reshape(-1)
    if grid.size < 1:
        raise DimensionMismatchError("time grid must contain at least one point")
    if not np.all(np.isfinite(grid)):
        raise ValueError("time grid contains non-finite entries")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("time grid must be strictly ascending")
    return grid


def evolve_full(
    operator: HermitianOperator,
    psi0: PureState,
    times,
    *,
    hbar: float | None = None,
) -> Trajectory:
    """Exact closed evolution |psi(t)> = exp(-iH(t-t0)/hbar) |psi0>.

    ``psi0`` is the state at the first grid point.
    """
    hbar = resolve_hbar(hbar)
    grid = _validated_grid(times)
    if operator.dim != psi0.vector.shape[0]:
        raise DimensionMismatchError(
            f"operator dim {operator.dim} != state dim {psi0.vector.shape[0]}"
        )
    dec = hermitian_eig(operator)
    weights = dec.vectors.conj().T @ psi0.vector
    states = []
    rates = np.empty(grid.size)
    energies = np.empty(grid.size)
    for k, t in enumerate(grid):
        phases = np.exp(-1j * dec.values * ((t - grid[0]) / hbar))
        vec = dec.vectors @ (phases * weights)
        state = PureState(space=psi0.space, vector=vec)
        states.append(state)
        rates[k] = rate_full(operator, state, hbar=hbar).rate
        energies[k] = energy_stats(operator, state).mean
    return Trajectory(times=grid, states=tuple(states), rates=rates, energies=energies)


# ---------------------------------------------------------------------------
# mean-field (separable) dynamics
# ---------------------------------------------------------------------------


def _mean_field_derivative(
    h_matrix: np.ndarray,
    dims: tuple[int, ...],
    kets: list[np.ndarray],
    hbar: float,
) -> list[np.ndarray]:
    """Right-hand side -i/hbar * (reduced H_j) |a_j> evaluated at ``kets``."""
    out = []
    for j in range(len(dims)):
        reduced = _mean_field_matrix(h_matrix, dims, kets, j)
        out.append((-1j / hbar) * (reduced @ kets[j]))
    return out


def _rk4_local_step(
    h_at: Callable[[float], np.ndarray],
    dims: tuple[int, ...],
    kets: list[np.ndarray],
    t: float,
    dt: float,
    hbar: float,
) -> list[np.ndarray]:
    """One RK4 step of the coupled local equations, then renormalize."""
    k1 = _mean_field_derivative(h_at(t), dims, kets, hbar)
    y2 = [a + 0.5 * dt * d for a, d in zip(kets, k1)]
    k2 = _mean_field_derivative(h_at(t + 0.5 * dt), dims, y2, hbar)
    y3 = [a + 0.5 * dt * d for a, d in zip(kets, k2)]
    k3 = _mean_field_derivative(h_at(t + 0.5 * dt), dims, y3, hbar)
    y4 = [a + dt * d for a, d in zip(kets, k3)]
    k4 = _mean_field_derivative(h_at(t + dt), dims, y4, hbar)
    new = []
    for a, d1, d2, d3, d4 in zip(kets, k1, k2, k3, k4):
        ket = a + (dt / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        norm = float(np.linalg.norm(ket))
        if abs(norm - 1.0) > LOCAL_NORM_DRIFT_TOL:
            raise NormalizationError(
                f"local ket norm drifted to {norm!r} in one step; "
                "step size too large for this Hamiltonian"
            )
        new.append(ket / norm)
    return new


def evolve_separable(
    operator: HermitianOperator | Callable[[float], HermitianOperator],
    state0: ProductState,
    times,
    dt: float,
    *,
    hbar: float | None = None,
) -> Trajectory:
    """Integrate the nonlinear mean-field flow of the local kets.

    Each party obeys i hbar d|a_j>/dt = (H reduced over the others)|a_j>.
    ``operator`` may also be a callable t -> HermitianOperator for
    externally supplied time-dependent generators (the interaction
    picture uses this); the step-size rule is checked against the
    operator at the initial time.
    """
    hbar = resolve_hbar(hbar)
    grid = _validated_grid(times)
    dt = float(dt)
    if not dt > 0.0:
        raise StepSizeError(f"dt must be positive, got {dt!r}")

    if callable(operator):
        h_of_t = operator
    else:
        fixed = operator

        def h_of_t(_t: float) -> HermitianOperator:
            return fixed

    h0 = h_of_t(float(grid[0]))
    if h0.space is None or h0.space != state0.space:
        raise DimensionMismatchError("operator must carry the state's product space")
    h_norm = float(np.abs(hermitian_eig(h0).values).max())
    if dt * h_norm / hbar > STEP_RULE * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt*||H||/hbar = {dt * h_norm / hbar:.3e} exceeds the {STEP_RULE} step rule"
        )

    def matrix_at(t: float) -> np.ndarray:
        return h_of_t(t).matrix

    dims = state0.space.dims
    kets = [np.array(k) for k in state0.locals]
    states = [state0]
    rates = np.empty(grid.size)
    energies = np.empty(grid.size)
    rates[0] = rate_separable(h0, state0, hbar=hbar).rate
    energies[0] = energy_stats(h0, embed(state0)).mean
    for k in range(1, grid.size):
        span = float(grid[k] - grid[k - 1])
        n_sub = max(1, math.ceil(span / dt - 1e-9))
        h_sub = span / n_sub
        t = float(grid[k - 1])
        for _ in range(n_sub):
            kets = _rk4_local_step(matrix_at, dims, kets, t, h_sub, hbar)
            t += h_sub
        state = ProductState(space=state0.space, locals=tuple(kets))
        states.append(state)
        h_here = h_of_t(float(grid[k]))
        rates[k] = rate_separable(h_here, state, hbar=hbar).rate
        energies[k] = energy_stats(h_here, embed(state)).mean
    return Trajectory(times=grid, states=tuple(states), rates=rates, energies=energies)


def evolve_ensemble(
    operator: HermitianOperator,
    ensemble: SeparableEnsemble,
    times,
    dt: float,
    *,
    hbar: float | None = None,
) -> list[Trajectory]:
    """Evolve each mixture member independently; weights never change."""
    return [
        evolve_separable(operator, member, times, dt, hbar=hbar)
        for member in ensemble.members
    ]


# ---------------------------------------------------------------------------
# two-time witness
# ---------------------------------------------------------------------------


def witness_check(
    series: Sequence[tuple[float, float]],
    qsl_sep_plus: float,
    operator_norm: float,
) -> WitnessVerdict:
    """Test every interval of an expectation series against the cone bound.

    A pair (t_i, t_f) violates separability when
    |<L>_f - <L>_i| > (t_f - t_i) * qsl_sep_plus * operator_norm.
    """
    data = np.asarray(list(series), dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2:
        raise SeriesFormatError("series must be (t, value) pairs")
    if data.shape[0] < 2:
        raise SeriesFormatError("series needs at least two samples")
    if not np.all(np.isfinite(data)):
        raise SeriesFormatError("series contains non-finite entries")
    t = data[:, 0]
    if not np.all(np.diff(t) > 0.0):
        raise SeriesFormatError("series times must be strictly increasing")
    if not operator_norm > 0.0:
        raise ValueError(f"operator norm must be positive, got {operator_norm!r}")
    if qsl_sep_plus < 0.0:
        raise ValueError(f"qsl_sep_plus must be >= 0, got {qsl_sep_plus!r}")
    values = data[:, 1]
    slope = qsl_sep_plus * operator_norm
    diff = np.abs(values[None, :] - values[:, None]) - slope * (
        t[None, :] - t[:, None]
    )
    upper = np.triu_indices(t.size, k=1)
    excesses = diff[upper]
    best = int(np.argmax(excesses))
    max_excess = float(excesses[best])
    if max_excess > 0.0:
        i, f = upper[0][best], upper[1][best]
        return WitnessVerdict(
            violated=True,
            max_excess=max_excess,
            violating_interval=(float(t[i]), float(t[f])),
        )
    return WitnessVerdict(violated=False, max_excess=max_excess, violating_interval=None)


def cone_bounds(
    initial_value: float,
    qsl_sep_plus: float,
    operator_norm: float,
    times,
) -> tuple[np.ndarray, np.ndarray]:
    """(lower, upper) envelopes initial_value -/+ t * qsl_sep_plus * norm.

    ``times`` are elapsed times since the anchor point at which the
    expectation equals ``initial_value``.
    """
    grid = np.asarray(times, dtype=np.float64).reshape(-1)
    if not operator_norm > 0.0:
        raise ValueError(f"operator norm must be positive, got {operator_norm!r}")
    slope = qsl_sep_plus * operator_norm
    return initial_value - slope * grid, initial_value + slope * grid


# ---------------------------------------------------------------------------
# interaction picture
# ---------------------------------------------------------------------------


def interaction_picture_generator(
    local_terms: Sequence[HermitianOperator],
    coupling: HermitianOperator,
    *,
    hbar: float | None = None,
) -> Callable[[float], HermitianOperator]:
    """Factory for t -> (local propagators)^dagger coupling (local propagators).

    Local eigendecompositions are cached once, so repeated evaluation
    along a trajectory costs one small matrix product per party per call.
    """
    hbar = resolve_hbar(hbar)
    if coupling.space is None:
        raise DimensionMismatchError("coupling must carry its product space")
    dims = coupling.space.dims
    if len(local_terms) != len(dims):
        raise DimensionMismatchError(
            f"{len(local_terms)} local terms for {len(dims)} parties"
        )
    decs = []
    for term, d in zip(local_terms, dims):
        if term.dim != d:
            raise DimensionMismatchError(
                f"local term dim {term.dim} does not match party dim {d}"
            )
        decs.append(hermitian_eig(term))
    space = coupling.space

    def generator(t: float) -> HermitianOperator:
        u = np.ones((1, 1), dtype=np.complex128)
        for dec in decs:
            phases = np.exp(-1j * dec.values * (float(t) / hbar))
            u = np.kron(u, (dec.vectors * phases) @ dec.vectors.conj().T)
        effective = u.conj().T @ coupling.matrix @ u
        return HermitianOperator(matrix=effective, space=space)

    return generator


def interaction_picture(
    local_terms: Sequence[HermitianOperator],
    coupling: HermitianOperator,
    t: float,
    *,
    hbar: float | None = None,
) -> HermitianOperator:
    """Effective coupling at time t after absorbing the local dynamics."""
    return interaction_picture_generator(local_terms, coupling, hbar=hbar)(t)


# ---------------------------------------------------------------------------
# Lindblad dynamics
# ---------------------------------------------------------------------------


def dissipator(jumps: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """Sum_k h_k rho h_k^dagger - (1/2){h_k^dagger h_k, rho}."""
    out = np.zeros_like(rho)
    for jump in jumps:
        jr = jump @ rho
        out += jr @ jump.conj().T
        hh = jump.conj().T @ jump
        out -= 0.5 * (hh @ rho + rho @ hh)
    return out


def _lindblad_rhs(model: LindbladModel, rho: np.ndarray, hbar: float) -> np.ndarray:
    h = model.hamiltonian.matrix
    commutator = h @ rho - rho @ h
    return (-1j / hbar) * commutator + dissipator(model.jumps, rho)


def lindblad_rate(
    model: LindbladModel, rho: np.ndarray, *, hbar: float | None = None
) -> float:
    """Trace norm of the full generator applied to rho."""
    hbar = resolve_hbar(hbar)
    generator = _lindblad_rhs(model, rho, hbar)
    return trace_norm(HermitianOperator((generator + generator.conj().T) / 2.0))


def _validate_density(rho: np.ndarray, dim: int) -> np.ndarray:
    arr = np.array(rho, dtype=np.complex128)
    if arr.shape != (dim, dim):
        raise DimensionMismatchError(f"density matrix shape {arr.shape} != {(dim, dim)}")
    operator = HermitianOperator(arr)  # validates Hermiticity, hermitizes
    arr = np.array(operator.matrix)
    trace = float(np.trace(arr).real)
    if abs(trace - 1.0) > 1e-10:
        raise PositivityError(f"density matrix trace {trace!r} differs from 1")
    low = float(hermitian_eig(operator).values[0])
    if low < POSITIVITY_FLOOR:
        raise PositivityError(f"density matrix has eigenvalue {low:.3e} < {POSITIVITY_FLOOR}")
    return arr


def evolve_lindblad(
    model: LindbladModel,
    rho0: np.ndarray,
    times,
    dt: float,
    *,
    hbar: float | None = None,
) -> Trajectory:
    """Fixed-step RK4 integration of the Lindblad master equation.

    The density matrix is re-Hermitized every step; the trace must stay
    within 1e-7 of 1 and the spectrum above -1e-7 (checked every 100
    steps and at the end), else PositivityError.
    """
    hbar = resolve_hbar(hbar)
    grid = _validated_grid(times)
    dt = float(dt)
    if not dt > 0.0:
        raise StepSizeError(f"dt must be positive, got {dt!r}")
    rho = _validate_density(rho0, model.dim)
    h_norm = float(np.abs(hermitian_eig(model.hamiltonian).values).max())
    jump_scale = 0.0
    for jump in model.jumps:
        hh = jump.conj().T @ jump
        jump_scale += float(hermitian_eig(HermitianOperator(hh)).values[-1])
    scale = h_norm / hbar + jump_scale
    if dt * scale > STEP_RULE * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt*(||H||/hbar + sum ||h_k||^2) = {dt * scale:.3e} exceeds "
            f"the {STEP_RULE} step rule"
        )

    def check_positivity(matrix: np.ndarray) -> None:
        low = float(hermitian_eig(HermitianOperator(matrix)).values[0])
        if low < POSITIVITY_FLOOR:
            raise PositivityError(
                f"density matrix eigenvalue {low:.3e} fell below {POSITIVITY_FLOOR}"
            )

    states = []
    rates = np.empty(grid.size)
    energies = np.empty(grid.size)
    step_count = 0

    def record(k: int, matrix: np.ndarray) -> None:
        frozen = matrix.copy()
        frozen.setflags(write=False)
        states.append(frozen)
        rates[k] = lindblad_rate(model, matrix, hbar=hbar)
        energies[k] = float(np.trace(matrix @ model.hamiltonian.matrix).real)

    record(0, rho)
    for k in range(1, grid.size):
        span = float(grid[k] - grid[k - 1])
        n_sub = max(1, math.ceil(span / dt - 1e-9))
        h_sub = span / n_sub
        for _ in range(n_sub):
            k1 = _lindblad_rhs(model, rho, hbar)
            k2 = _lindblad_rhs(model, rho + 0.5 * h_sub * k1, hbar)
            k3 = _lindblad_rhs(model, rho + 0.5 * h_sub * k2, hbar)
            k4 = _lindblad_rhs(model, rho + h_sub * k3, hbar)
            rho = rho + (h_sub / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rho = (rho + rho.conj().T) / 2.0
            step_count += 1
            trace = float(np.trace(rho).real)
            if abs(trace - 1.0) > TRACE_DRIFT_TOL:
                raise PositivityError(
                    f"trace drifted to {trace!r} after {step_count} steps"
                )
            if step_count % POSITIVITY_CHECK_EVERY == 0:
                check_positivity(rho)
        record(k, rho)
    check_positivity(rho)
    return Trajectory(times=grid, states=tuple(states), rates=rates, energies=energies)


# ---------------------------------------------------------------------------
# open-system speed bounds
# ---------------------------------------------------------------------------


def _dissipator_rate(jumps, vec: np.ndarray) -> float:
    """Trace norm of D(|psi><psi|); raw kernel call, optimizer hot path."""
    psi = vec / np.linalg.norm(vec)
    rho = np.outer(psi, psi.conj())
    d = dissipator(jumps, rho)
    values, _, _ = backend.jacobi_diagonalize((d + d.conj().T) / 2.0)
    return float(np.abs(values).sum())


def lindblad_speed_bounds(
    model: LindbladModel,
    config: SolverConfig | None = None,
    *,
    hbar: float | None = None,
) -> LindbladSpeedBounds:
    """Dissipative speed estimate and the combined closed/separable bounds.

    qsl_d is a lower-bounding estimate of sup over pure states of
    ||D(|psi><psi|)||_1 from a seeded multistart with local polish; the
    analytic upper bound 2 sum_k ||h_k||_inf^2 is reported alongside.
    For a single-party Hamiltonian the separable limit coincides with
    the exact one.
    """
    hbar = resolve_hbar(hbar)
    config = config or SolverConfig()
    dim = model.dim

    upper = 0.0
    for jump in model.jumps:
        hh = jump.conj().T @ jump
        upper += 2.0 * float(hermitian_eig(HermitianOperator(hh)).values[-1])

    qsl_d = 0.0
    if model.jumps:
        rng = np.random.default_rng(config.seed)

        def objective(x: np.ndarray) -> float:
            vec = x[:dim] + 1j * x[dim:]
            norm = float(np.linalg.norm(vec))
            if norm < 1e-8:
                return 0.0
            return -_dissipator_rate(model.jumps, vec)

        best = 0.0
        for _ in range(config.starts):
            x0 = rng.standard_normal(2 * dim)
            result = scipy.optimize.minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 1500},
            )
            best = max(best, -float(result.fun))
        qsl_d = best

    closed = qsl_exact(model.hamiltonian, hbar=hbar).qsl
    space = model.hamiltonian.space
    if space is not None and space.n_parties >= 2:
        sep = qsl_sep_bound(model.hamiltonian, config, hbar=hbar).qsl_sep_plus
    else:
        sep = closed
    return LindbladSpeedBounds(
        qsl_d=qsl_d,
        total_closed=closed + qsl_d,
        total_sep=sep + qsl_d,
        qsl_d_upper=upper,
    )
