"""Reference model builders and their closed-form solutions.

Three exactly solvable families are provided:

* ``swap``: two qubits coupled by an isotropic exchange interaction.
* ``qudit``: two d-level systems with a rank-one projector coupling whose
  ground state is maximally entangled.
* ``nmode``: N qubits with a single collective raising/lowering coupling
  split K against N-K.

Each family comes with closed-form dynamics and rate/speedup values used
as oracles by the test suite and the figure generator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .config import resolve_hbar
from .errors import DimensionCapError, DimensionMismatchError
from .linalg import HermitianOperator, kron
from .spaces import ProductState, PureState, SpaceDescriptor

NMODE_PARTY_CAP = 12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI_0 = np.eye(2, dtype=np.complex128)

_LOWERING = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |0><1|


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SwapModelParams:
    """Exchange-coupled qubit pair; ``q`` is the initial ket overlap <a|b>."""

    kappa: float
    q: complex = 0.0

    def __post_init__(self):
        kappa = float(self.kappa)
        if not math.isfinite(kappa) or kappa == 0.0:
            raise ValueError(f"kappa must be finite and non-zero, got {kappa!r}")
        q = complex(self.q)
        if not cmath.isfinite(q):
            raise ValueError("q must be finite")
        if abs(q) > 1.0 + 1e-12:
            raise ValueError(f"|q| must be <= 1, got {abs(q)!r}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class QuditModelParams:
    """Two d-level parties; projector coupling onto a maximally entangled ket."""

    d: int
    e0: float = 0.0
    e_perp: float = 1.0

    def __post_init__(self):
        d = int(self.d)
        if d < 2:
            raise ValueError(f"local dimension must be >= 2, got {d}")
        e0, e_perp = float(self.e0), float(self.e_perp)
        if not (math.isfinite(e0) and math.isfinite(e_perp)) or not e_perp > e0:
            raise ValueError(f"need finite e_perp > e0, got {e0!r}, {e_perp!r}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e0", e0)
        object.__setattr__(self, "e_perp", e_perp)

    @property
    def gap(self) -> float:
        return self.e_perp - self.e0


@dataclass(frozen=True)
class NModeModelParams:
    """N qubits, collective coupling raising the first ``k_split`` parties."""

    n_parties: int
    k_split: int
    gamma: complex = 1.0

    def __post_init__(self):
        n = int(self.n_parties)
        k = int(self.k_split)
        if n < 2:
            raise ValueError(f"need at least two parties, got {n}")
        if n > NMODE_PARTY_CAP:
            raise DimensionCapError(
                f"{n} parties exceed the {NMODE_PARTY_CAP}-party cap"
            )
        if not 0 <= k <= n:
            raise ValueError(f"k_split must lie in [0, {n}], got {k}")
        gamma = complex(self.gamma)
        if not cmath.isfinite(gamma) or gamma == 0:
            raise ValueError(f"gamma must be finite and non-zero, got {gamma!r}")
        object.__setattr__(self, "n_parties", n)
        object.__setattr__(self, "k_split", k)
        object.__setattr__(self, "gamma", gamma)


@dataclass(frozen=True)
class ClosedFormParams:
    """Inputs of the two-party closed-form separable solution.

    ``coupling_sign`` is +1 for the exchange model and -1 for the
    projector model; ``q`` is the relevant initial overlap and ``tau``
    the dimensionless evolution phase.  ``delta`` is derived.
    """

    coupling_sign: int
    q: complex
    tau: float
    delta: float = field(init=False)

    def __post_init__(self):
        sign = int(self.coupling_sign)
        if sign not in (1, -1):
            raise ValueError(f"coupling_sign must be +1 or -1, got {sign}")
        q = complex(self.q)
        if not cmath.isfinite(q) or abs(q) > 1.0 + 1e-12:
            raise ValueError(f"overlap q must be finite with |q| <= 1, got {q!r}")
        tau = float(self.tau)
        if not math.isfinite(tau):
            raise ValueError(f"tau must be finite, got {tau!r}")
        half = (1.0 - sign) / 2.0
        delta = math.sqrt(max(half * half + sign * abs(q) ** 2, 0.0))
        object.__setattr__(self, "coupling_sign", sign)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "delta", delta)


# ---------------------------------------------------------------------------
# model builders
# ---------------------------------------------------------------------------


def build_swap(
    params: SwapModelParams, *, hbar: float | None = None
) -> tuple[HermitianOperator, ProductState]:
    """Exchange Hamiltonian (hbar kappa / 2) (XX + YY + ZZ) and its initial pair.

    The first ket is |0>; the second is q|0> + sqrt(1-|q|^2)|1> with the
    |1> component chosen real and non-negative.
    """
    hbar = resolve_hbar(hbar)
    coupling = (
        kron(PAULI_X, PAULI_X) + kron(PAULI_Y, PAULI_Y) + kron(PAULI_Z, PAULI_Z)
    )
    h = HermitianOperator(
        matrix=(hbar * params.kappa / 2.0) * coupling,
        space=SpaceDescriptor((2, 2)),
    )
    rest = math.sqrt(max(1.0 - abs(params.q) ** 2, 0.0))
    state = ProductState.from_locals(
        [
            np.array([1.0, 0.0], dtype=np.complex128),
            np.array([params.q, rest], dtype=np.complex128),
        ]
    )
    return h, state


def maximally_entangled_state(d: int) -> PureState:
    """(1/sqrt d) sum_n |nn> on a (d, d) space."""
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = 1.0 / math.sqrt(d)
    return PureState(space=SpaceDescriptor((d, d)), vector=vec)


def build_qudit(params: QuditModelParams) -> HermitianOperator:
    """Projector model: every level at e_perp except the entangled ground ket at e0."""
    ground = maximally_entangled_state(params.d).vector
    projector = np.outer(ground, ground.conj())
    matrix = -params.gap * projector + params.e_perp * np.eye(
        params.d**2, dtype=np.complex128
    )
    return HermitianOperator(matrix=matrix, space=SpaceDescriptor((params.d, params.d)))


def build_nmode(params: NModeModelParams) -> HermitianOperator:
    """Collective coupling gamma (raise first K, lower last N-K) plus conjugate."""
    term = np.ones((1, 1), dtype=np.complex128)
    for j in range(params.n_parties):
        factor = _LOWERING.conj().T if j < params.k_split else _LOWERING
        term = kron(term, factor)
    matrix = params.gamma * term
    matrix = matrix + matrix.conj().T
    return HermitianOperator(
        matrix=matrix, space=SpaceDescriptor((2,) * params.n_parties)
    )


def nmode_extreme_state(params: NModeModelParams, sign: int = +1) -> PureState:
    """Eigenvector of the collective coupling with eigenvalue +/- |gamma|.

    These are the balanced superpositions of the two participating basis
    kets (all-excited on the raised block versus all-excited on the
    lowered block), with the relative phase set by gamma.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    n, k = params.n_parties, params.k_split
    low = _basis_index(["0"] * k + ["1"] * (n - k))
    high = _basis_index(["1"] * k + ["0"] * (n - k))
    vec = np.zeros(2**n, dtype=np.complex128)
    phase = params.gamma / abs(params.gamma)
    vec[low] = 1.0 / math.sqrt(2.0)
    vec[high] = sign * phase / math.sqrt(2.0)
    return PureState(space=SpaceDescriptor((2,) * n), vector=vec)


def _basis_index(bits) -> int:
    return int("".join(bits), 2)


# ---------------------------------------------------------------------------
# closed-form dynamics
# ---------------------------------------------------------------------------


def closed_form_coefficients(params: ClosedFormParams) -> tuple[complex, complex]:
    """Coefficients (c, s) of the separable solution in the initial-ket basis.

    The evolving local ket is ``c * (own initial ket) + s * (partner ket)``
    where the partner ket is the other party's initial ket for the
    exchange model and its complex conjugate for the projector model.
    A global phase exp(-i tau (1 + sign)/2) is suppressed.
    """
    sign, q, tau, delta = (
        params.coupling_sign,
        params.q,
        params.tau,
        params.delta,
    )
    if delta < 1e-15:
        # degenerate limit: expand sin(tau*delta)/delta -> tau
        c = 1.0 + 1j * ((1.0 - sign) / 2.0) * tau
        s = -1j * q.conjugate() * tau
    else:
        sin_part = math.sin(tau * delta)
        c = math.cos(tau * delta) + 1j * ((1.0 - sign) / (2.0 * delta)) * sin_part
        s = -1j * (q.conjugate() / delta) * sin_part
    return complex(c), complex(s)


def swap_phase_time(t: float, kappa: float) -> float:
    """Dimensionless phase for the exchange model (hbar cancels)."""
    return float(kappa) * float(t)


def qudit_phase_time(
    t: float, params: QuditModelParams, *, hbar: float | None = None
) -> float:
    """Dimensionless phase for the projector model."""
    hbar = resolve_hbar(hbar)
    return -params.gap * float(t) / (hbar * params.d)


def swap_separable_closed(
    state0: ProductState, kappa: float, t: float
) -> ProductState:
    """Mean-field trajectory of the exchange pair, up to local global phases."""
    a0, b0 = state0.locals
    q = complex(np.vdot(a0, b0))
    tau = swap_phase_time(t, kappa)
    c_a, s_a = closed_form_coefficients(ClosedFormParams(1, q, tau))
    c_b, s_b = closed_form_coefficients(ClosedFormParams(1, q.conjugate(), tau))
    return ProductState(
        space=state0.space,
        locals=(c_a * a0 + s_a * b0, c_b * b0 + s_b * a0),
    )


def swap_full_closed(state0: ProductState, kappa: float, t: float) -> PureState:
    """Exact trajectory of the exchange pair, up to a global phase."""
    a0, b0 = state0.locals
    tau = swap_phase_time(t, kappa)
    vec = math.cos(tau) * np.kron(a0, b0) - 1j * math.sin(tau) * np.kron(b0, a0)
    return PureState(space=state0.space, vector=vec)


def qudit_separable_closed(
    state0: ProductState, params: QuditModelParams, t: float, *, hbar: float | None = None
) -> ProductState:
    """Mean-field trajectory of the projector pair, up to local global phases."""
    a0, b0 = state0.locals
    q = complex(np.sum(a0 * b0)).conjugate()
    tau = qudit_phase_time(t, params, hbar=hbar)
    c, s = closed_form_coefficients(ClosedFormParams(-1, q, tau))
    return ProductState(
        space=state0.space,
        locals=(c * a0 + s * b0.conj(), c * b0 + s * a0.conj()),
    )


def qudit_full_closed(
    state0: ProductState, params: QuditModelParams, t: float, *, hbar: float | None = None
) -> PureState:
    """Exact trajectory of the projector pair, up to a global phase."""
    hbar = resolve_hbar(hbar)
    a0, b0 = state0.locals
    if a0.shape[0] != params.d:
        raise DimensionMismatchError(
            f"state has local dimension {a0.shape[0]}, model has {params.d}"
        )
    ground = maximally_entangled_state(params.d).vector
    product = np.kron(a0, b0)
    overlap = complex(np.vdot(ground, product))
    factor = cmath.exp(1j * params.gap * t / hbar) - 1.0
    return PureState(space=state0.space, vector=product + factor * overlap * ground)


def swap_motion_invariant(state: ProductState) -> np.ndarray:
    """|a><a| + |b><b|: constant along exchange-model mean-field flow."""
    a, b = state.locals
    return np.outer(a, a.conj()) + np.outer(b, b.conj())


def qudit_motion_invariant(state: ProductState) -> np.ndarray:
    """|b*><b*| - |a><a|: constant along projector-model mean-field flow."""
    a, b = state.locals
    bc = b.conj()
    return np.outer(bc, bc.conj()) - np.outer(a, a.conj())


# ---------------------------------------------------------------------------
# analytic rates and speedups
# ---------------------------------------------------------------------------


def analytic_rates(params: SwapModelParams) -> tuple[float, float]:
    """(full, separable) trace-norm rates of the exchange pair at t=0.

    Both are constant along the flow; hbar cancels.
    """
    qa = abs(params.q)
    kap = abs(params.kappa)
    full = 2.0 * kap * math.sqrt(max(1.0 - qa**4, 0.0))
    separable = 2.0 * math.sqrt(2.0) * kap * qa * math.sqrt(max(1.0 - qa**2, 0.0))
    return full, separable


def qudit_speedup(d: int) -> float:
    """Entangling-over-separable speed ratio of the projector model."""
    return d / math.sqrt(2.0)


def nmode_speedup(n: int) -> float:
    """Entangling-over-separable speed ratio of the collective-coupling model."""
    return 2.0 ** (n - 1) / math.sqrt(n)


def nmode_separable_extreme(params: NModeModelParams) -> float:
    """Largest separable expectation of the collective coupling: |gamma|/2^(N-1)."""
    return abs(params.gamma) / 2.0 ** (params.n_parties - 1)
