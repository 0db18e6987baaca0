"""Propagators, trace-norm rates, witness cone, interaction picture, Lindblad."""

import math

import numpy as np
import pytest

from qsl_lab.dynamics import (
    LindbladModel,
    cone_bounds,
    dissipator,
    evolve_ensemble,
    evolve_full,
    evolve_lindblad,
    evolve_separable,
    interaction_picture,
    interaction_picture_generator,
    lindblad_rate,
    lindblad_speed_bounds,
    rate_full,
    rate_separable,
    witness_check,
)
from qsl_lab.errors import SeriesFormatError, StepSizeError
from qsl_lab.linalg import HermitianOperator, hermitian_eig, unitary_exp
from qsl_lab.models import (
    QuditModelParams,
    SwapModelParams,
    build_qudit,
    build_swap,
    qudit_full_closed,
    swap_separable_closed,
)
from qsl_lab.spaces import (
    ProductState,
    PureState,
    SeparableEnsemble,
    SpaceDescriptor,
    embed,
)
from qsl_lab.speedlimits import SolverConfig, qsl_sep_bound, separability_extremes
from conftest import (
    fidelity,
    haar_ket,
    random_hermitian,
    random_operator,
    random_product_state,
)

FAST = SolverConfig(starts=8, seed=13)

SZ0 = np.diag([1.0, -1.0, 1.0, -1.0]).astype(np.complex128)


def _phase_aligned_error(v, w):
    overlap = np.vdot(w, v)
    return float(np.linalg.norm(v * (overlap.conjugate() / abs(overlap)) - w))


# -- trace-norm rates --------------------------------------------------------------


def test_rate_full_eigenstate_is_zero(rng):
    op = random_operator(rng, (2, 2))
    vec = hermitian_eig(op).vectors[:, 1]
    psi = PureState(space=op.space, vector=vec)
    assert rate_full(op, psi).rate == pytest.approx(0.0, abs=1e-12)


def test_rate_full_consistency_500_random(rng):
    """2*sqrt(variance)/hbar must equal the brute-force commutator trace norm."""
    for _ in range(500):
        dim = int(rng.integers(2, 9))
        h = random_hermitian(rng, dim)
        psi = haar_ket(rng, dim)
        op = HermitianOperator(h, space=SpaceDescriptor((dim,)))
        record = rate_full(op, PureState(space=op.space, vector=psi))
        rho = np.outer(psi, psi.conj())
        commutator = (h @ rho - rho @ h) / 1j
        brute = float(np.abs(np.linalg.eigvalsh(commutator)).sum())
        assert record.rate == pytest.approx(brute, abs=1e-9)
        assert record.rate == pytest.approx(2.0 * abs(record.gamma), abs=0.0)


def test_rate_full_matches_central_difference_oracle(rng):
    eps = 1e-6
    op = random_operator(rng, (2, 3))
    psi = haar_ket(rng, 6)
    record = rate_full(op, PureState(space=op.space, vector=psi))
    plus = unitary_exp(op, eps) @ psi
    minus = unitary_exp(op, -eps) @ psi
    diff = np.outer(plus, plus.conj()) - np.outer(minus, minus.conj())
    oracle = float(np.abs(np.linalg.eigvalsh(diff)).sum()) / (2.0 * eps)
    assert record.rate == pytest.approx(oracle, abs=1e-5)


def test_rate_separable_stationary_state_is_zero(rng):
    op = random_operator(rng, (2, 2))
    hi, lo = separability_extremes(op, FAST)
    assert rate_separable(op, hi.state).rate == pytest.approx(0.0, abs=1e-6)
    assert rate_separable(op, lo.state).rate == pytest.approx(0.0, abs=1e-6)


def test_rate_separable_matches_product_derivative_trace_norm(rng):
    """The mean-field density derivative is rank-2; its trace norm must equal
    twice the root of the summed local variances."""
    for dims in ((2, 2), (2, 3), (2, 2, 2)):
        from qsl_lab.spaces import partial_reduction

        op = random_operator(rng, dims)
        state = random_product_state(rng, dims)
        record = rate_separable(op, state)
        total = int(np.prod(dims))
        derivative = np.zeros((total, total), dtype=np.complex128)
        for j in range(len(dims)):
            reduced = partial_reduction(op, state, j).matrix
            rho_j = np.outer(state.locals[j], state.locals[j].conj())
            local_dot = (reduced @ rho_j - rho_j @ reduced) / 1j
            factors = [
                np.outer(k, k.conj()) for k in state.locals
            ]
            factors[j] = local_dot
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            derivative += term
        brute = float(np.abs(np.linalg.eigvalsh(derivative)).sum())
        assert record.rate == pytest.approx(brute, abs=1e-9)


def test_rate_separable_bounded_by_sep_limit_on_models(rng):
    """1000 random product states per example model stay under the bound."""
    from qsl_lab.models import NModeModelParams, build_nmode

    cases = [
        build_swap(SwapModelParams(kappa=1.0, q=0.0))[0],
        build_qudit(QuditModelParams(d=3)),
        build_nmode(NModeModelParams(n_parties=3, k_split=1, gamma=1.0)),
    ]
    for op in cases:
        bound = qsl_sep_bound(op, FAST).qsl_sep_plus
        for _ in range(1000):
            state = random_product_state(rng, op.space.dims)
            assert rate_separable(op, state).rate <= bound + 1e-8


# -- full propagation -----------------------------------------------------------


def test_evolve_full_starts_at_initial_state(rng):
    op = random_operator(rng, (2, 2))
    psi0 = PureState(space=op.space, vector=haar_ket(rng, 4))
    traj = evolve_full(op, psi0, [0.0, 0.4])
    assert fidelity(traj.states[0], psi0) == pytest.approx(1.0, abs=1e-14)


def test_evolve_full_swaps_orthogonal_pair_at_quarter_period(rng):
    kappa = 1.0
    h, _ = build_swap(SwapModelParams(kappa=kappa, q=0.0))
    a = haar_ket(rng, 2)
    b_raw = haar_ket(rng, 2)
    b = b_raw - np.vdot(a, b_raw) * a
    b = b / np.linalg.norm(b)
    state0 = ProductState.from_locals([a, b])
    t_swap = math.pi / (2.0 * kappa)
    traj = evolve_full(h, embed(state0), [0.0, t_swap])
    swapped = ProductState.from_locals([b, a])
    assert fidelity(traj.states[-1], swapped) >= 1.0 - 1e-10


def test_evolve_full_matches_projector_closed_form(rng):
    params = QuditModelParams(d=3)
    h = build_qudit(params)
    state0 = random_product_state(rng, (3, 3))
    times = np.linspace(0.0, 7.0, 9)
    traj = evolve_full(h, embed(state0), times)
    for k, t in enumerate(times):
        closed = qudit_full_closed(state0, params, float(t))
        assert fidelity(traj.states[k], closed) >= 1.0 - 1e-10


def test_evolve_full_conserves_norm_energy_and_rate(rng):
    op = random_operator(rng, (2, 3))
    psi0 = PureState(space=op.space, vector=haar_ket(rng, 6))
    traj = evolve_full(op, psi0, np.linspace(0.0, 5.0, 21))
    r0 = rate_full(op, psi0).rate
    for k in range(21):
        assert np.linalg.norm(traj.states[k].vector) == pytest.approx(1.0, abs=1e-8)
        assert traj.rates[k] == pytest.approx(r0, abs=1e-9)
    energy_span = traj.energies.max() - traj.energies.min()
    assert energy_span <= 1e-7 * abs(traj.energies[0]) + 1e-9


# -- separable propagation ---------------------------------------------------------


def test_evolve_separable_identical_locals_is_stationary(rng):
    h, _ = build_swap(SwapModelParams(kappa=1.0, q=1.0))
    a = haar_ket(rng, 2)
    state0 = ProductState.from_locals([a, a])
    traj = evolve_separable(h, state0, np.linspace(0.0, 2.0, 5), 0.005)
    for state in traj.states:
        assert fidelity(state, state0) >= 1.0 - 1e-10


def test_evolve_separable_matches_swap_closed_form(rng):
    kappa = 1.0
    for q in (0.25, 0.6):
        params = SwapModelParams(kappa=kappa, q=q)
        h, state0 = build_swap(params)
        times = np.linspace(0.0, 4.0, 9)
        traj = evolve_separable(h, state0, times, 0.005)
        for k, t in enumerate(times):
            closed = swap_separable_closed(state0, kappa, float(t))
            assert fidelity(traj.states[k], closed) >= 1.0 - 1e-6
        local = traj.states[-1].locals[0]
        tau = abs(q) * kappa * float(times[-1])
        expected = math.cos(tau) * state0.locals[0] - 1j * (
            np.conj(q) / abs(q)
        ) * math.sin(tau) * state0.locals[1]
        overlap = abs(np.vdot(expected, local))
        assert overlap >= 1.0 - 1e-6


def test_evolve_separable_full_transfer_at_slowed_quarter_period():
    kappa = 1.0
    for q in (0.25, 0.5, 0.75):
        h, state0 = build_swap(SwapModelParams(kappa=kappa, q=q))
        t_star = math.pi / (2.0 * q * kappa)
        traj = evolve_separable(h, state0, [0.0, t_star], 0.005)
        swapped = ProductState.from_locals([state0.locals[1], state0.locals[0]])
        assert fidelity(traj.states[-1], swapped) >= 1.0 - 1e-6


def test_evolve_separable_energy_constant(rng):
    op = random_operator(rng, (2, 2, 2))
    state0 = random_product_state(rng, (2, 2, 2))
    h_norm = float(np.abs(hermitian_eig(op).values).max())
    traj = evolve_separable(op, state0, np.linspace(0.0, 1.0, 5), 0.009 / h_norm)
    span = traj.energies.max() - traj.energies.min()
    assert span <= 1e-7 * abs(traj.energies[0]) + 1e-9


def test_evolve_separable_fourth_order_convergence():
    """Halving dt must shrink the final-state error by at least 8x."""
    h, state0 = build_swap(SwapModelParams(kappa=1.0, q=0.5))
    grid = np.array([0.0, 2.0])
    closed = embed(swap_separable_closed(state0, 1.0, 2.0)).vector

    def defect(dt):
        final = embed(evolve_separable(h, state0, grid, dt).states[-1]).vector
        return _phase_aligned_error(final, closed)

    d1, d2, d3 = defect(0.0066), defect(0.0033), defect(0.00165)
    assert d1 / d2 >= 8.0
    assert d2 / d3 >= 8.0
    assert 1.0 - fidelity(
        embed(evolve_separable(h, state0, grid, 0.0066).states[-1]).vector, closed
    ) <= 1e-12


def test_evolve_separable_rejects_large_step():
    h, state0 = build_swap(SwapModelParams(kappa=1.0, q=0.3))
    with pytest.raises(StepSizeError):
        evolve_separable(h, state0, [0.0, 1.0], 0.5)


def test_evolve_ensemble_keeps_weights_and_members_independent(rng):
    op = random_operator(rng, (2, 2))
    members = tuple(random_product_state(rng, (2, 2)) for _ in range(3))
    weights = (0.2, 0.5, 0.3)
    ensemble = SeparableEnsemble(weights=weights, members=members)
    h_norm = float(np.abs(hermitian_eig(op).values).max())
    dt = 0.009 / h_norm
    times = [0.0, 0.3]
    trajectories = evolve_ensemble(op, ensemble, times, dt)
    assert ensemble.weights == weights
    for member, traj in zip(members, trajectories):
        alone = evolve_separable(op, member, times, dt)
        assert fidelity(traj.states[-1], alone.states[-1]) == pytest.approx(1.0)


# -- witness and cone ------------------------------------------------------------


def test_witness_constant_series_not_violated():
    series = [(0.0, 0.5), (1.0, 0.5), (2.0, 0.5)]
    verdict = witness_check(series, 1.0, 1.0)
    assert not verdict.violated
    assert verdict.max_excess <= 0.0
    assert verdict.violating_interval is None


def test_witness_separable_swap_never_violated_over_100_overlaps(rng):
    """Local observable along mean-field flows must respect the cone."""
    kappa = 0.5
    h, _ = build_swap(SwapModelParams(kappa=kappa, q=0.0))
    bound = qsl_sep_bound(h, FAST).qsl_sep_plus
    times = np.linspace(0.0, 1.0, 9)
    for _ in range(100):
        q = float(rng.uniform(0.0, 1.0))
        _, state0 = build_swap(SwapModelParams(kappa=kappa, q=q))
        traj = evolve_separable(h, state0, times, 0.01)
        series = [
            (float(t), float(np.vdot(embed(s).vector, SZ0 @ embed(s).vector).real))
            for t, s in zip(times, traj.states)
        ]
        verdict = witness_check(series, bound, 1.0)
        assert not verdict.violated


def test_witness_flags_full_swap_below_crossing():
    """Grid search over Pauli pair observables certifies the fast regime."""
    kappa = 1.0
    q = 0.2
    h, state0 = build_swap(SwapModelParams(kappa=kappa, q=q))
    bound = qsl_sep_bound(h, FAST).qsl_sep_plus
    times = np.linspace(0.0, 0.8, 17)
    traj = evolve_full(h, embed(state0), times)
    paulis = {
        "0": np.eye(2, dtype=np.complex128),
        "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
        "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
        "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    }
    found = None
    for name_a, pa in paulis.items():
        for name_b, pb in paulis.items():
            if name_a == name_b == "0":
                continue
            observable = np.kron(pa, pb)
            norm = 1.0
            series = [
                (float(t), float(np.vdot(s.vector, observable @ s.vector).real))
                for t, s in zip(times, traj.states)
            ]
            verdict = witness_check(series, bound, norm)
            if verdict.violated:
                found = (name_a + name_b, verdict)
                break
        if found:
            break
    assert found is not None
    assert found[1].max_excess > 0.0
    assert found[1].violating_interval is not None


def test_witness_rejects_malformed_series():
    with pytest.raises(SeriesFormatError):
        witness_check([], 1.0, 1.0)
    with pytest.raises(SeriesFormatError):
        witness_check([(0.0, 1.0)], 1.0, 1.0)
    with pytest.raises(SeriesFormatError):
        witness_check([(0.0, 1.0), (0.0, 2.0)], 1.0, 1.0)
    with pytest.raises(SeriesFormatError):
        witness_check([(0.0, 1.0), (1.0, float("nan"))], 1.0, 1.0)


def test_cone_bounds_anchor_and_slope():
    lower, upper = cone_bounds(0.4, 1.5, 2.0, [0.0, 1.0, 2.0])
    assert lower[0] == upper[0] == pytest.approx(0.4)
    assert upper[1] - lower[1] == pytest.approx(2.0 * 1.5 * 2.0)
    assert upper[2] - lower[2] == pytest.approx(2.0 * 2.0 * 1.5 * 2.0)


def test_cone_contains_measured_separable_series(rng):
    kappa = 0.5
    h, state0 = build_swap(SwapModelParams(kappa=kappa, q=0.45))
    bound = qsl_sep_bound(h, FAST).qsl_sep_plus
    times = np.linspace(0.0, 2.0, 17)
    traj = evolve_separable(h, state0, times, 0.01)
    values = np.array(
        [float(np.vdot(embed(s).vector, SZ0 @ embed(s).vector).real) for s in traj.states]
    )
    lower, upper = cone_bounds(values[0], bound, 1.0, times - times[0])
    assert np.all(values >= lower - 1e-9)
    assert np.all(values <= upper + 1e-9)


# -- interaction picture -----------------------------------------------------------


def test_interaction_picture_zero_coupling(rng):
    space = SpaceDescriptor((2, 2))
    locals_h = [HermitianOperator(random_hermitian(rng, 2)) for _ in range(2)]
    zero = HermitianOperator(np.zeros((4, 4), dtype=np.complex128), space=space)
    for t in (0.0, 0.7, 3.0):
        assert np.max(np.abs(interaction_picture(locals_h, zero, t).matrix)) == 0.0


def test_interaction_picture_zero_locals_is_identity_map(rng):
    space = SpaceDescriptor((2, 2))
    locals_h = [HermitianOperator(np.zeros((2, 2))) for _ in range(2)]
    coupling = random_operator(rng, (2, 2))
    moved = interaction_picture(locals_h, coupling, 1.3)
    assert np.max(np.abs(moved.matrix - coupling.matrix)) < 1e-12


def test_interaction_picture_equivalence_single_model(rng):
    """Mean-field flow of local+coupling terms, locally unrotated, equals the
    mean-field flow generated by the rotating-frame coupling alone."""
    space = SpaceDescriptor((2, 2))
    locals_h = [HermitianOperator(random_hermitian(rng, 2)) for _ in range(2)]
    coupling = random_operator(rng, (2, 2))
    lifted = (
        np.kron(locals_h[0].matrix, np.eye(2))
        + np.kron(np.eye(2), locals_h[1].matrix)
        + coupling.matrix
    )
    total = HermitianOperator(lifted, space=space)
    state0 = random_product_state(rng, (2, 2))
    t_end = 1.2
    h_norm = float(np.abs(hermitian_eig(total).values).max())
    dt = 0.009 / h_norm
    lab = evolve_separable(total, state0, [0.0, t_end], dt)
    rotated_locals = [
        unitary_exp(locals_h[j], t_end).conj().T @ lab.states[-1].locals[j]
        for j in range(2)
    ]
    generator = interaction_picture_generator(locals_h, coupling)
    frame = evolve_separable(generator, state0, [0.0, t_end], dt)
    for j in range(2):
        overlap = abs(np.vdot(frame.states[-1].locals[j], rotated_locals[j]))
        assert overlap >= 1.0 - 1e-6


# -- Lindblad ---------------------------------------------------------------------


def test_lindblad_no_jumps_matches_unitary(rng):
    op = random_operator(rng, (2, 2))
    psi0 = haar_ket(rng, 4)
    rho0 = np.outer(psi0, psi0.conj())
    model = LindbladModel(hamiltonian=op)
    times = np.linspace(0.0, 1.0, 5)
    h_norm = float(np.abs(hermitian_eig(op).values).max())
    traj = evolve_lindblad(model, rho0, times, 0.009 / h_norm)
    unitary = evolve_full(op, PureState(space=op.space, vector=psi0), times)
    for k in range(len(times)):
        pure = np.outer(unitary.states[k].vector, unitary.states[k].vector.conj())
        assert np.max(np.abs(traj.states[k] - pure)) < 1e-7


def test_lindblad_amplitude_damping_decay():
    gamma = 0.8
    jump = math.sqrt(gamma) * np.array([[0, 1], [0, 0]], dtype=np.complex128)
    model = LindbladModel(
        hamiltonian=HermitianOperator(np.zeros((2, 2), dtype=np.complex128)),
        jumps=(jump,),
    )
    rho0 = np.diag([0.0, 1.0]).astype(np.complex128)
    times = np.linspace(0.0, 3.0, 7)
    traj = evolve_lindblad(model, rho0, times, 0.01 / gamma)
    for k, t in enumerate(times):
        assert traj.states[k][1, 1].real == pytest.approx(
            math.exp(-gamma * float(t)), abs=1e-7
        )
        assert float(np.trace(traj.states[k]).real) == pytest.approx(1.0, abs=1e-7)


def test_lindblad_unital_fixes_maximally_mixed(rng):
    jumps = (
        np.array([[0, 1], [1, 0]], dtype=np.complex128) / 2.0,
        np.array([[1, 0], [0, -1]], dtype=np.complex128) / 3.0,
    )
    model = LindbladModel(
        hamiltonian=HermitianOperator(random_hermitian(rng, 2)), jumps=jumps
    )
    rho0 = np.eye(2, dtype=np.complex128) / 2.0
    traj = evolve_lindblad(model, rho0, [0.0, 2.0], 0.002)
    assert np.max(np.abs(traj.states[-1] - rho0)) < 1e-8


def test_lindblad_speed_bounds_no_jumps(rng):
    model = LindbladModel(hamiltonian=random_operator(rng, (2, 2)))
    bounds = lindblad_speed_bounds(model, SolverConfig(starts=4, seed=2))
    assert bounds.qsl_d == pytest.approx(0.0, abs=1e-12)
    assert bounds.qsl_d_upper == pytest.approx(0.0, abs=1e-12)


def test_lindblad_speed_bounds_amplitude_damping():
    gamma = 0.6
    jump = math.sqrt(gamma) * np.array([[0, 1], [0, 0]], dtype=np.complex128)
    model = LindbladModel(
        hamiltonian=HermitianOperator(np.zeros((2, 2), dtype=np.complex128)),
        jumps=(jump,),
    )
    bounds = lindblad_speed_bounds(model, SolverConfig(starts=6, seed=4))
    assert bounds.qsl_d >= 2.0 * gamma - 1e-6
    assert bounds.qsl_d <= bounds.qsl_d_upper + 1e-12
    rho1 = np.diag([0.0, 1.0]).astype(np.complex128)
    assert lindblad_rate(model, rho1) == pytest.approx(2.0 * gamma, abs=1e-10)


def test_lindblad_rate_never_exceeds_total_closed(rng):
    for _ in range(3):
        h = random_operator(rng, (2, 2))
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        model = LindbladModel(hamiltonian=h, jumps=(0.3 * g,))
        bounds = lindblad_speed_bounds(model, SolverConfig(starts=6, seed=8))
        psi0 = haar_ket(rng, 4)
        rho0 = np.outer(psi0, psi0.conj())
        h_norm = float(np.abs(hermitian_eig(h).values).max())
        jump_scale = sum(
            float(np.abs(np.linalg.eigvalsh(j.conj().T @ j)).max()) for j in model.jumps
        )
        dt = 0.009 / (h_norm + jump_scale)
        traj = evolve_lindblad(model, rho0, np.linspace(0.0, 0.5, 6), dt)
        for rate in traj.rates:
            assert rate <= bounds.total_closed + 1e-6


def test_dissipator_of_hand_example():
    gamma = 1.0
    jump = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    rho1 = np.diag([0.0, 1.0]).astype(np.complex128)
    d = dissipator((jump,), rho1)
    assert np.allclose(d, gamma * np.diag([1.0, -1.0]), atol=1e-14)
