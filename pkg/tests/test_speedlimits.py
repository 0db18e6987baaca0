"""Exact spectral speed limits and the product-state (separable) bound."""

import math

import numpy as np
import pytest

from qsl_lab.dynamics import rate_full, rate_separable
from qsl_lab.linalg import HermitianOperator, hermitian_eig
from qsl_lab.models import (
    NModeModelParams,
    QuditModelParams,
    SwapModelParams,
    build_nmode,
    build_qudit,
    build_swap,
    maximally_entangled_state,
)
from qsl_lab.spaces import SpaceDescriptor, embed
from qsl_lab.speedlimits import (
    SolverConfig,
    _alternating_solve,
    _draw_starts,
    qsl_exact,
    qsl_sep_bound,
    separability_extremes,
)
from conftest import random_operator

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)

FAST = SolverConfig(starts=8, seed=7)


# -- exact limit ----------------------------------------------------------------


def test_qsl_exact_swap_model():
    h, _ = build_swap(SwapModelParams(kappa=1.0, q=0.0))
    result = qsl_exact(h)
    assert result.qsl == pytest.approx(2.0, abs=1e-12)
    assert result.e_min == pytest.approx(-1.5, abs=1e-12)
    assert result.e_max == pytest.approx(0.5, abs=1e-12)


def test_qsl_exact_qudit_model():
    assert qsl_exact(build_qudit(QuditModelParams(d=3))).qsl == pytest.approx(1.0)


def test_qsl_exact_identity_is_zero():
    op = HermitianOperator(np.eye(4, dtype=np.complex128), space=SpaceDescriptor((2, 2)))
    assert qsl_exact(op).qsl == pytest.approx(0.0, abs=1e-12)


def test_qsl_exact_scales_with_hbar(rng):
    op = random_operator(rng, (2, 2))
    assert qsl_exact(op, hbar=2.0).qsl == pytest.approx(qsl_exact(op).qsl / 2.0)


def test_qsl_exact_extremal_state_attains_limit(rng):
    op = random_operator(rng, (2, 3))
    result = qsl_exact(op)
    assert rate_full(op, result.state).rate == pytest.approx(result.qsl, rel=1e-10)


# -- separability extremes --------------------------------------------------------


def test_extremes_of_swap_operator():
    op = HermitianOperator(SWAP, space=SpaceDescriptor((2, 2)))
    hi, lo = separability_extremes(op, FAST)
    assert hi.value == pytest.approx(1.0, abs=1e-9)
    assert lo.value == pytest.approx(0.0, abs=1e-9)
    assert hi.converged and lo.converged


def test_extremes_of_entangled_projector():
    d = 3
    phi = maximally_entangled_state(d).vector
    op = HermitianOperator(np.outer(phi, phi.conj()), space=SpaceDescriptor((d, d)))
    hi, lo = separability_extremes(op, FAST)
    assert hi.value == pytest.approx(1.0 / d, abs=1e-9)
    assert lo.value == pytest.approx(0.0, abs=1e-9)


def test_extremes_of_three_mode_generator():
    op = build_nmode(NModeModelParams(n_parties=3, k_split=1, gamma=1.0))
    hi, lo = separability_extremes(op, FAST)
    assert hi.value == pytest.approx(0.25, abs=1e-9)
    assert lo.value == pytest.approx(-0.25, abs=1e-9)


def test_extreme_states_are_stationary(rng):
    """Returned product states satisfy the per-party eigenvector equations."""
    from qsl_lab.spaces import partial_reduction

    op = random_operator(rng, (2, 3))
    hi, lo = separability_extremes(op, FAST)
    for pair in (hi, lo):
        for j in range(2):
            reduced = partial_reduction(op, pair.state, j).matrix
            ket = pair.state.locals[j]
            residual = reduced @ ket - pair.value * ket
            assert np.max(np.abs(residual)) < 1e-7


def test_sandwich_property_and_width_bound(rng):
    """Product-state expectations live inside the spectral range."""
    quick = SolverConfig(starts=6, seed=3)
    count = 0
    for _ in range(200):
        n = int(rng.integers(2, 4))
        dims = tuple(int(rng.integers(2, 4)) for _ in range(n))
        op = random_operator(rng, dims)
        report = qsl_sep_bound(op, quick)
        assert report.e_min <= report.e_min_sep + 1e-9
        assert report.e_min_sep <= report.e_max_sep + 1e-12
        assert report.e_max_sep <= report.e_max + 1e-9
        assert report.qsl >= (report.e_max_sep - report.e_min_sep) - 1e-9
        count += 1
    assert count == 200


def test_alternating_solver_monotone_per_sweep(rng):
    op = random_operator(rng, (2, 2, 3))
    h_norm = float(np.abs(hermitian_eig(op).values).max())
    starts = _draw_starts(op.space.dims, SolverConfig(starts=5, seed=21))
    for start in starts:
        for sense in (+1, -1):
            _, trace = _alternating_solve(op, start, sense, SolverConfig(), h_norm)
            steps = np.diff(np.asarray(trace))
            if sense > 0:
                assert np.all(steps >= -1e-12)
            else:
                assert np.all(steps <= 1e-12)


def test_solver_determinism_bitwise(rng):
    op = random_operator(rng, (2, 3))
    first = qsl_sep_bound(op, SolverConfig(starts=12, seed=5))
    second = qsl_sep_bound(op, SolverConfig(starts=12, seed=5))
    assert first.qsl_sep_plus == second.qsl_sep_plus
    assert first.e_max_sep == second.e_max_sep and first.e_min_sep == second.e_min_sep
    for a, b in zip(first.max_sep.state.locals, second.max_sep.state.locals):
        assert np.array_equal(a, b)


# -- combined report -------------------------------------------------------------


def test_report_swap_model():
    h, _ = build_swap(SwapModelParams(kappa=1.0, q=0.0))
    report = qsl_sep_bound(h, FAST)
    assert report.qsl == pytest.approx(2.0, abs=1e-9)
    assert report.qsl_sep_plus == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert report.ratio == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert not report.ratio_infinite
    assert report.n_parties == 2 and report.converged


def test_report_qudit_model():
    report = qsl_sep_bound(build_qudit(QuditModelParams(d=3)), FAST)
    assert report.ratio == pytest.approx(3.0 / math.sqrt(2.0), abs=1e-9)
    assert report.e_min_sep == pytest.approx(1.0 - 1.0 / 3.0, abs=1e-9)
    assert report.e_max_sep == pytest.approx(1.0, abs=1e-9)


def test_report_nmode_four_parties():
    report = qsl_sep_bound(
        build_nmode(NModeModelParams(n_parties=4, k_split=1, gamma=1.0)), FAST
    )
    assert report.qsl_sep_plus == pytest.approx(0.5, abs=1e-9)
    assert report.ratio == pytest.approx(4.0, abs=1e-8)


def test_report_identity_sets_infinity_flag():
    op = HermitianOperator(
        2.0 * np.eye(4, dtype=np.complex128), space=SpaceDescriptor((2, 2))
    )
    report = qsl_sep_bound(op, FAST)
    assert report.ratio_infinite
    assert math.isinf(report.ratio)
    assert report.qsl == pytest.approx(0.0, abs=1e-12)


def test_separable_bound_tight_for_balanced_swap_overlap():
    params = SwapModelParams(kappa=1.0, q=math.sqrt(0.5))
    h, state = build_swap(params)
    report = qsl_sep_bound(h, FAST)
    assert rate_separable(h, state).rate == pytest.approx(
        report.qsl_sep_plus, abs=1e-8
    )


def test_single_party_space_rejected(rng):
    op = HermitianOperator(np.eye(3, dtype=np.complex128), space=SpaceDescriptor((3,)))
    with pytest.raises(Exception):
        qsl_sep_bound(op, FAST)


def test_operator_without_space_rejected(rng):
    from conftest import random_hermitian

    op = HermitianOperator(random_hermitian(rng, 4))
    with pytest.raises(Exception):
        separability_extremes(op, FAST)
