"""Shared helpers for the test suite."""

import numpy as np
import pytest

from qsl_lab.linalg import HermitianOperator
from qsl_lab.spaces import ProductState, SpaceDescriptor, embed


def random_hermitian(rng, dim, scale=1.0):
    """Dense GUE-style Hermitian matrix with entries of size ~scale."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2.0


def random_operator(rng, dims, scale=1.0):
    """Random Hermitian operator attached to a product space."""
    total = int(np.prod(dims))
    return HermitianOperator(
        random_hermitian(rng, total, scale), space=SpaceDescriptor(tuple(dims))
    )


def haar_ket(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_product_state(rng, dims):
    return ProductState.from_locals([haar_ket(rng, d) for d in dims])


def fidelity(x, y):
    """|<x|y>|^2 for unit vectors; accepts states or raw arrays."""
    xv = embed(x).vector if hasattr(x, "locals") else getattr(x, "vector", x)
    yv = embed(y).vector if hasattr(y, "locals") else getattr(y, "vector", y)
    return abs(np.vdot(np.asarray(xv), np.asarray(yv))) ** 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
