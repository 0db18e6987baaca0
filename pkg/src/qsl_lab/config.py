"""Global numerical conventions: hbar and the tensor-dimension cap."""

from __future__ import annotations

import contextlib

DEFAULT_DIM_CAP = 4096

_hbar = 1.0


def get_hbar() -> float:
    """Current value of the reduced Planck constant (default 1.0)."""
    return _hbar


def set_hbar(value: float) -> None:
    """Set the global hbar; must be a positive finite number."""
    global _hbar
    value = float(value)
    if not value > 0.0 or value != value or value == float("inf"):
        raise ValueError(f"hbar must be positive and finite, got {value!r}")
    _hbar = value


@contextlib.contextmanager
def hbar_set_to(value: float):
    """Temporarily override hbar within a with-block."""
    previous = get_hbar()
    set_hbar(value)
    try:
        yield
    finally:
        set_hbar(previous)


def resolve_hbar(value: float | None) -> float:
    """Return ``value`` if given (validated), else the global hbar."""
    if value is None:
        return get_hbar()
    value = float(value)
    if not value > 0.0 or value == float("inf"):
        raise ValueError(f"hbar must be positive and finite, got {value!r}")
    return value
