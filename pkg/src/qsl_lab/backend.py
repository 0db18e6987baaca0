"""Selects the eigensolver kernel backend at import time.

The compiled extension is preferred when present; the pure numpy fallback
is used otherwise.  Set ``QSL_LAB_BACKEND`` to ``compiled`` or ``python``
to force a choice (``compiled`` raises if the extension is missing), or
leave it at ``auto``.
"""

from __future__ import annotations

import os

from . import _core_py

_VALID = ("auto", "compiled", "python")
_requested = os.environ.get("QSL_LAB_BACKEND", "auto").strip().lower()
if _requested not in _VALID:
    raise ImportError(
        f"QSL_LAB_BACKEND={_requested!r} is not one of {', '.join(_VALID)}"
    )

_compiled = None
if _requested in ("auto", "compiled"):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

if _requested == "compiled" and _compiled is None:
    raise ImportError(
        "QSL_LAB_BACKEND=compiled but the compiled kernel is not importable; "
        "reinstall with a C toolchain or use QSL_LAB_BACKEND=python"
    )

if _compiled is not None and _requested != "python":
    _kernels = _compiled
    BACKEND = "compiled"
else:
    _kernels = _core_py
    BACKEND = "python"

jacobi_diagonalize = _kernels.jacobi_diagonalize


def available_backends() -> tuple[str, ...]:
    """Names of kernel backends importable in this environment."""
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    else:
        try:
            from . import _core  # noqa: F401
            names.insert(0, "compiled")
        except ImportError:
            pass
    return tuple(names)
