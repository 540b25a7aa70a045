"""Kernel backend selection.

The dense per-pixel loops (Sobel, Gaussian blur, vote aggregation,
eigendecomposition, diffusion) exist twice: a numba @njit build and a pure
numpy build with identical arithmetic order. The active backend is chosen by
the CHARTFIELD_BACKEND environment variable ("numba" or "numpy"); unset means
numba when importable, numpy otherwise.
"""

from __future__ import annotations

import importlib
import os

ENV_VAR = "CHARTFIELD_BACKEND"

_MODULES = {
    "numpy": "chartfield._kernels_numpy",
    "numba": "chartfield._kernels_numba",
}
_cache: dict[str, object] = {}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def selected_backend() -> str:
    """Backend name resolved from the environment."""
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice:
        if choice not in _MODULES:
            raise ValueError(
                f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
            )
        return choice
    return "numba" if _numba_available() else "numpy"


def get_kernels(name: str | None = None):
    """Return the kernel module for `name` (default: selected backend)."""
    name = name or selected_backend()
    if name not in _cache:
        _cache[name] = importlib.import_module(_MODULES[name])
    return _cache[name]
