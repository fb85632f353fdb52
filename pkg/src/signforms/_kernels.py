"""Kernel dispatch: compiled extension when available, numpy fallback otherwise."""

from __future__ import annotations

try:
    from signforms import _accel as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from signforms import _kernels_py as _impl

    BACKEND = "python"

best_sign_pattern = _impl.best_sign_pattern


def kernel_backend() -> str:
    """Name of the active enumeration backend: 'compiled' or 'python'."""
    return BACKEND
