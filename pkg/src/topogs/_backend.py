"""Kernel selection.

The compiled ``topogs._kernels`` extension is used when it imports; otherwise
the pure-Python twin.  Setting ``TOPOGS_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from topogs import _kernels_py

kernels: ModuleType
name: str


def _select() -> tuple[ModuleType, str]:
    if os.environ.get("TOPOGS_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from topogs import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "compiled"


kernels, name = _select()


def use(backend: str) -> None:
    """Switch backends at runtime (``"python"`` or ``"compiled"``)."""
    global kernels, name
    if backend == "python":
        kernels, name = _kernels_py, "python"
    elif backend == "compiled":
        from topogs import _kernels
        kernels, name = _kernels, "compiled"
    else:
        raise ValueError(f"unknown backend {backend!r}")


def compiled_available() -> bool:
    try:
        from topogs import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
