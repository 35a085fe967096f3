"""Selects the compiled elimination kernel when it is importable.

Set ``SQUAREBRAID_PURE=1`` to force the pure-Python path.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_compiled = None

if os.environ.get("SQUAREBRAID_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None


def eliminate_units(nrows: int, ncols: int, colptr, rowidx, vals, backend: str | None = None):
    """Unit-pivot elimination; see ``_kernels_py.eliminate_units``.

    The compiled kernel works in int64 and raises ``OverflowError`` rather
    than wrap; in that case the exact Python path takes over.
    """
    use = backend or BACKEND
    if use == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        try:
            return _compiled.eliminate_units(nrows, ncols, colptr, rowidx, vals)
        except OverflowError:
            if backend == "compiled":
                raise
    return _kernels_py.eliminate_units(nrows, ncols, colptr, rowidx, vals)


def compiled_available() -> bool:
    return _compiled is not None
