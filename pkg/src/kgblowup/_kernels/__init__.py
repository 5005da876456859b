"""Hot-loop kernels for the method-of-lines right-hand side.

The compiled Cython stencil is preferred; a NumPy reference implementation
with the same signature is selected when the extension is unavailable or
when ``KGBLOWUP_PURE=1`` is set.  ``BACKEND`` records which one is active.
"""

import os

if os.environ.get("KGBLOWUP_PURE", "0") not in ("", "0"):
    from ._reference import radial_accel

    BACKEND = "python"
else:
    try:
        from ._stencil import radial_accel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from ._reference import radial_accel  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["radial_accel", "BACKEND"]
