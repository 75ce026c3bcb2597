"""Enumeration kernel backend selection.

Prefers the compiled extension when it imported cleanly; set FMREASON_PURE=1
to force the pure-Python fallback.  Both backends expose the same two
functions and are kept behaviorally identical.
"""

import os

from . import pure

if os.environ.get("FMREASON_PURE", "") not in ("", "0"):
    backend = pure
else:
    try:
        from . import _fast as backend  # type: ignore[no-redef]
    except ImportError:
        backend = pure

BACKEND_NAME = backend.NAME
sweep_certain = backend.sweep_certain
sweep_minimum = backend.sweep_minimum

OP_AND = pure.OP_AND
OP_OR = pure.OP_OR
OP_NOT = pure.OP_NOT
OP_CONST = pure.OP_CONST
MODE_CODE = {
    "m": pure.MODE_M,
    "h": pure.MODE_H,
    "l": pure.MODE_L,
    "t": pure.MODE_T,
    "f": pure.MODE_F,
}
