"""Kernel backend selection.

Prefers the compiled Cython module ``_fast``; falls back to the
pure-Python reference ``_pyref``.  Force a backend with
``COILCORE_BACKEND=python`` or ``COILCORE_BACKEND=fast``.
"""

import os

_choice = os.environ.get("COILCORE_BACKEND", "auto").lower()

if _choice == "python":
    from . import _pyref as _impl
elif _choice == "fast":
    from . import _fast as _impl  # ImportError here is intentional: user asked for it
else:
    try:
        from . import _fast as _impl
    except ImportError:
        from . import _pyref as _impl

BACKEND = _impl.NAME
wf_value = _impl.wf_value
mag_rk4 = _impl.mag_rk4
rlc_rk4 = _impl.rlc_rk4
coilcore_rk4 = _impl.coilcore_rk4
