"""Kernel backend selection.

The JIT backend is the default.  Set CPAMAC_NUMBA=0 (or false/no/off) to force
the pure-numpy fallback; the fallback is also picked automatically when numba
cannot be imported.  `python -m cpamac.bench` compares the two.
"""

import os

_flag = os.environ.get("CPAMAC_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from . import _kernels_numba as _impl

        _BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        _BACKEND = "numpy"
else:
    from . import _kernels_numpy as _impl

    _BACKEND = "numpy"

pair_stats = _impl.pair_stats
q_sum = _impl.q_sum
qp_draw_values = _impl.qp_draw_values


def backend_name() -> str:
    """Active kernel backend, "numba" or "numpy"."""
    return _BACKEND
