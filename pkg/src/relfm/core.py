"""Backend selection: compiled query kernels with a pure-Python fallback.

The environment variable RFMX_BACKEND forces "c" or "py"; by default the
compiled module is used when it imports cleanly.  Both backends expose the
same classes over the same packed arrays, so they are interchangeable.
"""

import os

from relfm import _core_py

_forced = os.environ.get("RFMX_BACKEND", "").strip().lower()

if _forced == "py":
    kernel = _core_py
elif _forced == "c":
    from relfm import _core_c as kernel  # fail loudly when forced
elif _forced:
    raise ValueError(f"unknown RFMX_BACKEND {_forced!r} (use 'c' or 'py')")
else:
    try:
        from relfm import _core_c as kernel
    except ImportError:
        kernel = _core_py

BACKEND = kernel.BACKEND


def backends():
    """All importable kernel modules, for equivalence tests and benchmarks."""
    out = [_core_py]
    try:
        from relfm import _core_c

        out.append(_core_c)
    except ImportError:
        pass
    return out
