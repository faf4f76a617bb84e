"""Hot loops of the automaton engine.

The compiled extension is used when it was built; otherwise the pure-Python
module with identical semantics is loaded.  Set ``AUTOSPLINE_PURE_PYTHON=1``
to force the fallback.
"""
import os

from ._pykernels import StateBudgetExceeded

if os.environ.get("AUTOSPLINE_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND = "cython" if _impl.__name__.endswith("_ckernels") else "python"

subset_construction = _impl.subset_construction
moore_partition = _impl.moore_partition
live_states = _impl.live_states

__all__ = ["BACKEND", "StateBudgetExceeded", "subset_construction",
           "moore_partition", "live_states"]
