"""Kernel dispatch: compiled extension when importable, Python otherwise.

Set ``NORMSPEC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

try:
    if os.environ.get("NORMSPEC_PURE_PYTHON"):
        raise ImportError("fallback forced by NORMSPEC_PURE_PYTHON")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

BACKEND = "cython" if compiled is not None else "python"
_impl = compiled if compiled is not None else python

# the compiled family kernel stores sets as uint64
_WORD_BITS = 64

find_nonassociative = _impl.find_nonassociative
subgroup_closure = _impl.subgroup_closure
is_product_closed = _impl.is_product_closed


def close_family(start, gens, use_union, cap, width):
    """Worklist closure of a set family; ``width`` is the number of points."""
    if width > _WORD_BITS:
        return python.close_family(start, gens, use_union, cap)
    return _impl.close_family(start, gens, use_union, cap)
