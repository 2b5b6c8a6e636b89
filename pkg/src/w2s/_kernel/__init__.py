"""Boosting kernel backends.

The compiled Cython kernel is preferred when its extension built; the numpy
backend is a bit-identical fallback. Set W2S_BACKEND=pure or =compiled to
force one (forcing an unavailable backend is an error).
"""

import os

from . import pure
from .pure import (STATUS_OK, STATUS_PERFECT, STATUS_SHORTFALL,
                   best_stump, stump_precompute)

try:
    from . import _fastcore as _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("W2S_BACKEND")
if _forced == "pure":
    _impl = pure
elif _forced == "compiled":
    if _compiled is None:
        raise ImportError("W2S_BACKEND=compiled but the compiled kernel is not built")
    _impl = _compiled
elif _forced:
    raise ImportError(f"unknown W2S_BACKEND {_forced!r}")
else:
    _impl = _compiled if _compiled is not None else pure

BACKEND = _impl.BACKEND_NAME
stump_boost_rounds = _impl.stump_boost_rounds
table_boost_rounds = _impl.table_boost_rounds


def available_backends():
    out = {"pure": pure}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
