"""Tokenizer kernel selection.

Prefers the compiled extension when it is built; falls back to the pure
regex kernel otherwise.  Set RARELEX_PURE=1 to force the fallback (used by
the parity tests and the benchmark).
"""

import os

from . import _pytokenize

if os.environ.get("RARELEX_PURE"):
    _impl = _pytokenize
    BACKEND = "python"
else:
    try:
        from . import _ctokenize as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _pytokenize
        BACKEND = "python"

tokenize = _impl.tokenize
count_into = _impl.count_into
