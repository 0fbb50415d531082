"""Hot kernels: compiled extension when built, pure Python otherwise.

Set ``ORDFREE_PURE=1`` to force the fallback.
"""

import os

from . import _pure

BACKEND = "pure"

if os.environ.get("ORDFREE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _pure
else:
    _impl = _pure

pl_apply = _impl.pl_apply
search_relation = _impl.search_relation

__all__ = ["BACKEND", "pl_apply", "search_relation"]
