"""Kernel backend selection: compiled extension when available, else pure.

Set SS3_PURE=1 to force the pure-Python kernels (used by the benchmark to
measure the speedup, and as an escape hatch on platforms without a
C toolchain).
"""

import os

from . import pure

if os.environ.get("SS3_PURE") == "1":
    impl = pure
else:
    try:
        from . import _fast as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pure

BACKEND = impl.BACKEND
