"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-Python twin.  Set
QC7_PURE_KERNEL=1 to force the fallback (useful for parity checks and
benchmarking).  Both backends are bit-identical; everything above this
module is backend-agnostic.
"""

import os

if os.environ.get("QC7_PURE_KERNEL", "") not in ("", "0"):
    from . import _kernel_pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_pure as _impl

        BACKEND = "pure"

NVARS = _impl.NVARS
MAX_EXP = _impl.MAX_EXP

pack = _impl.pack
unpack = _impl.unpack
normalize = _impl.normalize
kadd = _impl.kadd
kneg = _impl.kneg
kscale = _impl.kscale
kmul = _impl.kmul
kdiff = _impl.kdiff
kreduce_sphere = _impl.kreduce_sphere
keval = _impl.keval
kintegrate = _impl.kintegrate
kmul_integrate = _impl.kmul_integrate


def backend_name():
    return BACKEND
