"""Hot CSR kernels with a compiled core and a numpy fallback.

The compiled extension is preferred when importable. Set
``MULAP_KERNELS=python`` to force the fallback (used by the benchmark and
by backend-parity tests); ``MULAP_KERNELS=compiled`` raises if the
extension is missing rather than silently degrading.
"""

import os

from . import _pykernels

_forced = os.environ.get("MULAP_KERNELS", "").strip().lower()

if _forced == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _pykernels
        BACKEND = "python"

laplacian_csr = _impl.laplacian_csr
gamma_csr = _impl.gamma_csr
bfs_csr = _impl.bfs_csr
eccentricities_csr = _impl.eccentricities_csr


def backend_name():
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return BACKEND
