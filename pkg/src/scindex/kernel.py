"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``SCINDEX_FORCE_KERNEL=pure`` (or ``compiled``) to pin the choice;
``scindex.kernel.BACKEND`` reports what is in use.  Both backends produce
identical dicts, so the choice never affects results, only speed.
"""

import os

from . import _kernel_py

_force = os.environ.get("SCINDEX_FORCE_KERNEL", "").lower()

if _force == "pure":
    _impl = _kernel_py
elif _force == "compiled":
    from . import _kernel_c as _impl  # ImportError here is deliberate
else:
    try:
        from . import _kernel_c as _impl
    except ImportError:
        _impl = _kernel_py

BACKEND = "compiled" if _impl.__name__.endswith("_kernel_c") else "pure"

poly_mul_into = _impl.poly_mul_into
poly_axpy = _impl.poly_axpy
poly_canonize = _impl.poly_canonize
