"""Backend selection for the codeword sweep kernel.

The compiled extension is used when it imports; ``Z4LEE_BACKEND=python``
forces the numpy fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("Z4LEE_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels

HASH_PRIME = _pykernels.HASH_PRIME


def sweep_block(*args, backend=None):
    if backend == "python":
        return _pykernels.sweep_block(*args)
    if backend == "compiled":
        from . import _ckernels

        return _ckernels.sweep_block(*args)
    return _impl.sweep_block(*args)


def available_backends() -> list[str]:
    out = ["python"]
    try:
        from . import _ckernels  # noqa: F401

        out.append("compiled")
    except ImportError:
        pass
    return out
