"""SPL_THREADS handling.

The environment variable caps internal parallelism. All computation here is
plain numpy, whose only parallel layer is the BLAS backend, so the cap is
forwarded to the usual BLAS thread variables. This must run before numpy's
first import to take effect, hence the call from the package __init__.
"""

import os

_BLAS_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def configured_threads():
    """Parsed SPL_THREADS value, or None when unset. Raises ValueError."""
    raw = os.environ.get("SPL_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SPL_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"SPL_THREADS must be a positive integer, got {raw!r}")
    return value


def apply_thread_cap() -> None:
    value = configured_threads()
    if value is None:
        return
    for var in _BLAS_VARS:
        os.environ.setdefault(var, str(value))
