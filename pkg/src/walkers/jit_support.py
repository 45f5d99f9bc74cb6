import os
import logging

logger = logging.getLogger(__name__)

# -------- try numba ----------
try:
    import numba as nb
    HAVE_NUMBA = True
except Exception:
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and os.environ.get('ERWLAB_DISABLE_JIT', '0') != '1'

if not USE_JIT:
    logger.warning("⚠️ numba JIT disabled; walk kernels run as plain Python (slow)")


def jit(fn):
    """Compile with numba when available, otherwise return the Python function"""
    if USE_JIT:
        return nb.njit(cache=True)(fn)
    return fn
