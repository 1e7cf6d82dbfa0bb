"""Backend selection for the finite-field kernels.

Numba is used when importable unless ``MOONEXP_NUMBA=0`` is set in the
environment; the pure-numpy path is always available.
"""

import logging
import os

logger = logging.getLogger(__name__)

try:
    import numba

    njit = numba.njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(pyfunc=None, **kwargs):
        def wrap(func):
            return func

        return wrap if pyfunc is None else wrap(pyfunc)


def _env_default() -> str:
    flag = os.environ.get("MOONEXP_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or not HAVE_NUMBA:
        return "numpy"
    return "numba"


_backend = _env_default()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Switch between ``"numba"`` and ``"numpy"`` kernels at runtime."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name
    logger.debug("kernel backend set to %s", name)
