"""Hot O(N^2) loops with a compiled backend and a numpy fallback.

The Cython extension ``_ckernels`` is used when it was built; otherwise, or when
the environment variable ``METAPLECTICA_PURE`` is set to a non-empty value
other than ``0``, the numpy implementations in ``_pykernels`` are used.

Functions
---------
fresnel_toeplitz(psi, kern)
    Toeplitz matrix-vector product used by the direct Fresnel quadrature.
horner_unit(coeffs, z)
    Polynomial evaluation used for trigonometric interpolation.
"""
import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)

_force_pure = os.environ.get("METAPLECTICA_PURE", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure-python kernels requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError as exc:  # extension not built
    log.debug("using numpy kernels: %s", exc)
    _impl = _pykernels
    BACKEND = "python"

fresnel_toeplitz = _impl.fresnel_toeplitz
horner_unit = _impl.horner_unit


def available_backends():
    """Mapping backend name -> module for every importable implementation."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


__all__ = ["BACKEND", "fresnel_toeplitz", "horner_unit", "available_backends"]
