"""Pure numpy versions of the compiled kernels (used when the extension is absent)."""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_ROW_BLOCK = 256
# complex entries per block when evaluating powers directly
_POW_BLOCK = 1 << 20


def fresnel_toeplitz(psi, kern):
    """out[i] = sum_j kern[j - i + N - 1] * psi[j]."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    kern = np.ascontiguousarray(kern, dtype=np.complex128)
    n = psi.shape[0]
    if kern.shape[0] != 2 * n - 1:
        raise ValueError("kernel table must have length 2N - 1")
    rows = sliding_window_view(kern, n)  # rows[s] = kern[s:s+n]
    out = np.empty(n, dtype=np.complex128)
    for i0 in range(0, n, _ROW_BLOCK):
        i1 = min(n, i0 + _ROW_BLOCK)
        block = rows[n - 1 - np.arange(i0, i1)]
        out[i0:i1] = block @ psi
    return out


def horner_unit(coeffs, z):
    """out[m] = sum_k coeffs[k] * z[m]**k, evaluated by Horner's rule."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    n, m = coeffs.shape[0], z.shape[0]
    if m < n:
        # few points, many coefficients: a Python loop over coefficients is
        # too slow, so build the powers blockwise (z on the unit circle keeps
        # z**k well conditioned)
        k = np.arange(n)
        out = np.empty(m, dtype=np.complex128)
        step = max(1, _POW_BLOCK // max(n, 1))
        for i0 in range(0, m, step):
            zb = z[i0 : i0 + step]
            out[i0 : i0 + step] = np.power(zb[:, None], k[None, :]) @ coeffs
        return out
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc *= z
        acc += c
    return acc
