# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the direct Fresnel quadrature and trigonometric
interpolation.  Same contracts as ``_pykernels``.

Both kernels keep the innermost loop over independent outputs with real and
imaginary parts in separate arrays, so the compiler can vectorize it without
reassociating a floating-point reduction.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def fresnel_toeplitz(psi, kern):
    """out[i] = sum_j kern[j - i + N - 1] * psi[j]."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    kern = np.ascontiguousarray(kern, dtype=np.complex128)
    cdef Py_ssize_t n = psi.shape[0]
    if kern.shape[0] != 2 * n - 1:
        raise ValueError("kernel table must have length 2N - 1")
    # rk[n - 1 + i - j] = kern[n - 1 - i + j]: contiguous in i for fixed j
    rk = kern[::-1]
    cdef const double[::1] kr = np.ascontiguousarray(rk.real)
    cdef const double[::1] ki = np.ascontiguousarray(rk.imag)
    cdef const double[::1] pr = np.ascontiguousarray(psi.real)
    cdef const double[::1] pim = np.ascontiguousarray(psi.imag)
    out_r = np.zeros(n)
    out_i = np.zeros(n)
    cdef double[::1] orr = out_r
    cdef double[::1] oii = out_i
    cdef Py_ssize_t i, j, base
    cdef double a, b
    with nogil:
        for j in range(n):
            a = pr[j]
            b = pim[j]
            base = n - 1 - j
            for i in range(n):
                orr[i] += kr[base + i] * a - ki[base + i] * b
                oii[i] += kr[base + i] * b + ki[base + i] * a
    return out_r + 1j * out_i


def horner_unit(coeffs, z):
    """out[m] = sum_k coeffs[k] * z[m]**k, evaluated by Horner's rule."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef const double[::1] zr = np.ascontiguousarray(z.real)
    cdef const double[::1] zi = np.ascontiguousarray(z.imag)
    cdef const double[::1] cr = np.ascontiguousarray(coeffs.real)
    cdef const double[::1] ci = np.ascontiguousarray(coeffs.imag)
    acc_r = np.zeros(m)
    acc_i = np.zeros(m)
    cdef double[::1] ar = acc_r
    cdef double[::1] ai = acc_i
    cdef Py_ssize_t i, k
    cdef double c0, c1, t
    with nogil:
        for k in range(n - 1, -1, -1):
            c0 = cr[k]
            c1 = ci[k]
            for i in range(m):
                t = ar[i] * zr[i] - ai[i] * zi[i] + c0
                ai[i] = ar[i] * zi[i] + ai[i] * zr[i] + c1
                ar[i] = t
    return acc_r + 1j * acc_i
