"""The Pauli algebra Cl(3,0): rotors, spinors in a left ideal, and the 2pi sign flip.

Generators square to +1 (``e_i e_j + e_j e_i = 2 delta_ij``).  Elements are
8 real coefficients over ``1, e1, e2, e3, e12, e13, e23, e123``.  Spinors are
elements of the left ideal ``C eps`` with ``eps = (1 + e3)/2``; a rotor ``g``
acts on them from the left by its reversion ``alpha(g)``.
"""
from __future__ import annotations

import math
from typing import Sequence, Tuple

import numpy as np

from .errors import NotBivectorError, NotInIdealError

__all__ = [
    "BASIS",
    "PauliElement",
    "clifford_multiply",
    "reversion",
    "rotor",
    "rotate_spinor",
    "rotate_vector",
    "rotation_matrix",
    "spin_norm",
    "spinor_from_components",
    "components_from_spinor",
    "recombine",
    "intensity",
    "E1",
    "E2",
    "E3",
    "E12",
    "E13",
    "E23",
    "E123",
    "IDEMPOTENT",
]

BASIS = ("1", "e1", "e2", "e3", "e12", "e13", "e23", "e123")
# bitmask of each basis blade (bit i <-> e_{i+1})
_MASKS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)
_INDEX = {m: i for i, m in enumerate(_MASKS)}
_GRADE = tuple(bin(m).count("1") for m in _MASKS)


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the generators of blade ``a`` followed by blade ``b``."""
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


# _TABLE[i][j] = (sign, k) with basis_i * basis_j = sign * basis_k
_TABLE = tuple(
    tuple((_reorder_sign(_MASKS[i], _MASKS[j]), _INDEX[_MASKS[i] ^ _MASKS[j]]) for j in range(8))
    for i in range(8)
)


class PauliElement:
    """Immutable multivector of Cl(3,0)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[float]):
        c = np.array(coeffs, dtype=float)
        if c.shape != (8,):
            raise ValueError("a Pauli element has exactly 8 coefficients")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def scalar(cls, s: float) -> "PauliElement":
        c = np.zeros(8)
        c[0] = s
        return cls(c)

    @classmethod
    def blade(cls, name: str, coeff: float = 1.0) -> "PauliElement":
        c = np.zeros(8)
        c[BASIS.index(name)] = coeff
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __getitem__(self, name: str) -> float:
        return float(self._c[BASIS.index(name)])

    def grade(self, k: int) -> "PauliElement":
        return PauliElement([x if g == k else 0.0 for x, g in zip(self._c, _GRADE)])

    def even(self) -> "PauliElement":
        return PauliElement([x if g % 2 == 0 else 0.0 for x, g in zip(self._c, _GRADE)])

    def __add__(self, other):
        if not isinstance(other, PauliElement):
            other = PauliElement.scalar(other)
        return PauliElement(self._c + other._c)

    __radd__ = __add__

    def __neg__(self):
        return PauliElement(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PauliElement):
            return clifford_multiply(self, other)
        return PauliElement(self._c * other)

    def __rmul__(self, other):
        return PauliElement(self._c * other)

    def __truediv__(self, s):
        return PauliElement(self._c / s)

    def __eq__(self, other):
        if not isinstance(other, PauliElement):
            other = PauliElement.scalar(other)
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(tuple(self._c))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        if not isinstance(other, PauliElement):
            other = PauliElement.scalar(other)
        return bool(np.allclose(self._c, other._c, rtol=0, atol=atol))

    def __repr__(self) -> str:
        parts = [f"{x:+.6g}{'' if b == '1' else '*' + b}" for x, b in zip(self._c, BASIS) if x]
        return "PauliElement(" + (" ".join(parts) if parts else "0") + ")"


def clifford_multiply(x: PauliElement, y: PauliElement) -> PauliElement:
    """Geometric product from the blade structure constants."""
    out = np.zeros(8)
    xc, yc = x.coeffs, y.coeffs
    for i in range(8):
        if xc[i] == 0:
            continue
        for j in range(8):
            if yc[j] == 0:
                continue
            s, k = _TABLE[i][j]
            out[k] += s * xc[i] * yc[j]
    return PauliElement(out)


# reversion flips the sign of grades 2 and 3
_REV = np.array([1 if g in (0, 1) else -1 for g in _GRADE], dtype=float)


def reversion(x: PauliElement) -> PauliElement:
    """The main anti-automorphism ``alpha``."""
    return PauliElement(x.coeffs * _REV)


def spin_norm(g: PauliElement) -> PauliElement:
    """``N(g) = alpha(g) g``."""
    return reversion(g) * g


E1 = PauliElement.blade("e1")
E2 = PauliElement.blade("e2")
E3 = PauliElement.blade("e3")
E12 = PauliElement.blade("e12")
E13 = PauliElement.blade("e13")
E23 = PauliElement.blade("e23")
E123 = PauliElement.blade("e123")
IDEMPOTENT = (PauliElement.scalar(1.0) + E3) * 0.5


def _cos_sin(phi: float) -> Tuple[float, float]:
    """``cos, sin`` with exact values at multiples of pi/2."""
    q = phi / (math.pi / 2)
    n = round(q)
    if abs(q - n) < 1e-12:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[n % 4]
    return math.cos(phi), math.sin(phi)


def rotor(axis_bivector: PauliElement, theta: float) -> PauliElement:
    """``g(theta/2) = cos(theta/2) + B sin(theta/2)`` for a unit bivector ``B``.

    Raises
    ------
    NotBivectorError
        If ``axis_bivector`` has non-bivector parts or is not of unit size.
    """
    B = axis_bivector
    if not B.allclose(B.grade(2), atol=1e-12):
        raise NotBivectorError("rotation axis must be a pure bivector")
    if not math.isclose(float(np.sum(B.coeffs**2)), 1.0, abs_tol=1e-12):
        raise NotBivectorError("rotation bivector must have unit size")
    c, s = _cos_sin(theta / 2)
    return PauliElement.scalar(c) + B * s


def in_left_ideal(psi: PauliElement, atol: float = 1e-12) -> bool:
    return (psi * IDEMPOTENT).allclose(psi, atol=atol)


def rotate_spinor(psi: PauliElement, g: PauliElement) -> PauliElement:
    """``alpha(g) psi``; stays in the left ideal.

    Raises
    ------
    NotInIdealError
        If ``psi eps != psi``.
    """
    if not in_left_ideal(psi):
        raise NotInIdealError("spinor must lie in the left ideal C (1 + e3)/2")
    return reversion(g) * psi


def rotate_vector(v: PauliElement, g: PauliElement) -> PauliElement:
    """``g^-1 v g`` with ``g^-1 = alpha(g)`` for a unit rotor."""
    return reversion(g) * v * g


def rotation_matrix(g: PauliElement) -> np.ndarray:
    """3x3 matrix whose column i is the image of ``e_{i+1}``."""
    cols = [rotate_vector(e, g).coeffs[1:4] for e in (E1, E2, E3)]
    return np.column_stack(cols)


def spinor_from_components(psi1: complex, psi2: complex) -> PauliElement:
    """``(g0 + g1 e23 + g2 e13 + g3 e12) eps`` for a two-component spinor.

    ``g0 = Re psi1``, ``g1 = Im psi2``, ``g2 = Re psi2``, ``g3 = Im psi1``.
    """
    psi1, psi2 = complex(psi1), complex(psi2)
    G = PauliElement([psi1.real, 0, 0, 0, psi1.imag, psi2.real, psi2.imag, 0])
    return G * IDEMPOTENT


def components_from_spinor(phi: PauliElement) -> Tuple[complex, complex]:
    """Inverse of :func:`spinor_from_components`."""
    if not in_left_ideal(phi):
        raise NotInIdealError("spinor must lie in the left ideal C (1 + e3)/2")
    G = phi.even() * 2
    g0, g3, g2, g1 = G["1"], G["e12"], G["e13"], G["e23"]
    return complex(g0, g3), complex(g2, g1)


def recombine(psi1: PauliElement, psi2: PauliElement, theta: float, axis: PauliElement = E12) -> PauliElement:
    """Beam 1 plus beam 2 after beam 2 is rotated through ``theta``."""
    return psi1 + rotate_spinor(psi2, rotor(axis, theta))


def intensity(phi: PauliElement) -> float:
    """``|psi1|^2 + |psi2|^2``, i.e. twice the scalar part of ``alpha(phi) phi``."""
    return 2.0 * float((reversion(phi) * phi)["1"])
