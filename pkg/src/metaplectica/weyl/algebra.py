"""Normal-ordered elements of the extended Heisenberg algebra and its boson form.

The algebra is generated by ``Q``, ``D`` and an idempotent ``E`` with

    D Q - Q D = 1,   E E = E,   D E = 0,   E Q = 0.

Every element is a finite sum of monomials ``Q^h E^eps D^k`` (``eps`` in
{0, 1}).  The boson algebra with ``a a+ - a+ a = 1``, ``V V = V``, ``a V = 0``,
``V a+ = 0`` has the same presentation under ``a+ <-> Q``, ``V <-> E``,
``a <-> D``, so both share one product routine and differ only in symbols.

Coefficients may be ``int``, ``Fraction``, ``float``, ``complex`` or sympy
expressions (exact surds); they are combined with ordinary arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Mapping, NamedTuple, Sequence

import sympy

from ..errors import DegreeCapError, UnsupportedElementError

__all__ = [
    "Monomial",
    "AlgebraElement",
    "BosonElement",
    "DEGREE_CAP",
    "monomial_product",
    "matrix_unit",
    "spinor",
    "cospinor",
    "commutator",
    "to_boson",
    "from_boson",
    "is_left_ideal",
    "is_right_ideal",
]

#: largest total degree h + k an element may carry
DEGREE_CAP = 64


class Monomial(NamedTuple):
    """``Q^h E^eps D^k``."""

    h: int
    eps: int
    k: int

    @property
    def degree(self) -> int:
        return self.h + self.k


def _clean(c):
    """Canonical form of a coefficient (exact types collapse to int when possible)."""
    if isinstance(c, sympy.Basic):
        c = sympy.expand(c)
        if c.is_Integer:
            return int(c)
        if c.is_Rational:
            return Fraction(int(c.p), int(c.q))
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    if isinstance(c, bool):
        return int(c)
    return c


def _is_zero(c) -> bool:
    return c == 0


def monomial_product(x: Monomial, y: Monomial, cap: int = DEGREE_CAP) -> Dict[Monomial, int]:
    """Normal form of ``x * y`` as ``{monomial: integer coefficient}``.

    Uses the closed forms of the middle factor ``E^e1 D^k Q^m E^e2``::

        D^k Q^m     = sum_j C(k,j) C(m,j) j! Q^(m-j) D^(k-j)
        E D^k Q^m   = k!/(k-m)! E D^(k-m)      (zero unless k >= m)
        D^k Q^m E   = m!/(m-k)! Q^(m-k) E      (zero unless m >= k)
        E D^k Q^m E = delta_km k! E

    Raises
    ------
    DegreeCapError
        If a resulting monomial exceeds total degree ``cap``.
    """
    h1, e1, k = x
    m, e2, k2 = y
    out: Dict[Monomial, int] = {}
    if e1 == 0 and e2 == 0:
        for j in range(min(k, m) + 1):
            c = math.comb(k, j) * math.comb(m, j) * math.factorial(j)
            out[Monomial(h1 + m - j, 0, k - j + k2)] = c
    elif e1 == 1 and e2 == 0:
        if k >= m:
            out[Monomial(h1, 1, k - m + k2)] = math.perm(k, m)
    elif e1 == 0 and e2 == 1:
        if m >= k:
            out[Monomial(h1 + m - k, 1, k2)] = math.perm(m, k)
    else:
        if k == m:
            out[Monomial(h1, 1, k2)] = math.factorial(k)
    for mono in out:
        if mono.degree > cap:
            raise DegreeCapError(f"product reaches degree {mono.degree} > cap {cap}")
    return out


class _NormalOrdered:
    """Immutable finite sum of normal-ordered monomials."""

    _symbols = ("Q", "E", "D")
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping = (), cap: int = DEGREE_CAP):
        clean: Dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            mono = Monomial(*mono)
            if mono.h < 0 or mono.k < 0 or mono.eps not in (0, 1):
                raise ValueError(f"invalid monomial {tuple(mono)}")
            if mono.degree > cap:
                raise DegreeCapError(f"monomial degree {mono.degree} exceeds cap {cap}")
            c = _clean(clean.get(mono, 0) + c)
            clean[mono] = c
        self._terms = {m: c for m, c in clean.items() if not _is_zero(c)}

    # construction helpers
    @classmethod
    def scalar(cls, c):
        return cls({Monomial(0, 0, 0): c})

    @classmethod
    def one(cls):
        return cls.scalar(1)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def monomial(cls, h: int, eps: int, k: int, coeff=1):
        return cls({Monomial(h, eps, k): coeff})

    @property
    def terms(self) -> Dict[Monomial, object]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    @property
    def has_idempotent(self) -> bool:
        return any(m.eps for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other):
        if isinstance(other, _NormalOrdered):
            if type(other) is not type(self):
                raise TypeError(
                    f"cannot combine {type(self).__name__} with {type(other).__name__}"
                )
            return other
        return type(self).scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return type(self)(terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, _NormalOrdered):
            return type(self)({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        acc: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                for m, n in monomial_product(m1, m2).items():
                    acc[m] = acc.get(m, 0) + c1 * c2 * n
        return type(self)(acc)

    def __rmul__(self, other):
        if isinstance(other, _NormalOrdered):
            return other.__mul__(self)
        return type(self)({m: other * c for m, c in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = type(self).one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, _NormalOrdered):
            if type(other) is not type(self):
                return False
            return (self - other).is_zero()
        try:
            return (self - other).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self._terms.items())))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(complex(c)) <= atol for c in diff._terms.values())

    def evalf(self):
        """Copy with every coefficient converted to a Python complex/float."""
        out = {}
        for m, c in self._terms.items():
            z = complex(c)
            out[m] = z.real if z.imag == 0 else z
        return type(self)(out)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: (mc[0].degree, mc[0].h, mc[0].eps, mc[0].k))

    def _monomial_str(self, m: Monomial) -> str:
        qs, es, ds = self._symbols
        parts = []
        if m.h:
            parts.append(qs if m.h == 1 else f"{qs}^{m.h}")
        if m.eps:
            parts.append(es)
        if m.k:
            parts.append(ds if m.k == 1 else f"{ds}^{m.k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = self._monomial_str(m)
            neg = False
            if isinstance(c, (int, Fraction, float)) and c < 0:
                neg, c = True, -c
            elif isinstance(c, sympy.Basic) and c.is_real and c.is_negative:
                neg, c = True, -c
            cs = _coeff_str(c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                if isinstance(c, sympy.Basic) and c.is_Add:
                    cs = f"({cs})"
                body = f"{cs}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"


def _coeff_str(c) -> str:
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, float):
        return format(c, ".17g")
    if isinstance(c, complex):
        return f"({format(c.real, '.17g')}{format(c.imag, '+.17g')}j)"
    return str(c)


class AlgebraElement(_NormalOrdered):
    """Element of the extended Heisenberg algebra in normal form ``Q^h E^eps D^k``."""

    _symbols = ("Q", "E", "D")
    __slots__ = ()

    @classmethod
    def Q(cls):
        return cls.monomial(1, 0, 0)

    @classmethod
    def D(cls):
        return cls.monomial(0, 0, 1)

    @classmethod
    def E(cls):
        return cls.monomial(0, 1, 0)


class BosonElement(_NormalOrdered):
    """Boson-normal-ordered element ``sum c (a+)^m V^eps a^n`` (printed ``ad``, ``V``, ``a``)."""

    _symbols = ("ad", "V", "a")
    __slots__ = ()

    @classmethod
    def a(cls):
        return cls.monomial(0, 0, 1)

    @classmethod
    def ad(cls):
        return cls.monomial(1, 0, 0)

    @classmethod
    def V(cls):
        return cls.monomial(0, 1, 0)


def commutator(x, y):
    """``x y - y x``."""
    return x * y - y * x


def _inv_sqrt_int(n: int, exact: bool):
    """``n^(-1/2)`` as Fraction when ``n`` is a square, else sympy (exact) or float."""
    r = math.isqrt(n)
    if r * r == n:
        return Fraction(1, r)
    return 1 / sympy.sqrt(n) if exact else 1.0 / math.sqrt(n)


def matrix_unit(m: int, n: int, exact: bool = False) -> AlgebraElement:
    """``E^{mn} = (m! n!)^(-1/2) Q^m E D^n``.

    These satisfy ``E^{mn} E^{ij} = delta_{ni} E^{mj}`` and correspond to
    ``|m><n|`` in the Fock matrices of :mod:`metaplectica.weyl.fock`.
    """
    if m < 0 or n < 0:
        raise ValueError("matrix-unit indices must be nonnegative")
    c = _inv_sqrt_int(math.factorial(m) * math.factorial(n), exact)
    return AlgebraElement.monomial(m, 1, n, c)


def spinor(coeffs: Sequence) -> AlgebraElement:
    """Left-ideal element ``sum_h coeffs[h] Q^h E``."""
    return AlgebraElement({Monomial(h, 1, 0): c for h, c in enumerate(coeffs)})


def cospinor(coeffs: Sequence) -> AlgebraElement:
    """Right-ideal element ``sum_k coeffs[k] E D^k``."""
    return AlgebraElement({Monomial(0, 1, k): c for k, c in enumerate(coeffs)})


def is_left_ideal(x: AlgebraElement) -> bool:
    """True when ``x`` only has ``Q^h E`` terms."""
    return all(m.eps == 1 and m.k == 0 for m in x.terms)


def is_right_ideal(x: AlgebraElement) -> bool:
    """True when ``x`` only has ``E D^k`` terms."""
    return all(m.eps == 1 and m.h == 0 for m in x.terms)


def _scale(n: int, exact: bool):
    """``2^(-n/2)``."""
    if n % 2 == 0:
        return Fraction(1, 2 ** (n // 2))
    return sympy.sqrt(2) / 2 ** ((n + 1) // 2) if exact else 2.0 ** (-n / 2)


def to_boson(x: AlgebraElement, exact: bool = False) -> BosonElement:
    """Rewrite a pure Weyl element with ``Q = (a + a+)/sqrt2``, ``D = (a - a+)/sqrt2``.

    Raises
    ------
    UnsupportedElementError
        If ``x`` contains ``E``; its boson image is not a polynomial.
    """
    if x.has_idempotent:
        raise UnsupportedElementError("elements containing E have no polynomial boson image")
    a, ad = BosonElement.a(), BosonElement.ad()
    out = BosonElement.zero()
    for (h, _, k), c in x.terms.items():
        # Q^h D^k = ((a + a+)/sqrt2)^h ((a - a+)/sqrt2)^k
        out = out + ((a + ad) ** h * (a - ad) ** k) * (c * _scale(h + k, exact))
    return out


def from_boson(x: BosonElement, exact: bool = False) -> AlgebraElement:
    """Inverse substitution ``a = (Q + D)/sqrt2``, ``a+ = (Q - D)/sqrt2``.

    Raises
    ------
    UnsupportedElementError
        If ``x`` contains ``V``.
    """
    if x.has_idempotent:
        raise UnsupportedElementError("elements containing V have no polynomial Weyl image")
    Q, D = AlgebraElement.Q(), AlgebraElement.D()
    out = AlgebraElement.zero()
    for (m, _, n), c in x.terms.items():
        # (a+)^m a^n = ((Q - D)/sqrt2)^m ((Q + D)/sqrt2)^n
        out = out + ((Q - D) ** m * (Q + D) ** n) * (c * _scale(m + n, exact))
    return out
