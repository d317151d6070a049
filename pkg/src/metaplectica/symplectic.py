"""Symplectic matrices, paraxial ray tracing and the canonical decomposition.

Matrices whose entries are all ``int`` or :class:`fractions.Fraction` are kept
in exact rational arithmetic (numpy object arrays of ``Fraction``); anything
else is promoted to float64.  Ray vectors are ``(q, p)`` with ``q`` the
transverse height and ``p = n * angle`` (the refractive index ``n`` is 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DecompositionError,
    DegenerateTrajectoryError,
    DimensionError,
    InvalidElementError,
)

__all__ = [
    "SymplecticMatrix",
    "RayVector",
    "Lens",
    "Free",
    "OpticalSystem",
    "is_symplectic",
    "elementary_matrix",
    "compose",
    "system_matrix",
    "trace_ray",
    "phase_space_angle",
    "canonical_decompose",
    "lens_system",
    "MAX_COND_D",
]

Number = Union[int, float, Fraction]

#: decomposition refuses D blocks worse conditioned than this
MAX_COND_D = 1e8


def _is_rational(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def _as_array(M) -> np.ndarray:
    """Exact object array when every entry is rational, float64 otherwise."""
    if isinstance(M, SymplecticMatrix):
        return M.entries
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if all(_is_rational(x) for x in arr.flat):
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr
    return np.asarray(M, dtype=float)


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _blocks(arr: np.ndarray):
    n, m = arr.shape
    if n != m:
        raise DimensionError(f"matrix must be square, got {arr.shape}")
    if n % 2:
        raise DimensionError(f"matrix dimension must be even, got {n}")
    r = n // 2
    return arr[:r, :r], arr[:r, r:], arr[r:, :r], arr[r:, r:]


def _max_abs(arr: np.ndarray) -> float:
    if arr.size == 0:
        return 0.0
    return float(max(abs(x) for x in arr.flat))


def is_symplectic(M, tol: float = 1e-10) -> bool:
    """Check the five block conditions of a symplectic matrix.

    With exact (rational) input and ``tol == 0`` the comparison is exact.

    Raises
    ------
    DimensionError
        If ``M`` is not square or has odd dimension.
    """
    arr = _as_array(M)
    A, B, C, D = _blocks(arr)
    r = A.shape[0]
    eye = np.eye(r, dtype=int).astype(arr.dtype)
    residuals = (
        A @ D.T - B @ C.T - eye,
        A.T @ C - C.T @ A,
        A @ B.T - B @ A.T,
        B.T @ D - D.T @ B,
        C @ D.T - D @ C.T,
    )
    return all(_max_abs(res) <= tol for res in residuals)


class SymplecticMatrix:
    """A real ``2r x 2r`` symplectic matrix stored with its blocks A, B, C, D.

    Parameters
    ----------
    entries : array_like
        The full matrix.  Rational entries stay exact.
    tol : float
        Tolerance for the symplectic check on float input.
    check : bool
        Skip validation when False (used internally for products that are
        symplectic by construction).
    """

    __slots__ = ("_entries",)

    def __init__(self, entries, tol: float = 1e-10, check: bool = True):
        arr = _as_array(entries)
        _blocks(arr)
        if check and not is_symplectic(arr, 0 if _is_exact(arr) else tol):
            raise InvalidElementError("matrix violates the symplectic block conditions")
        arr = arr.copy()
        arr.setflags(write=False)
        self._entries = arr

    @classmethod
    def identity(cls, r: int = 1) -> "SymplecticMatrix":
        eye = np.empty((2 * r, 2 * r), dtype=object)
        for i in range(2 * r):
            for j in range(2 * r):
                eye[i, j] = Fraction(int(i == j))
        return cls(eye, check=False)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim_r(self) -> int:
        return self._entries.shape[0] // 2

    @property
    def exact(self) -> bool:
        return _is_exact(self._entries)

    @property
    def blocks(self):
        return _blocks(self._entries)

    A = property(lambda self: self.blocks[0])
    B = property(lambda self: self.blocks[1])
    C = property(lambda self: self.blocks[2])
    D = property(lambda self: self.blocks[3])

    def to_float(self) -> np.ndarray:
        return np.asarray(self._entries, dtype=float)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            return compose(self, other)
        if isinstance(other, RayVector):
            return other.transformed(self)
        return NotImplemented

    def __pow__(self, n: int) -> "SymplecticMatrix":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = SymplecticMatrix.identity(self.dim_r)
        for _ in range(n):
            out = compose(out, self)
        return out

    def __neg__(self) -> "SymplecticMatrix":
        return SymplecticMatrix(-self._entries, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if self._entries.shape != other._entries.shape:
            return False
        return bool(all(a == b for a, b in zip(self._entries.flat, other._entries.flat)))

    def __hash__(self):
        return hash(tuple(self._entries.flat))

    def allclose(self, other, atol: float = 1e-12, rtol: float = 1e-12) -> bool:
        other = other.to_float() if isinstance(other, SymplecticMatrix) else np.asarray(other, float)
        return bool(np.allclose(self.to_float(), other, atol=atol, rtol=rtol))

    def __repr__(self) -> str:
        rows = "; ".join(", ".join(str(x) for x in row) for row in self._entries)
        return f"SymplecticMatrix([{rows}])"


@dataclass(frozen=True)
class RayVector:
    """Phase-space point ``(q, p)`` of a paraxial ray."""

    q: Number
    p: Number

    def __post_init__(self):
        for name in ("q", "p"):
            value = getattr(self, name)
            if not _is_rational(value) and not math.isfinite(float(value)):
                raise InvalidElementError(f"ray component {name} must be finite")

    def transformed(self, S: SymplecticMatrix) -> "RayVector":
        if S.dim_r != 1:
            raise DimensionError("rays are 2-vectors; matrix must be 2x2")
        (a, b), (c, d) = S.entries
        q, p = self.q, self.p
        if _is_rational(q) and _is_rational(p) and S.exact:
            q, p = Fraction(q), Fraction(p)
        return RayVector(a * q + b * p, c * q + d * p)

    def as_tuple(self):
        return (self.q, self.p)


@dataclass(frozen=True)
class Lens:
    """Thin lens of focal length ``f``."""

    f: Number

    def __post_init__(self):
        if self.f == 0:
            raise InvalidElementError("lens focal length must be nonzero")
        if not _is_rational(self.f) and not math.isfinite(float(self.f)):
            raise InvalidElementError("lens focal length must be finite")


@dataclass(frozen=True)
class Free:
    """Free-space propagation over a distance ``d``."""

    d: Number

    def __post_init__(self):
        if not _is_rational(self.d) and not math.isfinite(float(self.d)):
            raise InvalidElementError("propagation distance must be finite")
        if self.d < 0:
            raise InvalidElementError("propagation distance must be nonnegative")


Element = Union[Lens, Free]


@dataclass(frozen=True)
class OpticalSystem:
    """Ordered optical elements; ``elements[0]`` is traversed first."""

    elements: tuple

    def __init__(self, elements: Iterable[Element]):
        elements = tuple(elements)
        if not elements:
            raise InvalidElementError("an optical system needs at least one element")
        for e in elements:
            if not isinstance(e, (Lens, Free)):
                raise InvalidElementError(f"unknown optical element {e!r}")
        object.__setattr__(self, "elements", elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __add__(self, other: "OpticalSystem") -> "OpticalSystem":
        return OpticalSystem(self.elements + other.elements)

    def __mul__(self, n: int) -> "OpticalSystem":
        if n < 1:
            raise InvalidElementError("repeat count must be at least 1")
        return OpticalSystem(self.elements * n)

    __rmul__ = __mul__

    @classmethod
    def from_json(cls, data: dict) -> "OpticalSystem":
        """Build from ``{"elements": [{"lens": {"f": 1}}, {"free": {"d": 1}}], "repeat": n}``."""
        elements = []
        for item in data["elements"]:
            if "lens" in item:
                elements.append(Lens(item["lens"]["f"]))
            elif "free" in item:
                elements.append(Free(item["free"]["d"]))
            else:
                raise InvalidElementError(f"unknown element entry {item!r}")
        return cls(elements) * int(data.get("repeat", 1))

    def to_json(self) -> dict:
        out = []
        for e in self.elements:
            if isinstance(e, Lens):
                out.append({"lens": {"f": float(e.f)}})
            else:
                out.append({"free": {"d": float(e.d)}})
        return {"elements": out}


def lens_system(f: Number = 1, copies: int = 1) -> OpticalSystem:
    """``copies`` repetitions of the focal-length ``f`` cell Free(f), Lens(f), Free(f)."""
    return OpticalSystem([Free(f), Lens(f), Free(f)]) * copies


def elementary_matrix(e: Element) -> SymplecticMatrix:
    """Ray-transfer matrix of a single element.

    ``Lens(f) -> [[1, 0], [-1/f, 1]]`` and ``Free(d) -> [[1, d], [0, 1]]``.
    """
    if isinstance(e, Lens):
        if e.f == 0:
            raise InvalidElementError("lens focal length must be nonzero")
        c = -Fraction(1) / Fraction(e.f) if _is_rational(e.f) else -1.0 / float(e.f)
        one = Fraction(1) if _is_rational(e.f) else 1.0
        zero = Fraction(0) if _is_rational(e.f) else 0.0
        return SymplecticMatrix([[one, zero], [c, one]], check=False)
    if isinstance(e, Free):
        d = Fraction(e.d) if _is_rational(e.d) else float(e.d)
        one = Fraction(1) if _is_rational(e.d) else 1.0
        zero = Fraction(0) if _is_rational(e.d) else 0.0
        return SymplecticMatrix([[one, d], [zero, one]], check=False)
    raise InvalidElementError(f"unknown optical element {e!r}")


def compose(S_left: SymplecticMatrix, S_right: SymplecticMatrix) -> SymplecticMatrix:
    """Matrix product ``S_left @ S_right`` (``S_right`` acts first)."""
    if S_left.dim_r != S_right.dim_r:
        raise DimensionError(
            f"cannot compose Sp({2 * S_left.dim_r}) with Sp({2 * S_right.dim_r})"
        )
    a, b = S_left.entries, S_right.entries
    if _is_exact(a) != _is_exact(b):
        a, b = np.asarray(a, float), np.asarray(b, float)
    return SymplecticMatrix(a @ b, check=False)


def system_matrix(sys: OpticalSystem) -> SymplecticMatrix:
    """Product of the elementary matrices, the last element leftmost."""
    out = elementary_matrix(sys.elements[0])
    for e in sys.elements[1:]:
        out = compose(elementary_matrix(e), out)
    return out


def trace_ray(sys: OpticalSystem, r0: RayVector) -> list:
    """Ray snapshots: ``r0`` followed by the ray after each element."""
    out = [r0]
    for e in sys.elements:
        out.append(out[-1].transformed(elementary_matrix(e)))
    return out


def phase_space_angle(traj: Sequence[RayVector]) -> float:
    """Accumulated winding angle of a ray trajectory in the (q, p) plane.

    Angles are positive in the sense of the oscillator flow
    ``(q, p) -> (q cos t + p sin t, -q sin t + p cos t)``, i.e. clockwise with
    ``q`` horizontal and ``p`` vertical; the focal cell ``[[0, f], [-1/f, 0]]``
    turns a ray on the q-axis by +pi/2.

    Raises
    ------
    DegenerateTrajectoryError
        If a snapshot is the origin or two consecutive snapshots point in
        exactly opposite directions (the increment would be ambiguous).
    """
    total = 0.0
    pts = [(float(r.q), float(r.p)) for r in traj]
    for q, p in pts:
        if q == 0.0 and p == 0.0:
            raise DegenerateTrajectoryError("trajectory passes through the phase-space origin")
    for (q1, p1), (q2, p2) in zip(pts, pts[1:]):
        cross = p1 * q2 - q1 * p2
        dot = q1 * q2 + p1 * p2
        if cross == 0.0 and dot < 0.0:
            raise DegenerateTrajectoryError(
                "consecutive snapshots subtend pi; refine the trajectory"
            )
        total += math.atan2(cross, dot)
    return total


def canonical_decompose(S: SymplecticMatrix, max_cond: float = MAX_COND_D):
    """Split ``S`` into shear, scaling and lens factors with ``S = S1 @ S2 @ S3``.

    ``S1 = [[I, B D^-1], [0, I]]``, ``S2 = [[D^-T, 0], [0, D]]`` and
    ``S3 = [[I, 0], [D^-1 C, I]]``; for r = 1 these are ``D^-1`` and
    ``C D^-1``.  Exact input stays exact.

    Raises
    ------
    DecompositionError
        If the D block is singular or worse conditioned than ``max_cond``.
    """
    A, B, C, D = S.blocks
    r = S.dim_r
    if S.exact and r == 1:
        d = D[0, 0]
        if d == 0:
            raise DecompositionError("block D is singular; no canonical decomposition", "D")
        Dinv = np.array([[Fraction(1) / d]], dtype=object)
        eye = np.array([[Fraction(1)]], dtype=object)
        zero = np.array([[Fraction(0)]], dtype=object)
    else:
        Df = np.asarray(D, dtype=float)
        cond = np.linalg.cond(Df) if np.any(Df) else np.inf
        if not np.isfinite(cond) or cond > max_cond:
            raise DecompositionError(
                f"block D is singular or ill-conditioned (cond={cond:.3g})", "D"
            )
        Dinv = np.linalg.inv(Df)
        B, C, D = (np.asarray(X, float) for X in (B, C, D))
        eye, zero = np.eye(r), np.zeros((r, r))
    S1 = np.block([[eye, B @ Dinv], [zero, eye]])
    S2 = np.block([[Dinv.T, zero], [zero, D]])
    S3 = np.block([[eye, zero], [Dinv @ C, eye]])
    return tuple(SymplecticMatrix(X, check=False) for X in (S1, S2, S3))
