"""Metaplectic lifts of r = 1 symplectic matrices, acting on sampled wavefunctions.

Each factor is a genuine unitary operator, so the sign of the double cover
comes out of composing kernels; nothing is inserted by hand.  The
correspondences are

* ``FresnelP2(f)``   ``exp(-i f P^2 / 2)``   <->  ``[[1, f], [0, 1]]``
* ``QuadraticQ2(c)`` ``exp(-i c Q^2 / 2)``   <->  ``[[1, 0], [-c, 1]]``
* ``Scaling(d)``     ``psi(Q) -> sqrt(d) psi(d Q)``  <->  ``[[1/d, 0], [0, d]]``

``MetaplecticElement.factors`` is stored in matrix-product order: the first
factor is leftmost and acts last, matching ``shadow = prod(factor matrices)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .errors import (
    AmbiguousOverlapError,
    DecompositionError,
    InvalidElementError,
    LiftError,
    LoopNotClosedError,
    NotProportionalError,
)
from .symplectic import (
    Free,
    Lens,
    OpticalSystem,
    SymplecticMatrix,
    canonical_decompose,
    compose,
    system_matrix,
)
from .wavefield import WaveGrid, check_resolved, fresnel_propagate, quadratic_phase, scale

__all__ = [
    "FresnelP2",
    "QuadraticQ2",
    "Scaling",
    "MetaplecticElement",
    "lift",
    "lift_system",
    "apply",
    "global_phase",
    "cocycle_sign",
    "holonomy_loop",
    "holonomy_report",
    "PROPORTIONAL_MIN",
]

#: minimum normalized overlap for two states to count as equal up to phase
PROPORTIONAL_MIN = 0.9
#: a sign is read off only if the overlap phase is this close (in sine) to 0 or pi
SIGN_SIN_TOL = 0.1


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _one_like(x):
    return Fraction(1) if _exact(x) else 1.0


def _zero_like(x):
    return Fraction(0) if _exact(x) else 0.0


@dataclass(frozen=True)
class FresnelP2:
    """``exp(-i coef P^2 / 2)``: free propagation with Fresnel coefficient ``coef``."""

    coef: Union[int, float, Fraction]

    def matrix(self) -> SymplecticMatrix:
        c = self.coef
        return SymplecticMatrix([[_one_like(c), c], [_zero_like(c), _one_like(c)]], check=False)

    def act(self, psi: WaveGrid, method: str = "spectral") -> WaveGrid:
        if self.coef == 0:
            return psi
        return fresnel_propagate(psi, float(self.coef), method=method)


@dataclass(frozen=True)
class QuadraticQ2:
    """``exp(-i coef Q^2 / 2)``: a thin lens of power ``coef = 1/f``."""

    coef: Union[int, float, Fraction]

    def matrix(self) -> SymplecticMatrix:
        c = self.coef
        return SymplecticMatrix([[_one_like(c), _zero_like(c)], [-c, _one_like(c)]], check=False)

    def act(self, psi: WaveGrid, method: str = "spectral") -> WaveGrid:
        return quadratic_phase(psi, float(self.coef))


@dataclass(frozen=True)
class Scaling:
    """``psi(Q) -> sqrt(d) psi(d Q)`` (principal root), lifting ``diag(1/d, d)``."""

    d: Union[int, float, Fraction]

    def __post_init__(self):
        if self.d == 0:
            raise InvalidElementError("scaling factor must be nonzero")

    def matrix(self) -> SymplecticMatrix:
        d = self.d
        inv = Fraction(1) / d if _exact(d) else 1.0 / d
        return SymplecticMatrix([[inv, _zero_like(d)], [_zero_like(d), d]], check=False)

    def act(self, psi: WaveGrid, method: str = "spectral") -> WaveGrid:
        out = scale(psi, float(self.d))
        check_resolved(out, what="rescaled state")
        return out


Factor = Union[FresnelP2, QuadraticQ2, Scaling]


class MetaplecticElement:
    """Ordered factors, their symplectic shadow, and a tracked unit phase.

    Parameters
    ----------
    factors : iterable of factors
        In matrix-product order (``factors[0]`` acts last).
    phase_offset : complex
        Extra global phase, ``|phase_offset| = 1``.
    """

    __slots__ = ("_factors", "_phase", "_shadow")

    def __init__(self, factors: Iterable[Factor] = (), phase_offset: complex = 1.0):
        factors = tuple(factors)
        for fac in factors:
            if not isinstance(fac, (FresnelP2, QuadraticQ2, Scaling)):
                raise InvalidElementError(f"not a metaplectic factor: {fac!r}")
        phase_offset = complex(phase_offset)
        if not math.isclose(abs(phase_offset), 1.0, rel_tol=0, abs_tol=1e-12):
            raise InvalidElementError("phase_offset must have unit modulus")
        self._factors = factors
        self._phase = phase_offset
        shadow = SymplecticMatrix.identity(1)
        for fac in factors:
            shadow = compose(shadow, fac.matrix())
        self._shadow = shadow

    @classmethod
    def identity(cls) -> "MetaplecticElement":
        return cls()

    @property
    def factors(self) -> tuple:
        return self._factors

    @property
    def phase_offset(self) -> complex:
        return self._phase

    @property
    def shadow(self) -> SymplecticMatrix:
        return self._shadow

    def __matmul__(self, other: "MetaplecticElement") -> "MetaplecticElement":
        if not isinstance(other, MetaplecticElement):
            return NotImplemented
        return MetaplecticElement(self._factors + other._factors, self._phase * other._phase)

    def __pow__(self, n: int) -> "MetaplecticElement":
        if n < 0:
            raise ValueError("negative powers are not supported")
        return MetaplecticElement(self._factors * n, self._phase**n)

    def __len__(self):
        return len(self._factors)

    def __repr__(self) -> str:
        return f"MetaplecticElement({list(self._factors)!r}, phase_offset={self._phase!r})"

    def apply(self, psi: WaveGrid, method: str = "spectral") -> WaveGrid:
        return apply(self, psi, method=method)


def lift(S: SymplecticMatrix) -> MetaplecticElement:
    """Lift through the canonical decomposition ``S = S1 S2 S3``.

    Factors equal to the identity are dropped, so ``lift(I)`` is empty.

    Raises
    ------
    LiftError
        For r != 1 or a singular D block.
    """
    if S.dim_r != 1:
        raise LiftError("only r = 1 matrices can be lifted")
    try:
        S1, S2, S3 = canonical_decompose(S)
    except DecompositionError as exc:
        raise LiftError(f"cannot lift: {exc}") from exc
    b = S1.entries[0, 1]
    d = S2.entries[1, 1]
    c = -S3.entries[1, 0]
    factors = []
    if b != 0:
        factors.append(FresnelP2(b))
    if d != 1:
        factors.append(Scaling(d))
    if c != 0:
        factors.append(QuadraticQ2(c))
    return MetaplecticElement(factors)


def lift_system(sys: OpticalSystem) -> MetaplecticElement:
    """Factor-by-factor lift of an optical system.

    ``Free(d)`` becomes ``FresnelP2(d)`` and ``Lens(f)`` becomes
    ``QuadraticQ2(1/f)``; zero-length ``Free(0)`` elements are the identity
    and are omitted.
    """
    factors = []
    for e in sys.elements:
        if isinstance(e, Free):
            if e.d != 0:
                factors.append(FresnelP2(e.d))
        elif isinstance(e, Lens):
            factors.append(QuadraticQ2(Fraction(1) / e.f if _exact(e.f) else 1.0 / e.f))
    return MetaplecticElement(reversed(factors))


def apply(M: MetaplecticElement, psi: WaveGrid, method: str = "spectral") -> WaveGrid:
    """Act with ``M`` on ``psi``; factors right-to-left, then the phase offset.

    Raises
    ------
    ResolutionError
        If the input, an intermediate or the output state touches the grid
        or band edges.
    """
    check_resolved(psi, what="input state")
    out = psi
    for fac in reversed(M.factors):
        out = fac.act(out, method=method)
    if M.phase_offset != 1:
        out = out * M.phase_offset
    check_resolved(out, what="output state")
    return out


def _normalized_overlap(a: WaveGrid, b: WaveGrid) -> complex:
    na, nb = a.norm(), b.norm()
    if na == 0 or nb == 0:
        raise NotProportionalError("zero state has no phase")
    return a.inner(b) / (na * nb)


def global_phase(psi_out: WaveGrid, psi_ref: WaveGrid) -> float:
    """``arg <psi_ref, psi_out>`` in ``(-pi, pi]``.

    Raises
    ------
    NotProportionalError
        If the normalized overlap is below ``PROPORTIONAL_MIN``.
    """
    z = _normalized_overlap(psi_ref, psi_out)
    if abs(z) < PROPORTIONAL_MIN:
        raise NotProportionalError(
            f"states are not proportional (normalized overlap {abs(z):.3g})"
        )
    phi = math.atan2(z.imag, z.real)
    return math.pi if phi == -math.pi else phi


def _sign_of(z: complex, what: str) -> int:
    if abs(z) < PROPORTIONAL_MIN:
        raise AmbiguousOverlapError(f"{what}: normalized overlap {abs(z):.3g} is too small")
    if abs(z.imag) > SIGN_SIN_TOL * abs(z):
        raise AmbiguousOverlapError(f"{what}: overlap phase {np.angle(z):.3g} is not 0 or pi")
    return 1 if z.real > 0 else -1


def _as_element(x) -> MetaplecticElement:
    if isinstance(x, MetaplecticElement):
        return x
    if isinstance(x, OpticalSystem):
        return lift_system(x)
    if isinstance(x, SymplecticMatrix):
        return lift(x)
    raise TypeError(f"cannot lift {type(x).__name__}")


def cocycle_sign(Sa, Sb, probe: WaveGrid, method: str = "spectral") -> int:
    """Sign relating ``lift(Sa Sb)`` to ``lift(Sa) lift(Sb)`` on ``probe``.

    ``Sa`` and ``Sb`` may be matrices (lifted canonically), optical systems
    (lifted factor by factor) or ready-made elements.  The product is always
    lifted canonically from its shadow.

    Raises
    ------
    LiftError
        If a matrix, or the product shadow, has a singular D block.
    AmbiguousOverlapError
        If the two results are not proportional by a real sign.
    """
    Ma, Mb = _as_element(Sa), _as_element(Sb)
    Mab = lift(compose(Ma.shadow, Mb.shadow))
    lhs = apply(Mab, probe, method=method)
    rhs = apply(Ma, apply(Mb, probe, method=method), method=method)
    return _sign_of(_normalized_overlap(lhs, rhs), "cocycle")


def _check_closed(sys_loop: OpticalSystem, tol: float = 1e-10) -> bool:
    S = system_matrix(sys_loop)
    return S.allclose(SymplecticMatrix.identity(1), atol=tol, rtol=0)


def holonomy_loop(sys_loop: OpticalSystem, probe: WaveGrid, method: str = "spectral") -> int:
    """Sign a state picks up when carried once around a closed optical loop.

    Raises
    ------
    LoopNotClosedError
        If the loop's system matrix differs from the identity by more than 1e-10.
    """
    if not _check_closed(sys_loop):
        raise LoopNotClosedError("system matrix of the loop is not the identity")
    out = apply(lift_system(sys_loop), probe, method=method)
    return _sign_of(_normalized_overlap(probe, out), "holonomy")


def holonomy_report(
    sys_loop: OpticalSystem, probe: WaveGrid, method: str = "spectral"
) -> dict:
    """``{"loop_closed", "holonomy", "phase_m2"}`` for a loop.

    ``phase_m2`` is the global phase after the first half of the loop's
    elements (for the four-cell loop, the double pass ``M_s^2``); it is
    ``None`` if that half-way state is not proportional to the probe.
    ``holonomy`` is ``None`` when the loop is not closed.
    """
    closed = _check_closed(sys_loop)
    holonomy: Optional[int] = holonomy_loop(sys_loop, probe, method) if closed else None
    half = sys_loop.elements[: len(sys_loop) // 2]
    phase: Optional[float]
    if half:
        mid = apply(lift_system(OpticalSystem(half)), probe, method=method)
        try:
            phase = global_phase(mid, probe)
        except NotProportionalError:
            phase = None
    else:
        phase = 0.0
    return {"loop_closed": closed, "holonomy": holonomy, "phase_m2": phase}
