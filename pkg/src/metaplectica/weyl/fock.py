"""Truncated Fock matrices for the extended Heisenberg algebra.

On the basis ``|0>, ..., |n_max>`` the generators are

    E -> |0><0|,   Q|n> = sqrt(n+1) |n+1>,   D|n> = sqrt(n) |n-1>,

so ``Q^m E D^n / sqrt(m! n!)`` is the matrix unit ``|m><n|``.  Truncation
breaks ``[D, Q] = 1`` only in the last row and column, which is why products
are compared on an interior block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from ..errors import KernelDimensionError, TruncationError
from .algebra import AlgebraElement, commutator

__all__ = [
    "FockMatrix",
    "fock_generators",
    "fock_matrix",
    "required_truncation",
    "interior_size",
    "EVReport",
    "e_v_relation_check",
    "EDaggerReport",
    "e_dagger_nonhermitian_check",
    "SP2Report",
    "sp2_generators",
    "sp2_structure_check",
]


@dataclass(frozen=True)
class FockMatrix:
    """``(n_max + 1) x (n_max + 1)`` matrix of an algebra element.

    ``entries`` is a complex numpy array, or a sympy Matrix in exact mode.
    """

    n_max: int
    entries: object

    @property
    def exact(self) -> bool:
        return isinstance(self.entries, sympy.MatrixBase)

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        if self.n_max != other.n_max:
            raise TruncationError("Fock matrices of different truncation")
        if self.exact and other.exact:
            return FockMatrix(self.n_max, self.entries * other.entries)
        return FockMatrix(self.n_max, self.to_numpy() @ other.to_numpy())

    def to_numpy(self) -> np.ndarray:
        if self.exact:
            return np.array(self.entries.evalf(20).tolist(), dtype=complex)
        return np.asarray(self.entries)

    def interior(self, size: int):
        """Leading ``size x size`` block."""
        return self.entries[:size, :size]


def fock_generators(n_max: int, exact: bool = False):
    """``(Q, D, E)`` truncated at ``n_max``."""
    if n_max < 0:
        raise TruncationError("n_max must be nonnegative")
    n = n_max + 1
    if exact:
        Q = sympy.zeros(n, n)
        for j in range(n_max):
            Q[j + 1, j] = sympy.sqrt(j + 1)
        E = sympy.zeros(n, n)
        E[0, 0] = 1
        return Q, Q.T, E
    Q = np.diag(np.sqrt(np.arange(1, n, dtype=float)), -1).astype(complex)
    E = np.zeros((n, n), dtype=complex)
    E[0, 0] = 1
    return Q, Q.T.copy(), E


def required_truncation(x: AlgebraElement) -> int:
    """Smallest ``n_max`` for which the truncated matrix of ``x`` is meaningful.

    Terms with ``E`` are exact as soon as ``max(h, k) <= n_max``; pure Weyl
    terms ask for ``h + k <= n_max``.
    """
    need = 0
    for m in x.terms:
        need = max(need, max(m.h, m.k) if m.eps else m.h + m.k)
    return need


def interior_size(n_max: int, *elements: AlgebraElement) -> int:
    """Size of the block on which products of these elements are untouched by truncation."""
    return n_max + 1 - sum(x.degree for x in elements)


def _power(M, p, cache):
    top = max(cache)
    while top < p:
        cache[top + 1] = M * cache[top] if isinstance(M, sympy.MatrixBase) else M @ cache[top]
        top += 1
    return cache[p]


def fock_matrix(x: AlgebraElement, n_max: int, exact: bool = False) -> FockMatrix:
    """Substitute the truncated generators into the normal form of ``x``.

    Raises
    ------
    TruncationError
        If ``n_max`` is below :func:`required_truncation`.
    """
    need = required_truncation(x)
    if n_max < need:
        raise TruncationError(f"n_max = {n_max} is below the required {need}")
    Q, D, E = fock_generators(n_max, exact)
    n = n_max + 1
    eye = sympy.eye(n) if exact else np.eye(n, dtype=complex)
    qpow, dpow = {0: eye}, {0: eye}
    out = sympy.zeros(n, n) if exact else np.zeros((n, n), dtype=complex)
    for (h, eps, k), c in x.terms.items():
        Qh = _power(Q, h, qpow) if h else eye
        Dk = _power(D, k, dpow) if k else eye
        if exact:
            term = Qh * (E if eps else eye) * Dk
            out = out + sympy.sympify(c) * term
        else:
            term = (Qh @ E @ Dk) if eps else Qh @ Dk
            out = out + complex(c) * term
    if exact:
        out = out.applyfunc(sympy.simplify)
    return FockMatrix(n_max, out)


# -- the E <-> V relation ---------------------------------------------------------


def _null_vector(M: np.ndarray, what: str) -> np.ndarray:
    """Unit vector spanning the one-dimensional null space of ``M``."""
    _, s, vh = np.linalg.svd(M)
    scale = max(s[0], 1.0)
    small = np.sum(s < 1e-10 * scale)
    if small != 1:
        raise KernelDimensionError(f"null space of {what} has dimension {small}, expected 1")
    v = vh[-1].conj()
    return v / np.linalg.norm(v)


def _nilpotent_exp(M: np.ndarray) -> np.ndarray:
    """``exp(M)`` for nilpotent ``M`` by its terminating series."""
    n = M.shape[0]
    out = np.eye(n, dtype=M.dtype)
    term = np.eye(n, dtype=M.dtype)
    for j in range(1, n + 1):
        term = term @ M / j
        if not np.any(term):
            break
        out = out + term
    return out


@dataclass(frozen=True)
class EVReport:
    """Fit of ``V ~ lam * exp(-Q^2/2) E exp(D^2/2)`` at one truncation.

    Attributes
    ----------
    lam : complex
        Least-squares scalar.
    residual : float
        ``||V - lam R|| / ||V||`` (Frobenius).
    projector_error : float
        ``||V V - V||``.
    annihilation_error : float
        ``max(||a V||, ||V a+||)`` on the block that avoids the truncation edge.
    lam_series : float
        ``1 / sum_{j <= n_max/2} (-1/4)^j C(2j, j)``, the value of ``lam``
        implied by the truncated series; it tends to ``sqrt 2`` slowly.
    """

    n_max: int
    lam: complex
    residual: float
    projector_error: float
    annihilation_error: float
    lam_series: float


def e_v_relation_check(n_max: int = 32) -> EVReport:
    """Relate the boson vacuum projector ``V`` to ``E`` at truncation ``n_max``.

    ``V`` is the rank-one projector with range the kernel of
    ``a = (Q + D)/sqrt2`` and co-range the left kernel of ``a+ = (Q - D)/sqrt2``,
    so that ``a V = 0`` and ``V a+ = 0``.

    Raises
    ------
    TruncationError
        For ``n_max < 16``.
    KernelDimensionError
        When ``a`` has no one-dimensional kernel (odd ``n_max``).
    """
    if n_max < 16:
        raise TruncationError("the E-V relation needs n_max >= 16")
    Q, D, E = (np.real(M) for M in fock_generators(n_max))
    a = (Q + D) / math.sqrt(2)
    ad = (Q - D) / math.sqrt(2)
    u = _null_vector(a, "a")
    w = _null_vector(ad.T, "a+ (left)")
    V = np.outer(u, w) / (w @ u)
    R = _nilpotent_exp(-Q @ Q / 2) @ E @ _nilpotent_exp(D @ D / 2)
    lam = np.vdot(R, V) / np.vdot(R, R)
    residual = np.linalg.norm(V - lam * R) / np.linalg.norm(V)
    m = n_max - 1
    annihilation = max(np.linalg.norm((a @ V)[:m, :m]), np.linalg.norm((V @ ad)[:m, :m]))
    series = sum((-0.25) ** j * math.comb(2 * j, j) for j in range(n_max // 2 + 1))
    return EVReport(
        n_max=n_max,
        lam=complex(lam),
        residual=float(residual),
        projector_error=float(np.linalg.norm(V @ V - V)),
        annihilation_error=float(annihilation),
        lam_series=1.0 / series,
    )


@dataclass(frozen=True)
class EDaggerReport:
    """Hermiticity of ``E`` and ``V`` where ``a+`` is the adjoint of ``a``.

    ``E_boson`` and ``V_boson`` are the matrices on the number basis of
    ``a+ a``; ``nonhermiticity = ||E^H - E||`` and ``v_hermiticity_error =
    ||V^H - V||`` (Frobenius).
    """

    n_max: int
    nonhermiticity: float
    v_hermiticity_error: float
    e_idempotent_error: float
    E_boson: np.ndarray
    V_boson: np.ndarray


def e_dagger_nonhermitian_check(n_max: int = 16) -> EDaggerReport:
    """Build ``E`` and ``V`` in the basis where ``a`` is the standard lowering matrix.

    There ``Q = (a + a+)/sqrt2`` and ``D = (a - a+)/sqrt2`` with ``a+ = a^T``.
    ``E`` is the rank-one idempotent with ``D E = 0`` and ``E Q = 0``: its
    range is the kernel of ``D`` and its co-range the left kernel of ``Q``.
    ``V`` is the vacuum projector (kernel of ``a``, left kernel of ``a+``).
    """
    if n_max < 16:
        raise TruncationError("the adjoint check needs n_max >= 16")
    n = n_max + 1
    A = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)  # a|n> = sqrt(n)|n-1>
    Ad = A.T
    Qb = (A + Ad) / math.sqrt(2)
    Db = (A - Ad) / math.sqrt(2)
    r = _null_vector(Db, "D")
    left = _null_vector(Qb.T, "Q (left)")
    Eb = np.outer(r, left) / (left @ r)
    v = _null_vector(A, "a")
    vl = _null_vector(Ad.T, "a+ (left)")
    Vb = np.outer(v, vl) / (vl @ v)
    return EDaggerReport(
        n_max=n_max,
        nonhermiticity=float(np.linalg.norm(Eb.conj().T - Eb)),
        v_hermiticity_error=float(np.linalg.norm(Vb.conj().T - Vb)),
        e_idempotent_error=float(np.linalg.norm(Eb @ Eb - Eb)),
        E_boson=Eb,
        V_boson=Vb,
    )


# -- sp(2) ------------------------------------------------------------------------


def sp2_generators():
    """``(X, Y, H')`` with ``X = Q^2/2``, ``Y = D^2/2``, ``H' = (QD + DQ)/2``."""
    Q, D = AlgebraElement.Q(), AlgebraElement.D()
    half = Fraction(1, 2)
    X = Q * Q * half
    Y = D * D * half
    H = (Q * D + D * Q) * half
    return X, Y, H


@dataclass(frozen=True)
class SP2Report:
    """Symbolic and Fock checks of the sl(2) triple.

    ``symbolic`` maps each relation name to whether it holds exactly;
    ``fock_error`` is the largest interior-block deviation at ``n_max``;
    ``convention_map`` relates the generators to the momentum-language ones
    (``D = iP``).
    """

    symbolic: dict
    fock_error: float
    n_max: int
    convention_map: dict

    @property
    def ok(self) -> bool:
        return all(self.symbolic.values())


def sp2_structure_check(n_max: int = 10) -> SP2Report:
    """Verify ``[H', X] = 2X``, ``[H', Y] = -2Y``, ``[X, Y] = -H'``."""
    X, Y, H = sp2_generators()
    relations = {
        "[H',X] = 2X": (commutator(H, X), X * 2),
        "[H',Y] = -2Y": (commutator(H, Y), Y * -2),
        "[X,Y] = -H'": (commutator(X, Y), -H),
        "[X,X] = 0": (commutator(X, X), AlgebraElement.zero()),
    }
    symbolic = {name: lhs == rhs for name, (lhs, rhs) in relations.items()}
    fX, fY, fH = (fock_matrix(g, n_max).to_numpy() for g in (X, Y, H))
    m = n_max + 1 - 4  # each commutator term has degree 4
    err = 0.0
    for lhs, rhs in (
        (fH @ fX - fX @ fH, 2 * fX),
        (fH @ fY - fY @ fH, -2 * fY),
        (fX @ fY - fY @ fX, -fH),
    ):
        err = max(err, float(np.max(np.abs((lhs - rhs)[:m, :m]))))
    convention = {
        "X": "X (Q^2/2 in both)",
        "Y": "Y_D = D^2/2 = -P^2/2 = -Y_P",
        "H'": "H'_D = (QD + DQ)/2 = i (QP + PQ)/2 = i H_P",
        "[X,Y]": "[X, Y_P] = -[X, Y_D] = H'_D = i H_P",
    }
    return SP2Report(symbolic, err, n_max, convention)
