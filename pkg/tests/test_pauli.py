import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaplectica.errors import NotBivectorError, NotInIdealError
from metaplectica.pauli import (
    E1,
    E2,
    E3,
    E12,
    E13,
    E23,
    E123,
    IDEMPOTENT,
    PauliElement,
    clifford_multiply,
    components_from_spinor,
    intensity,
    recombine,
    reversion,
    rotate_spinor,
    rotate_vector,
    rotation_matrix,
    rotor,
    spin_norm,
    spinor_from_components,
)

ONE = PauliElement.scalar(1.0)

# 2x2 Pauli matrices: an independent representation of the algebra
SIGMA = {
    "1": np.eye(2, dtype=complex),
    "e1": np.array([[0, 1], [1, 0]], dtype=complex),
    "e2": np.array([[0, -1j], [1j, 0]]),
    "e3": np.array([[1, 0], [0, -1]], dtype=complex),
}


def as_matrix(x: PauliElement) -> np.ndarray:
    s = SIGMA
    blades = {
        "1": s["1"],
        "e1": s["e1"],
        "e2": s["e2"],
        "e3": s["e3"],
        "e12": s["e1"] @ s["e2"],
        "e13": s["e1"] @ s["e3"],
        "e23": s["e2"] @ s["e3"],
        "e123": s["e1"] @ s["e2"] @ s["e3"],
    }
    return sum(x[name] * m for name, m in blades.items())


def test_products_examples():
    assert E1 * E1 == ONE
    assert E1 * E2 == E12
    assert E2 * E1 == -E12
    assert E123 * E123 == -ONE


def test_anticommutation():
    gens = [E1, E2, E3]
    for i, j in itertools.product(range(3), repeat=2):
        s = gens[i] * gens[j] + gens[j] * gens[i]
        assert s == ONE * (2.0 if i == j else 0.0)


elements = st.lists(st.floats(-3, 3), min_size=8, max_size=8).map(PauliElement)


@given(elements, elements)
def test_product_matches_pauli_matrices(x, y):
    assert np.allclose(as_matrix(clifford_multiply(x, y)), as_matrix(x) @ as_matrix(y), atol=1e-9)


@given(elements, elements, elements)
def test_associative(x, y, z):
    assert ((x * y) * z).allclose(x * (y * z), atol=1e-9)


def test_idempotent():
    assert IDEMPOTENT * IDEMPOTENT == IDEMPOTENT


def test_rotor_examples():
    assert rotor(E12, 0.0) == ONE
    assert rotor(E12, 2 * math.pi) == -ONE
    assert rotor(E12, 4 * math.pi) == ONE
    assert rotor(E23, 2 * math.pi) == -ONE
    with pytest.raises(NotBivectorError):
        rotor(E1, 1.0)
    with pytest.raises(NotBivectorError):
        rotor(E12 * 2, 1.0)


@given(st.floats(-20, 20), st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: sum(t * t for t in v) > 1e-3))
def test_rotor_norm_and_rotation(theta, v):
    n = math.sqrt(sum(t * t for t in v))
    B = (E12 * v[0] + E13 * v[1] + E23 * v[2]) / n
    g = rotor(B, theta)
    assert spin_norm(g).allclose(ONE, atol=1e-12)
    R = rotation_matrix(g)
    assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_rotor_rotates_by_theta_in_plane():
    g = rotor(E12, math.pi / 2)
    assert rotate_vector(E1, g).allclose(E2, atol=1e-15) or rotate_vector(E1, g).allclose(-E2, atol=1e-15)
    assert rotate_vector(E3, g).allclose(E3, atol=1e-15)


def test_rotate_spinor_examples():
    psi = spinor_from_components(0.3 + 0.1j, -0.7 + 0.2j)
    assert rotate_spinor(psi, ONE) == psi
    assert rotate_spinor(psi, rotor(E12, 2 * math.pi)) == -psi
    assert rotate_spinor(psi, rotor(E13, 4 * math.pi)) == psi
    with pytest.raises(NotInIdealError):
        rotate_spinor(E1, ONE)


@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5), st.floats(-10, 10))
def test_rotation_keeps_ideal(p1, p2, theta):
    psi = spinor_from_components(p1, p2)
    out = rotate_spinor(psi, rotor(E23, theta))
    assert (out * IDEMPOTENT).allclose(out, atol=1e-9)


@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_component_roundtrip(p1, p2):
    a, b = components_from_spinor(spinor_from_components(p1, p2))
    assert a == pytest.approx(p1, abs=1e-12) and b == pytest.approx(p2, abs=1e-12)
    assert intensity(spinor_from_components(p1, p2)) == pytest.approx(abs(p1) ** 2 + abs(p2) ** 2, abs=1e-9)


def test_spinor_component_map():
    psi = spinor_from_components(1 + 2j, 3 + 4j)
    G = psi.even() * 2
    assert (G["1"], G["e23"], G["e13"], G["e12"]) == (1.0, 4.0, 3.0, 2.0)


def test_recombination_2pi():
    psi1 = spinor_from_components(1.0, 0.5j)
    psi2 = spinor_from_components(0.25 - 1j, 2.0)
    assert recombine(psi1, psi2, 2 * math.pi) == psi1 - psi2
    assert recombine(psi1, psi2, 4 * math.pi) == psi1 + psi2
    assert intensity(recombine(psi1, psi1, 2 * math.pi)) == 0.0


def test_reversion():
    assert reversion(E12) == -E12 and reversion(E1) == E1 and reversion(E123) == -E123
