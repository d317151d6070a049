import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from metaplectica.errors import DegreeCapError, ExpressionSyntaxError, UnsupportedElementError
from metaplectica.weyl import (
    AlgebraElement,
    BosonElement,
    Monomial,
    commutator,
    cospinor,
    fock_generators,
    fock_matrix,
    from_boson,
    is_confluent_on,
    is_left_ideal,
    is_right_ideal,
    matrix_unit,
    multiply,
    normal_forms_all_orders,
    normal_order,
    spinor,
    to_boson,
    word_to_element,
)
from metaplectica.weyl.parser import parse_expression

Q, D, E = AlgebraElement.Q(), AlgebraElement.D(), AlgebraElement.E()
ONE = AlgebraElement.one()


def fock_word(word, n_max):
    """Product of truncated generator matrices: an oracle independent of the rewriting."""
    Qm, Dm, Em = fock_generators(n_max)
    mats = {"Q": Qm, "D": Dm, "E": Em}
    out = np.eye(n_max + 1, dtype=complex)
    for g in word:
        out = out @ mats[g]
    return out


# -- rewriting --------------------------------------------------------------------------


def test_normal_order_examples():
    assert normal_order("DQ") == Q * D + 1
    assert normal_order("EQ").is_zero()
    assert normal_order("DE").is_zero()
    assert normal_order("EE") == E
    assert normal_order("EDDQQE") == 2 * E


def test_contraction_matches_fock_oracle():
    word = "EDDQQE"
    m = fock_word(word, 8)
    assert np.allclose(m, fock_matrix(normal_order(word), 8).to_numpy(), atol=1e-12)
    assert np.allclose(m, 2 * fock_word("E", 8), atol=1e-12)


@pytest.mark.parametrize("k,m", [(0, 3), (2, 1), (3, 3), (4, 4), (1, 0)])
def test_contraction_rule(k, m):
    word = "E" + "D" * k + "Q" * m + "E"
    expected = math.factorial(m) * E if k == m else AlgebraElement.zero()
    assert normal_order(word, contraction=True) == expected
    assert normal_order(word, contraction=False) == expected


def test_confluence_all_words_up_to_6():
    words = [w for n in range(7) for w in itertools.product("QDE", repeat=n)]
    assert is_confluent_on(words, contraction=True)
    assert is_confluent_on(words, contraction=False)


def test_random_reduction_orders_length_8():
    rng = random.Random(11)
    for _ in range(300):
        word = "".join(rng.choice("QDE") for _ in range(rng.randint(0, 8)))
        ref = word_to_element(word)
        for strategy in ("leftmost", "rightmost", "random"):
            for contraction in (True, False):
                got = normal_order(word, strategy=strategy, contraction=contraction, rng=rng)
                assert got == ref, (word, strategy, contraction)


def test_all_orders_single_result():
    forms = normal_forms_all_orders("DDQQE")
    assert len(forms) == 1 and forms[0] == 2 * E


def test_words_match_fock_oracle():
    rng = random.Random(5)
    for _ in range(200):
        word = "".join(rng.choice("QDE") for _ in range(rng.randint(1, 6)))
        n_max = 14
        size = n_max + 1 - len(word)
        got = fock_matrix(normal_order(word), n_max).to_numpy()
        assert np.allclose(got[:size, :size], fock_word(word, n_max)[:size, :size], atol=1e-9)


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        Q**65
    with pytest.raises(DegreeCapError):
        normal_order("Q" * 65)
    assert (Q**64).degree == 64


def test_unknown_generator():
    with pytest.raises(ValueError):
        normal_order("QX")


# -- products -------------------------------------------------------------------------------


def test_multiply_examples():
    x = 3 * Q * Q + Fraction(1, 2) * E * D
    assert multiply(x, ONE) == x
    assert multiply(ONE, x) == x
    assert (Q * E) * (E * D) == AlgebraElement.monomial(1, 1, 1)
    assert D * spinor([0, 1]) == E


def test_spinor_cospinor_product():
    lam = [1, Fraction(2, 3), -4]
    mu = [5, 0, 7]
    expected = AlgebraElement({Monomial(h, 1, k): a * b for h, a in enumerate(lam) for k, b in enumerate(mu)})
    assert spinor(lam) * cospinor(mu) == expected


def test_spinor_examples():
    assert spinor([0, 1]) == Q * E
    assert spinor([1]) == E


small_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 1), st.integers(0, 3)),
    st.integers(-5, 5),
    max_size=4,
)


@given(small_terms, small_terms, small_terms)
def test_associativity(a, b, c):
    x, y, z = AlgebraElement(a), AlgebraElement(b), AlgebraElement(c)
    assert (x * y) * z == x * (y * z)


@given(small_terms, st.lists(st.integers(-5, 5), max_size=5))
def test_left_ideal_closure(a, coeffs):
    assert is_left_ideal(AlgebraElement(a) * spinor(coeffs))


@given(small_terms, st.lists(st.integers(-5, 5), max_size=5))
def test_right_ideal_closure(a, coeffs):
    assert is_right_ideal(cospinor(coeffs) * AlgebraElement(a))


def test_closed_form_product_against_words():
    for h1, e1, k1, h2, e2, k2 in itertools.product(range(3), range(2), range(4), range(4), range(2), range(3)):
        w = "Q" * h1 + "E" * e1 + "D" * k1 + "Q" * h2 + "E" * e2 + "D" * k2
        lhs = AlgebraElement.monomial(h1, e1, k1) * AlgebraElement.monomial(h2, e2, k2)
        assert lhs == normal_order(w, contraction=False)


def test_mixed_coefficients():
    x = 0.5 * Q + (1 + 2j) * D
    y = x * x
    assert y.allclose(0.25 * Q * Q + (0.5 + 1j) * (Q * D + D * Q) + (1 + 2j) ** 2 * D * D)


def test_string_form():
    assert str(ONE) == "1"
    assert str(AlgebraElement.zero()) == "0"
    assert str(Q * D - 1) == "-1 + Q*D"
    assert str(Fraction(1, 2) * Q**2) == "1/2*Q^2"


# -- matrix units ------------------------------------------------------------------------------


def test_matrix_unit_examples():
    assert matrix_unit(0, 0) == E
    assert matrix_unit(1, 0) * matrix_unit(0, 1) == matrix_unit(1, 1)
    assert matrix_unit(0, 1) * matrix_unit(1, 0) == matrix_unit(0, 0)
    assert (matrix_unit(0, 1) * matrix_unit(0, 1)).is_zero()


def test_matrix_unit_exact_coefficients():
    c = matrix_unit(2, 3, exact=True).terms[Monomial(2, 1, 3)]
    assert c == 1 / sympy.sqrt(12)
    assert matrix_unit(1, 1, exact=True).terms[Monomial(1, 1, 1)] == 1
    assert matrix_unit(2, 2, exact=True).terms[Monomial(2, 1, 2)] == Fraction(1, 2)


def test_matrix_unit_relations_exact_up_to_8():
    units = {(m, n): matrix_unit(m, n, exact=True) for m in range(9) for n in range(9)}
    zero = AlgebraElement.zero()
    for (i, j), (m, n) in itertools.product(units, repeat=2):
        # E^{ij} E^{mn} = delta_{jm} E^{in}
        assert units[i, j] * units[m, n] == (units[i, n] if j == m else zero)


def test_matrix_units_are_fock_units():
    for m, n in itertools.product(range(5), repeat=2):
        M = fock_matrix(matrix_unit(m, n), 6).to_numpy()
        expected = np.zeros((7, 7))
        expected[m, n] = 1
        assert np.allclose(M, expected, atol=1e-12)


# -- boson transform ------------------------------------------------------------------------------


def test_to_boson_examples():
    a, ad = BosonElement.a(), BosonElement.ad()
    assert to_boson(Q, exact=True) == (a + ad) * (sympy.sqrt(2) / 2)
    assert to_boson(commutator(D, Q)) == BosonElement.one()
    assert commutator(a, ad) == BosonElement.one()
    assert to_boson(Q * D + D * Q) == a * a - ad * ad
    with pytest.raises(UnsupportedElementError):
        to_boson(E)


def _boson_matrices(n_max):
    A = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)
    return A, A.T


def _boson_matrix(x: BosonElement, n_max):
    A, Ad = _boson_matrices(n_max)
    out = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for (m, eps, n), c in x.terms.items():
        assert eps == 0
        out += complex(c) * np.linalg.matrix_power(Ad, m) @ np.linalg.matrix_power(A, n)
    return out


@given(small_terms.map(lambda d: {(h, 0, k): c for (h, _, k), c in d.items()}))
def test_to_boson_matches_matrix_substitution(terms):
    x = AlgebraElement(terms)
    n_max = 16
    A, Ad = _boson_matrices(n_max)
    Qb, Db = (A + Ad) / math.sqrt(2), (A - Ad) / math.sqrt(2)
    direct = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for (h, _, k), c in x.terms.items():
        direct += c * np.linalg.matrix_power(Qb, h) @ np.linalg.matrix_power(Db, k)
    size = n_max + 1 - 6
    got = _boson_matrix(to_boson(x), n_max)
    assert np.allclose(got[:size, :size], direct[:size, :size], atol=1e-9)


@given(small_terms.map(lambda d: {(h, 0, k): c for (h, _, k), c in d.items()}))
def test_boson_roundtrip_exact(terms):
    x = AlgebraElement(terms)
    assert from_boson(to_boson(x, exact=True), exact=True) == x


def test_boson_vacuum_relations():
    a, ad, V = BosonElement.a(), BosonElement.ad(), BosonElement.V()
    assert (a * V).is_zero() and (V * ad).is_zero() and V * V == V


# -- parser ---------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [
        ("[D,Q]", "1"),
        ("[a,ad]", "1"),
        ("E*D^2*Q^2*E", "2*E"),
        ("Q*D+D*Q", "1 + 2*Q*D"),
        ("-(Q+1)^2", "-1 - 2*Q - Q^2"),
        ("3*V*V - 2*V", "V"),
        ("[Q^2, D^2]", "-2 - 4*Q*D"),
    ],
)
def test_parse_expression(text, expected):
    assert str(parse_expression(text)) == expected


def test_parse_mixed_conversion():
    x = parse_expression("a + 0*Q", exact=True)
    assert x == (Q + D) * (sympy.sqrt(2) / 2)


@pytest.mark.parametrize("text", ["V*Q", "Q+", "(Q", "Q^-1", "Q/2", "[Q D]", ""])
def test_parse_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        parse_expression(text)
