"""Extended Heisenberg algebra: normal forms, rewriting, Fock matrices and parsing."""
from .algebra import (
    DEGREE_CAP,
    AlgebraElement,
    BosonElement,
    Monomial,
    commutator,
    cospinor,
    from_boson,
    is_left_ideal,
    is_right_ideal,
    matrix_unit,
    monomial_product,
    spinor,
    to_boson,
)
from .fock import (
    EDaggerReport,
    EVReport,
    FockMatrix,
    SP2Report,
    e_dagger_nonhermitian_check,
    e_v_relation_check,
    fock_generators,
    fock_matrix,
    interior_size,
    required_truncation,
    sp2_generators,
    sp2_structure_check,
)
from .rewrite import is_confluent_on, normal_forms_all_orders, normal_order, word_to_element


def multiply(x, y):
    """Normal-ordered product ``x * y``."""
    return x * y


__all__ = [
    "DEGREE_CAP",
    "AlgebraElement",
    "BosonElement",
    "Monomial",
    "commutator",
    "cospinor",
    "from_boson",
    "is_left_ideal",
    "is_right_ideal",
    "matrix_unit",
    "monomial_product",
    "multiply",
    "spinor",
    "to_boson",
    "EDaggerReport",
    "EVReport",
    "FockMatrix",
    "SP2Report",
    "e_dagger_nonhermitian_check",
    "e_v_relation_check",
    "fock_generators",
    "fock_matrix",
    "interior_size",
    "required_truncation",
    "sp2_generators",
    "sp2_structure_check",
    "is_confluent_on",
    "normal_forms_all_orders",
    "normal_order",
    "word_to_element",
]
