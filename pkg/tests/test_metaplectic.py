import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaplectica import metaplectic as mp
from metaplectica import wavefield as wf
from metaplectica.errors import (
    InvalidElementError,
    LiftError,
    LoopNotClosedError,
    NotProportionalError,
    ResolutionError,
)
from metaplectica.symplectic import (
    Free,
    Lens,
    OpticalSystem,
    SymplecticMatrix,
    compose,
    lens_system,
    system_matrix,
)


# -- lifts ------------------------------------------------------------------------------


def test_lift_examples():
    assert mp.lift(SymplecticMatrix([[1, 2], [0, 1]])).factors == (mp.FresnelP2(2),)
    ident = mp.lift(SymplecticMatrix.identity())
    assert ident.factors == () and ident.phase_offset == 1
    assert mp.lift(SymplecticMatrix([[1, 0], [Fraction(-1, 3), 1]])).factors == (
        mp.QuadraticQ2(Fraction(1, 3)),
    )


def test_lift_general_and_shadow():
    S = SymplecticMatrix([[Fraction(1, 2), 1], [Fraction(-1, 4), Fraction(3, 2)]])
    M = mp.lift(S)
    assert [type(f) for f in M.factors] == [mp.FresnelP2, mp.Scaling, mp.QuadraticQ2]
    assert M.shadow == S


def test_lift_singular_d():
    with pytest.raises(LiftError):
        mp.lift(SymplecticMatrix([[0, 1], [-1, 0]]))
    with pytest.raises(LiftError):
        mp.lift(SymplecticMatrix.identity(2))


def test_lift_system_examples():
    M = mp.lift_system(lens_system(1))
    assert M.factors == (mp.FresnelP2(1), mp.QuadraticQ2(1), mp.FresnelP2(1))
    assert M.shadow == SymplecticMatrix([[0, 1], [-1, 0]])
    assert len(mp.lift_system(OpticalSystem([Free(0)]))) == 0
    M2 = mp.lift_system(lens_system(1, 2))
    assert len(M2) == 6 and M2.shadow == -SymplecticMatrix.identity()


def test_lift_system_order_is_matrix_order():
    sys = OpticalSystem([Free(2), Lens(4)])
    M = mp.lift_system(sys)
    assert M.factors == (mp.QuadraticQ2(Fraction(1, 4)), mp.FresnelP2(2))
    assert M.shadow == system_matrix(sys)


def test_element_invariants():
    with pytest.raises(InvalidElementError):
        mp.MetaplecticElement([], phase_offset=2.0)
    with pytest.raises(InvalidElementError):
        mp.Scaling(0)
    with pytest.raises(InvalidElementError):
        mp.MetaplecticElement(["not a factor"])


@given(
    st.lists(
        st.one_of(
            st.builds(mp.FresnelP2, st.fractions(-5, 5)),
            st.builds(mp.QuadraticQ2, st.fractions(-5, 5)),
            st.builds(mp.Scaling, st.fractions(-5, 5).filter(lambda d: d != 0)),
        ),
        max_size=6,
    ),
    st.lists(st.builds(mp.FresnelP2, st.fractions(-5, 5)), max_size=3),
)
def test_projection_consistency_exact(fa, fb):
    Ma, Mb = mp.MetaplecticElement(fa), mp.MetaplecticElement(fb)
    assert (Ma @ Mb).shadow == compose(Ma.shadow, Mb.shadow)


# -- apply ------------------------------------------------------------------------------


def test_apply_identity(unit_gaussian):
    out = mp.apply(mp.MetaplecticElement(), unit_gaussian)
    assert np.array_equal(out.samples, unit_gaussian.samples)


@pytest.mark.parametrize("method", ["spectral", "quadrature"])
def test_apply_fresnel_closed_form(unit_gaussian, method, backend):
    out = mp.apply(mp.MetaplecticElement([mp.FresnelP2(1)]), unit_gaussian, method=method)
    x = unit_gaussian.x
    expected = np.pi**-0.25 * (1 + 1j) ** -0.5 * np.exp(-(x**2) / (2 * (1 + 1j)))
    assert np.max(np.abs(out.samples - expected)) < 1e-6


def test_apply_phase_offset(unit_gaussian):
    M = mp.MetaplecticElement([], phase_offset=1j)
    assert mp.global_phase(mp.apply(M, unit_gaussian), unit_gaussian) == pytest.approx(math.pi / 2)


def test_apply_resolution_error():
    with pytest.raises(ResolutionError):
        mp.apply(mp.MetaplecticElement([mp.QuadraticQ2(1)]), wf.top_hat())


def test_double_pass_on_even_probe_reverses(unit_gaussian):
    out = mp.apply(mp.lift_system(lens_system(1, 2)), wf.gaussian(center=1.0))
    mirrored = wf.gaussian(center=-1.0)
    assert np.max(np.abs(out.samples - (-1j) * mirrored.samples)) < 1e-10


@pytest.mark.parametrize("probe", [wf.gaussian(), wf.gaussian(width=0.7), wf.hermite_gaussian(2), wf.hermite_gaussian(4)])
def test_double_pass_even_probes(probe):
    out = mp.apply(mp.lift_system(lens_system(1, 2)), probe)
    assert mp.global_phase(out, probe) == pytest.approx(-math.pi / 2, abs=1e-3)


def test_double_pass_even_probes_other_focal_length():
    # the phase is independent of f; a wider probe matches the f = 2 cell
    probe = wf.gaussian(width=math.sqrt(2))
    out = mp.apply(mp.lift_system(lens_system(2, 2)), probe)
    assert mp.global_phase(out, probe) == pytest.approx(-math.pi / 2, abs=1e-3)


def test_double_pass_odd_probe(odd_probe):
    out = mp.apply(mp.lift_system(lens_system(1, 2)), odd_probe)
    assert mp.global_phase(out, odd_probe) == pytest.approx(math.pi / 2, abs=1e-3)


def test_single_cell_is_quarter_oscillator_period():
    # M_s acts on phi_n as exp(-i pi/2 (n + 1/2))
    M = mp.lift_system(lens_system(1))
    for n in range(4):
        phi = wf.hermite_gaussian(n)
        expected = -math.pi / 2 * (n + 0.5)
        got = mp.global_phase(mp.apply(M, phi), phi)
        assert (got - expected + math.pi) % (2 * math.pi) - math.pi == pytest.approx(0, abs=1e-9)


def _liftable(b, c, d):
    return SymplecticMatrix([[(1 + b * c) / d, b], [c, d]])


@given(
    st.floats(-1.5, 1.5),
    st.floats(-1.0, 1.0),
    st.floats(0.6, 1.6),
    st.booleans(),
)
def test_metaplectic_covariance(b, c, d, flip):
    if abs(b) < 0.3:  # keep the quadrature path inside its Nyquist limit too
        b = 0.0
    d = -d if flip else d
    S = _liftable(b, c, d)
    psi = wf.gaussian(center=0.8, momentum=-0.6)
    out = mp.apply(mp.lift(S), psi)
    expected = S.to_float() @ np.array(psi.centroid())
    assert np.allclose(out.centroid(), expected, atol=1e-4)
    assert out.norm() == pytest.approx(psi.norm(), abs=1e-6)


@pytest.mark.parametrize(
    "factor", [mp.FresnelP2(0.8), mp.FresnelP2(-2.0), mp.QuadraticQ2(1.5), mp.Scaling(1.3), mp.Scaling(-0.7)]
)
def test_unitarity_per_factor(factor):
    psi = wf.gaussian(center=0.3, momentum=0.2)
    out = mp.apply(mp.MetaplecticElement([factor]), psi)
    assert out.norm() == pytest.approx(psi.norm(), abs=1e-6)


# -- phase, cocycle, holonomy ------------------------------------------------------------


def test_global_phase_examples(unit_gaussian):
    assert mp.global_phase(unit_gaussian, unit_gaussian) == 0.0
    for alpha in (0.3, -2.0, math.pi):
        assert mp.global_phase(unit_gaussian * np.exp(1j * alpha), unit_gaussian) == pytest.approx(alpha)
    with pytest.raises(NotProportionalError):
        mp.global_phase(wf.hermite_gaussian(1), unit_gaussian)


def test_cocycle_examples(unit_gaussian):
    I = SymplecticMatrix.identity()
    assert mp.cocycle_sign(I, I, unit_gaussian) == 1
    S = SymplecticMatrix([[1, 2], [0, 1]])
    assert mp.cocycle_sign(S, S, unit_gaussian) == 1


def test_cocycle_lens_cell_regression(unit_gaussian):
    # lift(-I) = Scaling(-1) = i psi(-x) while M_s^2 = -i psi(-x) on the principal branch
    cell = lens_system(1)
    assert mp.cocycle_sign(cell, cell, unit_gaussian) == -1
    assert mp.cocycle_sign(cell, cell, wf.hermite_gaussian(3)) == -1


def test_cocycle_full_loop(unit_gaussian):
    half = lens_system(1, 2)
    assert mp.cocycle_sign(half, half, unit_gaussian) == -1


def test_cocycle_singular_product(unit_gaussian):
    with pytest.raises(LiftError):
        mp.cocycle_sign(lens_system(1), SymplecticMatrix.identity(), unit_gaussian)


def test_cocycle_scaling_pair(unit_gaussian):
    # (-1) * (-1) = 1 in Sp(2), while Scaling(-1)^2 = i^2 = -1
    m = SymplecticMatrix([[-1, 0], [0, -1]])
    assert mp.cocycle_sign(m, m, unit_gaussian) == -1
    p = SymplecticMatrix([[Fraction(1, 2), 0], [0, 2]])
    assert mp.cocycle_sign(p, p, unit_gaussian) == 1


def test_holonomy_examples(unit_gaussian, odd_probe):
    assert mp.holonomy_loop(lens_system(1, 4), unit_gaussian) == -1
    assert mp.holonomy_loop(lens_system(1, 8), unit_gaussian) == 1
    assert mp.holonomy_loop(OpticalSystem([Free(0)]), unit_gaussian) == 1
    assert mp.holonomy_loop(lens_system(1, 4), odd_probe) == -1


def test_holonomy_open_loop(unit_gaussian):
    with pytest.raises(LoopNotClosedError):
        mp.holonomy_loop(lens_system(1, 2), unit_gaussian)


def test_holonomy_report(unit_gaussian):
    rep = mp.holonomy_report(lens_system(1, 4), unit_gaussian)
    assert rep["loop_closed"] and rep["holonomy"] == -1
    assert rep["phase_m2"] == pytest.approx(-math.pi / 2, abs=1e-3)
    rep = mp.holonomy_report(lens_system(1, 3), unit_gaussian)
    assert not rep["loop_closed"] and rep["holonomy"] is None
