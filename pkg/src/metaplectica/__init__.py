"""Symplectic ray optics, metaplectic lifts with sign tracking, the extended
Heisenberg algebra, and the Gouy phase of a focused beam.

Submodules
----------
symplectic
    Sp(2r) matrices, optical systems, ray tracing and the canonical decomposition.
metaplectic
    Lifts of r = 1 matrices to operators on sampled wavefunctions; cocycle and holonomy signs.
wavefield
    Sampled wavefunctions, Fresnel propagators, Gaussian beams, Gouy phase and fringes.
weyl
    Normal-ordered algebra with idempotent E, rewriting, Fock matrices, boson form.
pauli
    Cl(3,0) rotors and spinors (the orthogonal 2pi / 4pi analogy).
"""
import logging
import os

from . import errors, kernels, metaplectic, pauli, symplectic, wavefield, weyl
from .metaplectic import (
    MetaplecticElement,
    apply,
    cocycle_sign,
    global_phase,
    holonomy_loop,
    lift,
    lift_system,
)
from .symplectic import (
    Free,
    Lens,
    OpticalSystem,
    RayVector,
    SymplecticMatrix,
    lens_system,
    system_matrix,
    trace_ray,
)
from .wavefield import GaussianBeam, WaveGrid

__version__ = "0.1.0"

_level = os.environ.get("METAPLECTICA_LOG")
if _level:
    logging.getLogger(__name__).setLevel(_level.upper())
logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "errors",
    "kernels",
    "metaplectic",
    "pauli",
    "symplectic",
    "wavefield",
    "weyl",
    "MetaplecticElement",
    "apply",
    "cocycle_sign",
    "global_phase",
    "holonomy_loop",
    "lift",
    "lift_system",
    "Free",
    "Lens",
    "OpticalSystem",
    "RayVector",
    "SymplecticMatrix",
    "lens_system",
    "system_matrix",
    "trace_ray",
    "GaussianBeam",
    "WaveGrid",
]
