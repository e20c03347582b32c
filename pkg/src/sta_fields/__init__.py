"""Electromagnetism and acoustics in the spacetime algebra Cl(1,3).

The subpackages build on one another: :mod:`~sta_fields.algebra` supplies
multivectors, rotors and frames; :mod:`~sta_fields.analytic` and
:mod:`~sta_fields.lattice` supply exact and discretized fields; the theory
modules :mod:`~sta_fields.em` and :mod:`~sta_fields.acoustic` build
potentials, fields, stress tensors, forces and plane waves on either
backend; :mod:`~sta_fields.simulator` evolves them in time.
"""

__version__ = "0.1.0"

from .algebra import I, LAB, Frame, Multivector, Rotor, rotor_exp, sandwich, vector  # noqa: E402
from .analytic import AnalyticField  # noqa: E402
from .lattice import LatticeSpec, MultivectorField  # noqa: E402

__all__ = [
    "__version__",
    "AnalyticField",
    "Frame",
    "I",
    "LAB",
    "LatticeSpec",
    "Multivector",
    "MultivectorField",
    "Rotor",
    "rotor_exp",
    "sandwich",
    "vector",
]
