"""Quantum mechanics on C² \\ {0} and monopole states built on the Hopf fibration."""

from .coords import CPoint, EulerCoords, R3Point, c2_to_euler, euler_to_c2, hopf_map
from .monopole import (
    GaugePotential,
    MonopoleState,
    gauge_potential,
    imaginary_gauge,
    magnetic_field,
    make_state,
    measure_charge,
    string_singularities,
    xi_factor,
)
from .operators import angular_momentum, commutator, laplace, position, v4, velocity
from .symalg import SymFunc, SymTerm, approx_equal, evaluate, partial, poisson

__version__ = "0.1.0"
