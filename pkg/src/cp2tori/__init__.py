"""Energy functionals on Lagrangian tori in CP^2 and certified
verification of the inequality chains comparing them to the Clifford
torus."""

__version__ = "0.1.0"

from .elliptic import EllipticModulus, complete_k, incomplete_f, jacobi_sn
from .family import (AlphaTriple, Branch, DerivedConstants, ModuliPoint,
                     conformal_factor, derive_constants, f_coefficients,
                     feasibility_check, g_phase, lemma3_box, lift, q_cubic,
                     solve_c2)
from .functionals import (FunctionalValues, HomogeneousParams, clifford_energy,
                          energy_mironov, homogeneous_energy)
from .interval import Box2, Certificate, CertStatus, Interval

__all__ = [
    "__version__",
    "EllipticModulus", "complete_k", "incomplete_f", "jacobi_sn",
    "AlphaTriple", "Branch", "DerivedConstants", "ModuliPoint",
    "conformal_factor", "derive_constants", "f_coefficients",
    "feasibility_check", "g_phase", "lemma3_box", "lift", "q_cubic",
    "solve_c2",
    "FunctionalValues", "HomogeneousParams", "clifford_energy",
    "energy_mironov", "homogeneous_energy",
    "Box2", "Certificate", "CertStatus", "Interval",
]
