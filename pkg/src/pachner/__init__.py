"""Grassmann-Gaussian pentachoron weights and numerical checks of the 3-3 Pachner relation."""

from .cochain import Cocycle, load_cocycle, random_generic_cocycle, save_cocycle
from .grassmann import GeneratorRegistry, GrassmannElement, berezin_integrate
from .pentachoron_weight import matrix_F, pentachoron_weight
from .phi_coeff import coeff_left, coeff_right, phi
from .simplicial import MOVE
from .verifier import selftest, verify_relation

__all__ = [
    "Cocycle", "load_cocycle", "random_generic_cocycle", "save_cocycle",
    "GeneratorRegistry", "GrassmannElement", "berezin_integrate",
    "matrix_F", "pentachoron_weight", "coeff_left", "coeff_right", "phi",
    "MOVE", "selftest", "verify_relation",
]
__version__ = "0.1.0"
