"""Critical L-values of algebraic Hecke characters over CM towers K/k/k0.

Typical use::

    from heckecrit import desk_tower, find_smallest_character, main_quotient, recognize_in_E

    tower = desk_tower(50)
    chi = find_smallest_character(tower)
    t = main_quotient(chi, precision=50)
    cert = recognize_in_E(t, chi.coefficients)
"""

from .certifier import (AlgebraicityCertificate, ETuple, main_quotient, recognize_in_E,
                        verify_galois_covariance)
from .characters import (AlgebraicHeckeCharacter, InfinityType, check_critical, enumerate_characters, evaluate,
                         find_smallest_character, restrict_to_k)
from .errors import HeckeError
from .field_tower import FieldTower, GaloisClosure, NumberField, build_field, build_tower, desk_tower
from .ideals import Ideal, PrimeIdeal, enumerate_ideals, ray_class_group
from .lfunction import evaluate_Lf, linf_ratio_exact
from .periods_signs import n_sign, omega, omega_covariance

__version__ = "0.1.0"

__all__ = [
    "AlgebraicHeckeCharacter", "AlgebraicityCertificate", "ETuple", "FieldTower", "GaloisClosure",
    "HeckeError", "Ideal", "InfinityType", "NumberField", "PrimeIdeal", "build_field", "build_tower",
    "check_critical", "desk_tower", "enumerate_characters", "enumerate_ideals", "evaluate", "evaluate_Lf",
    "find_smallest_character", "linf_ratio_exact", "main_quotient", "n_sign", "omega", "omega_covariance",
    "ray_class_group", "recognize_in_E", "restrict_to_k", "verify_galois_covariance",
]
