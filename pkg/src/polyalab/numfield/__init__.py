"""Number fields: maximal orders, prime decomposition, ideals and class groups."""

from .classgroup import ClassGroup, RelationEffort, class_group, is_principal
from .field import NumberField, PrimeIdealFactor, build_field, decompose_prime, valuation
from .ideals import FracIdeal, ideal_mul, ideal_norm, ideal_pow, principal_ideal

__all__ = [
    "ClassGroup",
    "FracIdeal",
    "NumberField",
    "PrimeIdealFactor",
    "RelationEffort",
    "build_field",
    "class_group",
    "decompose_prime",
    "ideal_mul",
    "ideal_norm",
    "ideal_pow",
    "is_principal",
    "principal_ideal",
    "valuation",
]
