"""Polya groups of number fields and dihedral Polya extensions of Q."""

from .dihedral import (
    NOT_POLYA,
    POLYA,
    SKIPPED,
    UNDECIDED,
    brumer_instance,
    certify_dihedral,
    lavallee_instance,
    lavallee_sweep,
    make_instance,
)
from .numfield import NumberField, RelationEffort, class_group, decompose_prime
from .poly import IntPoly, discriminant
from .polya import Embedding, polya_group, relative_polya_group
from .quadratic import quad_class_group, quad_polya_group

__version__ = "0.1.0"

__all__ = [
    "Embedding",
    "IntPoly",
    "NOT_POLYA",
    "NumberField",
    "POLYA",
    "RelationEffort",
    "SKIPPED",
    "UNDECIDED",
    "brumer_instance",
    "certify_dihedral",
    "class_group",
    "decompose_prime",
    "discriminant",
    "lavallee_instance",
    "lavallee_sweep",
    "make_instance",
    "polya_group",
    "quad_class_group",
    "quad_polya_group",
    "relative_polya_group",
]
