"""JSON-ready dictionaries for fields, prime ideals and class groups.

Integers inside matrices and discriminants are written as decimal strings so
consumers with 64-bit integers never overflow.  Small counters (degrees,
exponents, invariant factors) stay plain JSON numbers unless they exceed
2^63.
"""

from __future__ import annotations

from fractions import Fraction

from .numfield.classgroup import ClassGroup
from .numfield.field import NumberField, PrimeIdealFactor

_BIG = 1 << 63


def jsonable(x):
    """Recursively convert a report into JSON types; huge integers become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str) or isinstance(x, float):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= _BIG else x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _smat(rows):
    return [[str(int(v)) for v in r] for r in rows]


def field_to_dict(K: NumberField) -> dict:
    r1, r2 = K.signature
    return {
        "defining_poly": [str(c) for c in K.poly.coeffs],
        "degree": K.n,
        "field_disc": str(K.disc),
        "poly_disc": str(K.poly_disc),
        "index": str(K.index),
        "signature": [r1, r2],
        "integral_basis": {"numerators": _smat(K.basis_num), "denominator": str(K.basis_den)},
    }


def prime_to_dict(P: PrimeIdealFactor) -> dict:
    out = {"p": str(P.p), "e": P.e, "f": P.f, "hnf": _smat(P.hnf)}
    if P.two_elt is not None:
        out["two_elt"] = [str(P.two_elt[0]), [str(int(v)) for v in P.two_elt[1]]]
    return out


def classgroup_to_dict(cg: ClassGroup) -> dict:
    return {
        "h": str(cg.h),
        "invariant_factors": [str(d) for d in cg.invariant_factors],
        "certified": cg.certified,
        "minkowski_bound": str(cg.bound),
        "factor_base": [
            {"prime": prime_to_dict(P), "class_vector": [str(c) for c in cg.generator_coords.get(P.key(), ())]}
            for P in cg.factor_base
        ],
        "unit_rank_found": cg.unit_rank_found,
        "notes": list(cg.notes),
    }
