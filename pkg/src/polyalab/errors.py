"""Exception hierarchy shared by every module."""


class PolyaLabError(Exception):
    """Base class for all library errors."""


class DegreeTooSmall(PolyaLabError):
    pass


class LeadingCoefficientVanishes(PolyaLabError):
    pass


class ZeroRadicand(PolyaLabError):
    pass


class InvalidDefiningPolynomial(PolyaLabError):
    pass


class FieldMismatch(PolyaLabError):
    pass


class NotSmooth(PolyaLabError):
    """An ideal does not factor over the available prime ideals."""


class RelationSearchIncomplete(PolyaLabError):
    """The relation search ran out of effort before the lattice was complete.

    The partially computed class group is attached as ``partial``.
    """

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class NotSquarefree(PolyaLabError):
    pass


class InternalInconsistency(PolyaLabError):
    pass


class RequiresCertifiedClassGroup(PolyaLabError):
    pass


class BadEmbedding(PolyaLabError):
    pass


class ContradictsProposition(PolyaLabError):
    """A ramified prime decomposes in a way no dihedral field allows."""


class NotDihedral(PolyaLabError):
    pass


class PreconditionFailed(PolyaLabError):
    pass
