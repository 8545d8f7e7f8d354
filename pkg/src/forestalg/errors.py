"""Exception types shared across the package."""


class ForestAlgError(Exception):
    """Base class for all package errors."""


class StructuralError(ForestAlgError):
    """Malformed input data: ragged tables, indices out of range, bad names.

    Distinct from axiom violations, which are reported by check_axioms()
    rather than raised.
    """


class ParseError(ForestAlgError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class RoleError(ForestAlgError):
    """A formula was used in a role (tree/forest) its syntax does not allow."""


class UnknownLetterError(ForestAlgError):
    pass


class AlphabetMismatchError(ForestAlgError):
    pass


class SizeLimitError(ForestAlgError):
    """A configured size cap was exceeded."""

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__("size limit exceeded: %s (cap %d)" % (what, limit))


class IdealViolation(ForestAlgError):
    """The given subset is not a reachability ideal."""

    def __init__(self, h, v, image):
        self.h = h
        self.v = v
        self.image = image
        super().__init__(
            "not an ideal: element %r is in the set but %r maps it to %r outside"
            % (h, v, image)
        )


class NotEFAlgebra(ForestAlgError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__("target does not satisfy the EF identities: %s" % (witness,))


class NotKDefinite(ForestAlgError):
    def __init__(self, degree, bound):
        self.degree = degree
        self.bound = bound
        super().__init__(
            "homomorphism is not %s-definite (actual degree: %s)"
            % (bound, "none" if degree is None else degree)
        )


class NotNonconfusing(ForestAlgError):
    def __init__(self, report):
        self.report = report
        super().__init__("homomorphism is confusing; no decomposition exists")


class InternalError(ForestAlgError):
    """A verified invariant failed; indicates a bug, never user error."""
