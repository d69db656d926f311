"""Exception types shared across the package."""


class FinboolError(Exception):
    """Base class for all finbool errors."""


class AmbientMismatchError(FinboolError):
    """An element or subalgebra was used with the wrong ambient algebra."""


class ArityMismatchError(FinboolError):
    """Argument count does not match a polynomial's arity."""


class InvalidIndexError(FinboolError):
    """A variable, atom, or step index is out of range."""


class OrderError(FinboolError):
    """An order precondition (x <= y, p < q) does not hold."""


class NotAChainError(FinboolError):
    """The given elements do not form a chain in the order given."""


class MatchingError(FinboolError):
    """A block matching is not a structure-preserving bijection."""


class PreconditionError(FinboolError):
    """A stated operation precondition was violated."""


class SizeLimitError(FinboolError):
    """An atom-count or enumeration bound was exceeded."""


class TermSyntaxError(FinboolError):
    """A term string does not parse."""


class SpecFormatError(FinboolError):
    """A workspace spec file is missing or malformed.

    `path` points at the offending entry, e.g. "elements.a.atoms[2]".
    """

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
