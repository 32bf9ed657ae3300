"""Exception types shared across the package."""


class TwistcrossError(Exception):
    """Base class for all package errors."""


class InputError(TwistcrossError):
    """Malformed or inconsistent user input (wrong degree, bad JSON, ...)."""


class CapExceededError(TwistcrossError):
    """Bounded enumeration ran past its cap.

    Carries the partial result so callers can report how far the search got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotClosedError(TwistcrossError):
    """A subset claimed to be product/star closed is not; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StructureError(TwistcrossError):
    """A construction left the class of objects we can represent.

    Raised e.g. when the domain of a composed partial automorphism is not
    spanned by basis vectors, or an ideal has no identity.
    """


class VerificationRefusal(TwistcrossError):
    """An operation refused to run because a precondition report failed."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
