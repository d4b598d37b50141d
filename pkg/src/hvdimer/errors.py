"""Exception hierarchy shared by all modules.

Input-validation problems derive from ``ValueError`` so callers can catch
them generically; the CLI maps the classes onto fixed exit codes.
"""


class HVError(Exception):
    """Base class for all package errors."""


class ValidationError(HVError, ValueError):
    """Malformed or out-of-contract input."""


class DegenerateInput(ValidationError):
    pass


class NonConvex(ValidationError):
    pass


class NotClosed(ValidationError):
    pass


class TooFewDirections(ValidationError):
    pass


class NotATriangle(ValidationError):
    pass


class CoincidentParallels(ValidationError):
    pass


class TriplePoint(ValidationError):
    pass


class IsolatedLine(ValidationError):
    pass


class InvalidDimer(ValidationError):
    pass


class NotAMatching(ValidationError):
    pass


class SingularMatrix(ValidationError):
    pass


class NotAnEdge(ValidationError):
    pass


class NonBinomialEdge(ValidationError):
    pass


class NotAdmissible(HVError):
    """An arrangement that was required to be admissible is not."""


class NoMatching(HVError):
    pass


class Unsaturated(HVError):
    """Sampling budget exhausted before the signature set saturated.

    The partial result is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class VerificationFailure(HVError):
    """A checked claim failed; ``counterexample`` holds the first witness."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
