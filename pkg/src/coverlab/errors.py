"""Exception hierarchy. The CLI maps these onto exit codes."""


class CoverlabError(Exception):
    exit_code = 1


class InvalidInputError(CoverlabError, ValueError):
    exit_code = 3


class InvalidParameterError(InvalidInputError):
    pass


class SquarefreeViolationError(InvalidInputError):
    pass


class SpaceTooSmallError(InvalidInputError):
    pass


class TriviallyCoveringError(InvalidInputError):
    """A hyperplane with no fixed coordinate (or a progression mod 1) covers everything."""


class HypothesisViolationError(InvalidInputError):
    pass


class UnsupportedEpsilonError(InvalidParameterError):
    pass


class NotMeasurableError(InvalidInputError):
    pass


class UnknownNameError(InvalidInputError, KeyError):
    pass


class TooLargeError(CoverlabError):
    exit_code = 4
