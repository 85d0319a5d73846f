"""Exception hierarchy.

Two families matter to callers: ``InputError`` (malformed data, wrong ring,
unknown names) and ``Rejected`` (the mathematics said no: a divisibility
fails, an iteration budget runs out, a certificate condition is violated).
The CLI maps them to exit codes 2 and 1.
"""


class LNDError(Exception):
    pass


class InputError(LNDError, ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownVariable(ParseError):
    pass


class RingMismatch(InputError):
    pass


class Rejected(LNDError):
    pass


class NotDivisible(Rejected):
    pass


class CapExceeded(Rejected):
    def __init__(self, message, variable=None, cap=None):
        self.variable = variable
        self.cap = cap
        super().__init__(message)


class NotAnAutomorphism(Rejected):
    pass


class NotFoundWithinBounds(Rejected):
    pass


class ConditionFailed(Rejected):
    """A named hypothesis or certificate condition does not hold."""

    def __init__(self, condition, message, witness=None):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition}: {message}")


class NotUnivariate(ConditionFailed):
    def __init__(self, message, witness=None):
        super().__init__("univariate", message, witness)
