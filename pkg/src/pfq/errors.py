"""Exception hierarchy shared by every pfq module."""


class PfqError(Exception):
    """Base class for all library errors."""


class InvalidModulus(PfqError, ValueError):
    pass


class ContextMismatch(PfqError, ValueError):
    pass


class ParseError(PfqError, ValueError):
    """Malformed polynomial text; ``pos`` is the offending character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NotHomogeneous(PfqError, ValueError):
    pass


class ShapeError(PfqError, ValueError):
    pass


class SamplingError(PfqError):
    pass


class DegenerateSlicing(PfqError):
    pass


class Inconclusive(PfqError):
    pass


class NotACurve(PfqError, ValueError):
    pass


class BadPrime(PfqError, ValueError):
    pass
