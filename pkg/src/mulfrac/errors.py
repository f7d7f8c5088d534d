"""Exception hierarchy shared by every module of the package."""


class MulfracError(Exception):
    """Base class for all errors raised by :mod:`mulfrac`."""


class DomainError(MulfracError, ValueError):
    """Input outside the domain an operator is defined on."""


# grids and sampling


class DegenerateInterval(DomainError):
    pass


class TooFewPoints(DomainError):
    pass


class PositivityViolation(DomainError):
    pass


class NonFiniteValue(DomainError):
    pass


class NotPositive(DomainError):
    pass


class Overflow(MulfracError, OverflowError):
    pass


class GridTooCoarse(DomainError):
    pass


# orders


class NonPositiveOrder(DomainError):
    pass


class OrderOutOfRange(DomainError):
    pass


# reference values


class PoleError(DomainError):
    pass


class WrongSide(DomainError):
    pass


# verification registry


class UnknownProperty(MulfracError, KeyError):
    pass


# expression parsing


class ExprSyntaxError(MulfracError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the input where parsing stopped and
    ``expected`` describes what the parser wanted to see there.
    """

    def __init__(self, offset: int, expected: str, text: str = "") -> None:
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"at offset {offset}: expected {expected}")


class UnknownFunction(MulfracError, ValueError):
    def __init__(self, name: str, offset: int) -> None:
        self.name = name
        self.offset = offset
        super().__init__(f"unknown function {name!r} at offset {offset}")


class EvalDomainError(DomainError):
    """Raised when evaluation leaves the real domain (``kind`` names the node)."""

    def __init__(self, kind: str, message: str) -> None:
        self.kind = kind
        super().__init__(f"{kind}: {message}")
