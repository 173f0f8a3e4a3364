"""Exception types shared across the library."""

from __future__ import annotations


class AasLabError(Exception):
    """Base class for all library errors."""


class InvalidSpec(AasLabError):
    """A group description has parameters outside their valid ranges."""


class ParseError(AasLabError):
    """Malformed group-spec or signature text."""

    def __init__(self, message: str, text: str = "", position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position} in {text!r})"
        super().__init__(message)
        self.text = text
        self.position = position


class OrderCapExceeded(AasLabError):
    """The group denoted by a spec is larger than the configured cap."""


class LatticeCapExceeded(AasLabError):
    """Subgroup-lattice enumeration was requested above its size cap."""


class LatticeUnavailable(AasLabError):
    """An operation needing the subgroup lattice was run without one."""


class OrderNotInGroup(AasLabError):
    """A requested order is not the order of any group element."""


class ShapeMismatch(AasLabError):
    """A vector's shape does not match the signature it is checked against."""


class NoOddProduct(AasLabError):
    """No odd-length identity product was found within the length cap."""


class NotAas(AasLabError):
    """The group has infinitely many non-signatures, so the requested
    finite enumeration does not exist."""


class PreconditionNotMet(AasLabError):
    """A constructive routine was called outside its guaranteed domain."""


class BudgetExhausted(AasLabError):
    """A bounded search ran out of budget before reaching a verdict.

    ``nodes`` / ``seconds`` record how much was spent; ``partial`` may carry
    non-authoritative partial results.
    """

    def __init__(self, message: str, *, nodes: int | None = None,
                 seconds: float | None = None, partial=None):
        super().__init__(message)
        self.nodes = nodes
        self.seconds = seconds
        self.partial = partial
