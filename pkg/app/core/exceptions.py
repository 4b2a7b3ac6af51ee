"""Custom exception classes.

Every engine error carries the process exit code the CLI reports for it:
2 for bad input, 3 for exceeded caps, 1 for failed invariants.
"""

from typing import Any, Optional


class EngineError(Exception):
    """Base exception for engine errors."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(EngineError):
    """Malformed or out-of-range input."""

    exit_code = 2


class ParseError(InputError):
    """Input text could not be parsed."""

    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class IndexOutOfRange(InputError):
    """Table entry outside [0, size)."""

    def __init__(self, value: int, size: int, where: str = ""):
        self.value = value
        self.size = size
        message = f"index {value} out of range [0, {size})"
        if where:
            message += f" at {where}"
        super().__init__(message)


class NonAssociative(InputError):
    """Multiplication table violates associativity."""

    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"(ab)c != a(bc) for a={a}, b={b}, c={c}")


class CapExceeded(EngineError):
    """A configured size cap was exceeded."""

    exit_code = 3

    def __init__(self, what: str, value: int, cap: int):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} = {value} exceeds cap {cap}")


class SearchSpaceTooLarge(CapExceeded):
    """Cone enumeration explored more partial assignments than allowed."""

    def __init__(self, bound: int):
        super().__init__("cone search candidates", bound + 1, bound)
        self.bound = bound


class InvariantError(EngineError):
    """A mathematical precondition or invariant does not hold."""

    exit_code = 1


class NotRegular(InvariantError):
    """Element without a weak inverse."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no inverse; semigroup is not regular")


class NotLeftReductive(InvariantError):
    """Two elements with the same right translation."""

    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"elements {a} and {b} induce the same right translation")


class NoFactorization(InvariantError):
    """Morphism admits no normal factorization."""

    def __init__(self, morphism: int):
        self.morphism = morphism
        super().__init__(f"morphism {morphism} has no normal factorization")


class NotDownClosed(InvariantError):
    """Down-set misses a class below one of its members."""

    def __init__(self, member: int, below: int):
        self.pair = (member, below)
        super().__init__(f"R-class {below} lies below {member} but is not in the down-set")


class ObjectNotConnected(InvariantError):
    """Object is the vertex of no idempotent cone in the down-set."""

    def __init__(self, obj: int):
        self.obj = obj
        super().__init__(f"object {obj} is not connected by any class of the down-set")


class NotInConnectionSemigroup(InvariantError):
    """Cone whose R-class lies outside the down-set."""

    def __init__(self, cone: int):
        self.cone = cone
        super().__init__(f"cone {cone} is not in the connection semigroup")


class NotSupported(InvariantError):
    """Object connected by more than one class."""

    def __init__(self, obj: int):
        self.obj = obj
        super().__init__(f"object {obj} is connected by more than one class")


class IsoFailure(InvariantError):
    """An expected isomorphism could not be built or verified."""

    def __init__(self, reason: str, witness: Optional[Any] = None):
        self.reason = reason
        self.witness = witness
        message = reason
        if witness is not None:
            message += f" (witness: {witness})"
        super().__init__(message)


class NotHomomorphism(InvariantError):
    """Map that does not preserve products."""

    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"map does not preserve the product of {a} and {b}")


class CCConditionViolated(InvariantError):
    """Functor/order-map pair breaking the connection condition."""

    def __init__(self, reason: str, witness: Optional[Any] = None):
        self.reason = reason
        self.witness = witness
        message = reason
        if witness is not None:
            message += f" (witness: {witness})"
        super().__init__(message)


class UnknownCatalogEntry(InputError):
    """Name that matches no catalog construction."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown catalog entry: {name}")
