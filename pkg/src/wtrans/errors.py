"""Exception types shared by the package.

The split mirrors the three failure surfaces: malformed input (usage),
well-formed input outside the domain of the requested operation (domain
rejection), and numeric breakdown inside an algorithm.
"""


class WTransError(Exception):
    """Base class for package errors."""


class UsageError(WTransError):
    """Malformed input: wrong shapes, invalid vectors, bad arguments."""


class DimensionMismatchError(UsageError):
    """Operands describe different party counts."""


class InvalidParamVectorError(UsageError):
    """Components negative or summing above one."""


class InvalidStateError(UsageError):
    """Amplitude list of wrong length or not normalized."""


class InvalidEnsembleError(UsageError):
    """Outcome probabilities malformed or witness inconsistent with target."""


class DomainError(WTransError):
    """Well-formed input rejected by the operation's domain."""


class NotWTypeError(DomainError):
    """State vector is not reducible to the recognized family."""


class UnreachableTargetError(DomainError):
    """A target demands weight on a party whose source component is zero."""


class InfeasibleError(DomainError):
    """No operator set or protocol exists for the request."""


class MalformedProtocolError(DomainError):
    """Protocol steps violate completeness or label no success leaf."""


class NumericError(WTransError):
    """An algorithm failed to converge or lost precision."""
