"""Exception types raised by the library."""

from __future__ import annotations


class RenetError(Exception):
    """Base class for domain errors raised by this package."""


class AntisymmetryViolation(RenetError):
    """A constructed order relation failed the antisymmetry check."""


class InvalidCube(RenetError):
    """A commutative-cube check was handed a cube missing its preconditions."""


class UnknownTransition(RenetError):
    """A transition identifier is not part of the net."""


class NotEnabled(RenetError):
    """A firing request failed; names the first failing sub-condition."""

    def __init__(self, transition, condition):
        self.transition = transition
        self.condition = condition
        super().__init__(f"transition {transition!r} is not enabled: {condition} condition failed")


class NotEnabledParallel(RenetError):
    """A parallel firing request failed; names transition and sub-condition."""

    def __init__(self, transition, condition):
        self.transition = transition
        self.condition = condition
        super().__init__(
            f"transition vector is not enabled: {condition} condition failed"
            + (f" at transition {transition!r}" if transition is not None else "")
        )


class InvalidMorphism(RenetError):
    """A morphism-level operation was handed an invalid net morphism."""


class GluingViolated(RenetError):
    """Rule application was attempted at a match that fails the gluing condition."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"gluing condition violated: {report.describe()}")


class ComplementNotPushout(RenetError):
    """Post-construction verification of a transformation square failed."""


class DocumentError(RenetError):
    """Base class for document load/save failures."""


class ParseError(DocumentError):
    """The document text is not well-formed."""


class ResolutionError(DocumentError):
    """The document references an identifier that does not resolve."""


class ValidationError(DocumentError):
    """The document parses but violates a structural invariant."""


class BoundTooSmall(UserWarning):
    """An enumeration oracle was truncated below its requested bound."""
