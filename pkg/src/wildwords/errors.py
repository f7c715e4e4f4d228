"""Exception types shared across the package."""

from __future__ import annotations


class WildWordsError(Exception):
    """Base class for all package errors."""


class NotRestricted(WildWordsError):
    """A letter occurs infinitely often; the operation requires restricted words.

    ``witness`` names one offending letter.
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"word is not restricted: {witness} occurs infinitely often")


class InvalidLocator(WildWordsError):
    """A subword locator is out of range, unresolvable or disconnected."""


class ArchNotInSystem(WildWordsError):
    """An arch passed to a query does not belong to the arch system."""


class InvalidSystem(WildWordsError):
    """An arch system violates one of its defining rules."""


class LimitExceeded(WildWordsError):
    """An enumeration limit (word length, system count) was exceeded."""


class UnificationInconclusive(WildWordsError):
    """Boundary comparison between symbolic atoms could only be certified up to
    a finite index bound.  Callers usually convert this into an Unknown verdict.
    """

    def __init__(self, bound, message="template unification inconclusive"):
        self.bound = bound
        super().__init__(f"{message} (certified up to index {bound})")


class SpecMismatch(WildWordsError):
    """Numerator and denominator of a band-system description disagree."""


class BadPairing(WildWordsError):
    """A cancellation pattern pairs factors that are not mutually inverse, or
    does not replay to the empty word."""


class ClassNotFound(WildWordsError):
    """The parallelity class to remove is not present in the system."""


class PipelineStuck(WildWordsError):
    """A certificate-extraction step produced an invalid intermediate state.

    This is never expected on valid inputs and indicates a bug.
    """


class NotMonotone(WildWordsError):
    """A function description is not strictly increasing."""


class AtomsNotCommutators(WildWordsError):
    """The operation requires limit-word atoms of commutator shape."""


class ParseError(WildWordsError):
    """Word-DSL syntax error with source location."""

    def __init__(self, line, column, expected, found=None):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        what = f"expected {expected}"
        if found:
            what += f", found {found!r}"
        super().__init__(f"{line}:{column}: {what}")
