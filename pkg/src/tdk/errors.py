"""Exception taxonomy.

InputError (and subclasses) mark problems with user-supplied data and map to
exit code 2 in the command-line driver; NegativeResult-style outcomes are not
exceptions at all but ordinary return values.
"""


class TdkError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TdkError):
    """Malformed or invalid user input (bad schema, bad model, bad cocycle)."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


class SchemaError(InputError):
    """Document does not conform to a supported JSON schema."""


class ModelError(InputError):
    """A differential graded model violates one of its axioms."""


class DimensionError(TdkError):
    """Matrix/vector shapes are incompatible."""


class NotInSubgroupError(TdkError):
    """Membership test failed during a subquotient reduction."""


class SubgroupContainmentError(TdkError):
    """A required subgroup containment does not hold."""


class NotDualizableError(TdkError):
    """Operation requires a dualizable pair and the input is not."""


class TripleMismatchError(TdkError):
    """Two triples do not live over the same pair of bundles."""


class UnsupportedElementError(TdkError):
    """Group element outside the implemented generator families."""
