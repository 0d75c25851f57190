"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``kind`` used by the CLI to emit
``error:<kind>:`` prefixes.
"""


class GprojError(Exception):
    kind = "error"


class CyclicQuiverError(GprojError):
    kind = "cyclic_quiver"


class NotASinkError(GprojError):
    kind = "not_a_sink"


class NotASourceError(GprojError):
    kind = "not_a_source"


class NotSeparatedMonicError(GprojError):
    kind = "not_separated_monic"


class ZeroRepresentationError(GprojError):
    kind = "zero_representation"


class UnsupportedQuiverError(GprojError):
    kind = "unsupported_quiver"


class EnumerationCapError(GprojError):
    """Raised when an enumeration sector exceeds the exhaustive-search cap."""

    kind = "enumeration_cap"


class ParseError(GprojError):
    kind = "parse"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GprojError):
    kind = "validation"
