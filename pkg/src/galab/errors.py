"""Exception hierarchy shared by every module.

Each class carries the CLI exit code its failures map to.
"""


class GalabError(Exception):
    exit_code = 5


class InputError(GalabError):
    """Malformed input: bad syntax, unknown names, inconsistent presentations."""

    exit_code = 2


class StructuralError(InputError):
    """Operands that do not share an ambient variable list, unknown variables."""


class DomainError(InputError):
    """A mathematically undefined request, e.g. gcd(0, 0)."""


class UnitIdealError(InputError):
    """A presentation or quotient collapsed to the zero ring."""


class NotDivisibleError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class HypothesisError(GalabError):
    """A precondition or hypothesis screen failed (e.g. element not in the kernel)."""

    exit_code = 3

    def __init__(self, message, clause=None, data=None):
        super().__init__(message)
        self.clause = clause
        self.data = data or {}


class ResourceError(GalabError):
    """A configured cap (degree, basis size, iteration count) was exceeded."""

    exit_code = 4


class InvariantError(GalabError):
    """An internal consistency check failed; indicates a bug."""

    exit_code = 5
