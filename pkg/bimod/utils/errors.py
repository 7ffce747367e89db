"""
Exception Hierarchy

Every failure the engine can report has its own class here. Each class
also derives from the closest builtin exception, so callers may catch
either the specific class, ``BimodError`` or the builtin.
"""

from typing import Optional


class BimodError(Exception):
    """Base class for all errors raised by the bimod package"""


class DivisionByZeroError(BimodError, ZeroDivisionError):
    """Division by an exact zero scalar"""


class ModeMismatchError(BimodError, ValueError):
    """Operands live in different scalar fields or power modes"""


class IndexOutOfRangeError(BimodError, IndexError):
    """An index argument lies outside its admissible range"""


class NegativeExponentError(BimodError, ValueError):
    """A negative exponent appeared in POLYNOMIAL mode"""


class LaurentUnsupportedError(BimodError, ValueError):
    """The operation is not defined for Laurent elements"""


class WindowEmptyError(BimodError, ValueError):
    """An exponent window contains no monomials"""


class NotCentralError(BimodError, ValueError):
    """A parameter that must be central is not"""


class NotAdmissibleError(BimodError, ValueError):
    """A left connection fails the admissibility clauses"""

    def __init__(self, message: str, failed_clauses: Optional[list] = None):
        super().__init__(message)
        self.failed_clauses = failed_clauses or []


class InverseInvalidError(BimodError, ValueError):
    """A declared inverse does not multiply to the identity"""


class NotBimoduleMapError(BimodError, ValueError):
    """A map of 1-forms fails left or right linearity"""


class NotSymmetricError(BimodError, ValueError):
    """A metric grid that must be symmetric is not"""


class ConfigError(BimodError, ValueError):
    """Invalid configuration value"""


class ParseError(BimodError, ValueError):
    """Malformed textual input, with its location"""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message
