"""
Error types shared by the library and the CLI.

Every error carries a human readable ``detail`` and the ``status_code`` the
CLI exits with when the error escapes a command (2 = usage or data error).
"""
from typing import Optional


class GateError(Exception):
    status_code = 2

    def __init__(self, detail: str, status_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if status_code is not None:
            self.status_code = status_code

    def __str__(self) -> str:
        return self.detail


class RecordError(GateError, ValueError):
    """Rejected input record; ``row`` is the 0-based record index when known."""

    def __init__(self, detail: str, row: Optional[int] = None):
        if row is not None:
            detail = f"row {row}: {detail}"
        super().__init__(detail)
        self.row = row


class FormatError(GateError, ValueError):
    """Malformed file; ``line`` is the 1-based line number when known."""

    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class CellLookupError(GateError, KeyError):
    pass


class PreconditionError(GateError, ValueError):
    pass


class InsufficientDataError(GateError, ValueError):
    pass


class DomainError(GateError, ValueError):
    pass


class MissingEnergyError(GateError, KeyError):
    pass


class GeneratorRangeError(GateError, ValueError):
    pass


class NotBijectiveError(GateError, ValueError):
    pass


class UniformFamilySignal(GateError):
    """No significantly strict pair: E is constant and κ is undetermined."""


class InapplicableError(GateError):
    pass


class UnsupportedFamilyError(GateError, ValueError):
    pass
