from decimal import Decimal, InvalidOperation
from typing import Iterable, Tuple, Union

import numpy as np

from .errors import DomainError, RecordError

Temperature = Union[str, float, int]


def temperature_token(value: Temperature) -> str:
    """Return the string token a temperature is matched by.

    Strings are kept exactly as given (decimal-string equality); numbers are
    tokenised with ``repr(float(value))``.
    """
    if isinstance(value, str):
        token = value.strip()
        try:
            Decimal(token)
        except InvalidOperation:
            raise RecordError(f"temperature '{value}' is not a decimal number")
        return token
    return repr(float(value))


def temperature_value(token: str) -> float:
    t = float(token)
    if not np.isfinite(t) or t <= 0:
        raise DomainError(f"temperature must be a positive finite number, got '{token}'")
    return t


def menu_key(members: Iterable[str]) -> Tuple[str, ...]:
    """Canonical key for a set of state ids."""
    return tuple(sorted(set(members)))


def format_float(value) -> str:
    if value is None:
        return "—"
    try:
        value = float(value)
    except (TypeError, ValueError):
        return str(value)
    if not np.isfinite(value):
        return str(value)
    return f"{value:.6g}"
