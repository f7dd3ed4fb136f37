"""Shared value types and field-validation rules.

Money is exact integer arithmetic in currency minor units (cents); no
floats, no rounding after parse time. Email and password rules follow the
common field requirements every form in the system shares.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ValidationError

DEFAULT_CURRENCY = "USD"

PASSWORD_MIN_LEN = 6
PASSWORD_MAX_LEN = 20

# Amount entry: up to 13 integer digits, optional 2 fraction digits.
MAX_INTEGER_DIGITS = 13
_AMOUNT_RE = re.compile(r"^[+-]?(\d+)(?:\.(\d+))?$")


@dataclass(frozen=True, order=True)
class Money:
    """An exact amount in currency minor units.

    ``minor_units`` is never negative in a balance; transaction entries use
    strictly positive amounts. Arithmetic stays in integers end to end.
    """

    minor_units: int
    currency: str = DEFAULT_CURRENCY

    def __post_init__(self):
        if self.minor_units < 0:
            raise ValueError("Money cannot hold a negative amount")

    def __add__(self, other: "Money") -> "Money":
        self._check_currency(other)
        return Money(self.minor_units + other.minor_units, self.currency)

    def __sub__(self, other: "Money") -> "Money":
        self._check_currency(other)
        return Money(self.minor_units - other.minor_units, self.currency)

    def _check_currency(self, other: "Money") -> None:
        if self.currency != other.currency:
            raise ValueError(f"currency mismatch: {self.currency} vs {other.currency}")

    def __str__(self) -> str:
        return format_amount(self)


def format_amount(money: Money) -> str:
    """Render minor units as a plain decimal string, e.g. 10050 -> "100.50"."""
    units, cents = divmod(money.minor_units, 100)
    return f"{units}.{cents:02d}"


def format_signed_minor(minor_units: int) -> str:
    """Render a signed minor-unit amount as a decimal string ("-25.00")."""
    sign = "-" if minor_units < 0 else ""
    units, cents = divmod(abs(minor_units), 100)
    return f"{sign}{units}.{cents:02d}"


def parse_amount(candidate: str, currency: str = DEFAULT_CURRENCY) -> Money:
    """Parse a user-entered decimal amount into exact minor units.

    Accepts at most 2 fraction digits and at most 13 integer digits; the
    value must be strictly positive (payments must move money).

    Raises:
        ValidationError: codes not-a-number, non-positive,
            too-many-fraction-digits, overflow.
    """
    if not isinstance(candidate, str):
        raise ValidationError("amount must be text", code="not-a-number")
    match = _AMOUNT_RE.match(candidate.strip())
    if not match:
        raise ValidationError(f"not a decimal amount: {candidate!r}", code="not-a-number")
    int_part, frac_part = match.group(1), match.group(2) or ""
    if len(frac_part) > 2:
        raise ValidationError(
            "amounts carry at most 2 fraction digits", code="too-many-fraction-digits"
        )
    minor = int(int_part) * 100 + int(frac_part.ljust(2, "0"))
    if candidate.lstrip().startswith("-") or minor == 0:
        raise ValidationError("amount must be greater than zero", code="non-positive")
    if len(int_part.lstrip("0") or "0") > MAX_INTEGER_DIGITS:
        raise ValidationError("amount exceeds 13 integer digits", code="overflow")
    return Money(minor, currency)


def validate_email(candidate: str) -> str:
    """Validate and normalize an email address.

    The rule set: no whitespace, exactly one '@', nonempty local and domain
    parts, and at least one '.' somewhere after the '@'. Returns the
    lowercased address.

    Raises:
        ValidationError: codes whitespace-present, missing-at-sign,
            multiple-at-signs, empty-part, missing-dot-after-at.
    """
    if any(ch.isspace() for ch in candidate):
        raise ValidationError("email must not contain whitespace", code="whitespace-present")
    at_count = candidate.count("@")
    if at_count == 0:
        raise ValidationError("email must contain an '@'", code="missing-at-sign")
    if at_count > 1:
        raise ValidationError("email must contain exactly one '@'", code="multiple-at-signs")
    local, domain = candidate.split("@")
    if not local or not domain:
        raise ValidationError("email local and domain parts must be nonempty", code="empty-part")
    if "." not in domain:
        raise ValidationError("email needs a '.' after the '@'", code="missing-dot-after-at")
    return candidate.lower()


def validate_password(candidate: str) -> str:
    """Validate a password against the 6-20 character policy.

    Characters may be letters, digits, or non-alphanumeric symbols;
    whitespace and control characters are rejected. Returns the password
    unchanged (it is transient and never persisted in clear).

    Raises:
        ValidationError: codes too-short, too-long, disallowed-character.
    """
    if len(candidate) < PASSWORD_MIN_LEN:
        raise ValidationError(
            f"password must be at least {PASSWORD_MIN_LEN} characters", code="too-short"
        )
    if len(candidate) > PASSWORD_MAX_LEN:
        raise ValidationError(
            f"password must be at most {PASSWORD_MAX_LEN} characters", code="too-long"
        )
    for ch in candidate:
        # printable non-space ASCII: letters, digits, symbols
        if not (0x21 <= ord(ch) <= 0x7E):
            raise ValidationError(
                "password characters must be letters, digits, or symbols",
                code="disallowed-character",
            )
    return candidate


# --- identifier formats ----------------------------------------------------
# Deterministic, sortable fixtures: zero-padded sequence numbers behind a
# short prefix. Account ids are 10-digit numeric text, cheque numbers
# 6-digit numeric text.

_ID_FORMATS = {
    "account": ("", 10),
    "cheque": ("", 6),
    "transaction": ("TX", 6),
    "customer": ("C", 6),
    "corporation": ("CORP", 4),
    "card": ("CARD", 4),
    "pending": ("PA", 6),
    "transfer": ("TR", 6),
    "payment": ("BP", 6),
    "book_request": ("CBR", 4),
}


def format_id(namespace: str, number: int) -> str:
    """Format sequence number ``number`` as an id in ``namespace``."""
    prefix, width = _ID_FORMATS[namespace]
    return f"{prefix}{number:0{width}d}"


def id_number(namespace: str, identifier: str) -> int:
    """Inverse of :func:`format_id`; returns the sequence number."""
    prefix, _ = _ID_FORMATS[namespace]
    return int(identifier[len(prefix):])
