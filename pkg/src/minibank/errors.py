"""Domain error hierarchy with stable machine-readable codes.

Every service failure raises a :class:`BankError` subclass carrying a
``code`` string. The HTTP gateway maps codes onto the single error
envelope; the admin CLI prints them to stderr. Codes are part of the
public contract and never change between releases.
"""

from __future__ import annotations


class BankError(Exception):
    """Base class for all domain failures.

    Args:
        code: stable machine-readable error code (kebab-case).
        message: human-readable description.
    """

    code = "internal-error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.message = message


class ValidationError(BankError):
    """Input failed a field-validation rule; ``code`` names the rule."""


class AuthError(BankError):
    """Authentication or session failure."""


class NotOwnerError(BankError):
    """Caller does not own the referenced resource."""

    code = "not-owner"


class NotFoundError(BankError):
    """Referenced resource does not exist."""


class ConflictError(BankError):
    """Operation conflicts with current state (already processed, duplicates)."""


class InsufficientFundsError(BankError):
    """Debited account lacks the funds to cover the operation."""

    code = "insufficient-funds"


class JournalError(BankError):
    """Persistence failure (checksum mismatch, sequence gap, I/O)."""


# HTTP status per error code. Anything not listed is a 400.
# Buckets per the gateway contract: validation 400, auth 401, ownership 403,
# missing 404, conflict 409, insufficient funds 422.
_AUTH_CODES = {"invalid-credentials", "account-locked", "session-invalid", "session-expired"}
_NOT_FOUND_CODES = {
    "unknown-account",
    "unknown-owner",
    "unknown-customer",
    "unknown-corporation",
    "unknown-pending",
    "unknown-transfer",
    "unknown-cheque",
    "unknown-card",
    "unknown-token",
    "unknown-request",
    "unknown-route",
}
_CONFLICT_CODES = {
    "already-processed",
    "action-expired",
    "already-registered",
    "not-registered",
    "already-cancelled",
    "already-cleared",
    "already-stopped",
    "terminal-state",
    "duplicate-kind-for-owner",
    "account-closed",
    "dir-not-empty",
}


def http_status_for(code: str) -> int:
    """Return the HTTP status the gateway uses for a domain error code."""
    if code in _AUTH_CODES:
        return 401
    if code == "not-owner":
        return 403
    if code in _NOT_FOUND_CODES:
        return 404
    if code == "wrong-method":
        return 405
    if code in _CONFLICT_CODES:
        return 409
    if code == "insufficient-funds":
        return 422
    return 400
