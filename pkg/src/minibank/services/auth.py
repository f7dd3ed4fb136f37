"""Authentication, sessions, and the utility menu operations.

Login failures are deliberately indistinguishable between unknown
username and wrong password (one invalid-credentials code, one invalid
user page). After ``lockout_threshold`` consecutive failures the account
locks durably until an admin unlocks it; the failure counter itself is
volatile.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..customers import CARD_CANCELLED, Session, make_digest, verify_digest
from ..errors import AuthError, ConflictError, ValidationError
from ..model import validate_email, validate_password

if TYPE_CHECKING:
    from ..bank import Bank


class AuthService:
    def __init__(self, bank: "Bank"):
        self.bank = bank
        self._fail_counts: dict[str, int] = {}

    def login(self, username: str, password: str) -> Session:
        """Verify credentials and mint a fresh session token.

        Raises:
            AuthError: invalid-credentials on any mismatch; account-locked
                once the consecutive-failure threshold has tripped.
        """
        bank = self.bank
        with bank.lock.write():
            profile = bank.directory.by_username(username)
            if profile is None:
                raise AuthError("username or password incorrect", code="invalid-credentials")
            if profile.locked:
                raise AuthError("account locked; contact the bank", code="account-locked")
            if verify_digest(password, profile.credential_digest):
                self._fail_counts.pop(profile.id, None)
                return bank.sessions.create(profile.id)
            failures = self._fail_counts.get(profile.id, 0) + 1
            self._fail_counts[profile.id] = failures
            if failures >= bank.config.lockout_threshold:
                bank.commit("customer-locked", {"customer_id": profile.id})
            raise AuthError("username or password incorrect", code="invalid-credentials")

    def logout(self, token: str) -> None:
        with self.bank.lock.write():
            self.bank.sessions.logout(token)

    def authenticate(self, token: str) -> str:
        """Token -> customer id; refreshes the idle window. Read-side."""
        with self.bank.lock.read():
            return self.bank.sessions.authenticate(token)

    def reset_failures(self, customer_id: str) -> None:
        self._fail_counts.pop(customer_id, None)

    def change_password(self, customer_id: str, old: str, new: str, confirm: str,
                        keep_token: str | None = None) -> None:
        """Replace the credential digest and revoke the customer's other sessions."""
        bank = self.bank
        with bank.lock.write():
            profile = bank.directory.get(customer_id)
            if not verify_digest(old, profile.credential_digest):
                raise AuthError("old password incorrect", code="old-password-incorrect")
            if new != confirm:
                raise ConflictError("new password and confirmation differ",
                                    code="confirmation-mismatch")
            try:
                validate_password(new)
            except ValidationError as exc:
                raise ValidationError(f"password policy: {exc.message}",
                                      code="policy-violation") from None
            digest = make_digest(new, bank.config.digest_algorithm,
                                 bank.config.digest_iterations)
            bank.commit("password-changed", {"customer_id": customer_id, "digest": digest})
            bank.sessions.revoke_others(customer_id, keep_token)

    def update_profile(self, customer_id: str, email: str, phone: str, address: str):
        """Replace contact fields atomically; validation failure changes nothing."""
        bank = self.bank
        with bank.lock.write():
            profile = bank.directory.get(customer_id)
            normalized = validate_email(email)
            bank.commit("profile-updated", {
                "customer_id": customer_id,
                "email": normalized,
                "phone": phone,
                "address": address,
            })
            return profile

    def cancel_atm_card(self, customer_id: str, card_id: str) -> None:
        """Cancel a card, irreversibly."""
        bank = self.bank
        with bank.lock.write():
            status = bank.directory.require_card(customer_id, card_id)
            if status == CARD_CANCELLED:
                raise ConflictError("card already cancelled", code="already-cancelled")
            bank.commit("card-cancelled", {"customer_id": customer_id, "card_id": card_id})

    def profile_view(self, customer_id: str):
        with self.bank.lock.read():
            return self.bank.directory.get(customer_id)
