"""Customer profiles, credential digests, and the volatile session table.

Passwords are never stored or journaled in clear: the command layer
digests them (salted, iterated PBKDF2 by default) and only the digest
string travels into events and snapshots.

Sessions are deliberately *not* durable. A session dies with the process;
``authenticate`` refreshes idle time in memory only, which keeps reads
read-only with respect to the journal.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass, field

from .clock import Clock
from .errors import AuthError, ConflictError, NotFoundError, NotOwnerError

CARD_ACTIVE = "active"
CARD_CANCELLED = "cancelled"

SESSION_ACTIVE = "active"
SESSION_EXPIRED = "expired"
SESSION_LOGGED_OUT = "logged-out"


def make_digest(password: str, algorithm: str, iterations: int,
                salt_hex: str | None = None) -> str:
    """Digest a password as ``<algorithm>$<iterations>$<salt>$<digest>``."""
    if algorithm != "pbkdf2-sha256":
        raise ValueError(f"unsupported digest algorithm: {algorithm}")
    salt_hex = salt_hex or secrets.token_hex(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"),
                                 bytes.fromhex(salt_hex), iterations)
    return f"{algorithm}${iterations}${salt_hex}${digest.hex()}"


def verify_digest(password: str, stored: str) -> bool:
    algorithm, iterations, salt_hex, _ = stored.split("$")
    candidate = make_digest(password, algorithm, int(iterations), salt_hex)
    return hmac.compare_digest(candidate, stored)


@dataclass
class CustomerProfile:
    id: str
    username: str
    credential_digest: str
    email: str
    full_name: str
    phone: str
    address: str
    atm_cards: dict[str, str] = field(default_factory=dict)  # card id -> status
    locked: bool = False


@dataclass
class CustomerDirectory:
    customers: dict[str, CustomerProfile] = field(default_factory=dict)
    _by_username: dict[str, str] = field(default_factory=dict)

    def get(self, customer_id: str) -> CustomerProfile:
        profile = self.customers.get(customer_id)
        if profile is None:
            raise NotFoundError(f"no such customer: {customer_id}", code="unknown-customer")
        return profile

    def by_username(self, username: str) -> CustomerProfile | None:
        customer_id = self._by_username.get(username.lower())
        return self.customers.get(customer_id) if customer_id else None

    def add(self, profile: CustomerProfile) -> None:
        key = profile.username.lower()
        if key in self._by_username:
            raise ConflictError(f"username taken: {profile.username}", code="username-taken")
        self.customers[profile.id] = profile
        self._by_username[key] = profile.id

    def card_owner(self, card_id: str) -> CustomerProfile:
        for profile in self.customers.values():
            if card_id in profile.atm_cards:
                return profile
        raise NotFoundError(f"no such card: {card_id}", code="unknown-card")

    def require_card(self, customer_id: str, card_id: str) -> str:
        """Return the card's status after ownership checks."""
        owner = self.card_owner(card_id)
        if owner.id != customer_id:
            raise NotOwnerError("card belongs to another customer")
        return owner.atm_cards[card_id]


@dataclass
class Session:
    token: str
    customer: str
    created_at: float
    last_seen: float
    state: str = SESSION_ACTIVE


class SessionTable:
    """In-memory bearer-token table with idle expiry."""

    def __init__(self, clock: Clock, idle_ttl_secs: float):
        self._clock = clock
        self._ttl = idle_ttl_secs
        self._sessions: dict[str, Session] = {}

    def create(self, customer_id: str) -> Session:
        token = secrets.token_hex(32)
        now = self._clock.now()
        session = Session(token=token, customer=customer_id, created_at=now, last_seen=now)
        self._sessions[token] = session
        return session

    def authenticate(self, token: str) -> str:
        """Resolve a token to a customer id, refreshing idle time.

        Raises:
            AuthError: session-invalid for unknown/logged-out tokens,
                session-expired past the idle window.
        """
        session = self._sessions.get(token or "")
        if session is None or session.state == SESSION_LOGGED_OUT:
            raise AuthError("no active session for token", code="session-invalid")
        now = self._clock.now()
        if session.state == SESSION_EXPIRED or now - session.last_seen > self._ttl:
            session.state = SESSION_EXPIRED
            raise AuthError("session idle past expiry window", code="session-expired")
        session.last_seen = now
        return session.customer

    def logout(self, token: str) -> None:
        """Mark a session logged out; idempotent for any known token."""
        session = self._sessions.get(token or "")
        if session is None:
            raise NotFoundError("no such session token", code="unknown-token")
        session.state = SESSION_LOGGED_OUT

    def revoke_others(self, customer_id: str, keep_token: str | None) -> int:
        """Log out every active session of a customer except ``keep_token``."""
        revoked = 0
        for session in self._sessions.values():
            if (session.customer == customer_id and session.token != keep_token
                    and session.state == SESSION_ACTIVE):
                session.state = SESSION_LOGGED_OUT
                revoked += 1
        return revoked

    def state_of(self, token: str) -> str | None:
        session = self._sessions.get(token)
        return session.state if session else None
