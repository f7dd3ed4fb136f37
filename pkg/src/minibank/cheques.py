"""Cheque lifecycle and cheque-book requests.

The state machine is deliberately tiny::

    unused -> cleared   (presented with sufficient funds; posts to ledger)
    unused -> stopped   (customer stop instruction)
    unused -> bounced   (presented with insufficient funds; no posting)

cleared, stopped, and bounced are terminal. A cheque's amount is unknown
until presentation (cheques are written offline).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConflictError, NotFoundError

UNUSED = "unused"
CLEARED = "cleared"
STOPPED = "stopped"
BOUNCED = "bounced"

# Explicit transition table; the model-based test checks against this.
LEGAL_TRANSITIONS = {
    (UNUSED, CLEARED),
    (UNUSED, STOPPED),
    (UNUSED, BOUNCED),
}

BOOK_LEAF_CHOICES = (25, 50)

REQUESTED = "requested"
FULFILLED = "fulfilled"


@dataclass
class Cheque:
    number: str
    account: str
    status: str = UNUSED
    amount_minor: int | None = None
    presented_label: str | None = None
    stopped_label: str | None = None


@dataclass
class ChequeBookRequest:
    id: str
    customer: str
    account: str
    leaves: int
    status: str = REQUESTED
    first_number: str | None = None
    last_number: str | None = None


@dataclass
class ChequeRegistry:
    cheques: dict[str, Cheque] = field(default_factory=dict)
    requests: dict[str, ChequeBookRequest] = field(default_factory=dict)

    def get(self, number: str) -> Cheque:
        cheque = self.cheques.get(number)
        if cheque is None:
            raise NotFoundError(f"no such cheque: {number}", code="unknown-cheque")
        return cheque

    def request(self, request_id: str) -> ChequeBookRequest:
        req = self.requests.get(request_id)
        if req is None:
            raise NotFoundError(f"no such cheque-book request: {request_id}",
                                code="unknown-request")
        return req

    def add_cheque(self, cheque: Cheque) -> None:
        self.cheques[cheque.number] = cheque

    def add_request(self, request: ChequeBookRequest) -> None:
        self.requests[request.id] = request

    def transition(self, number: str, new_status: str) -> None:
        cheque = self.cheques[number]
        if (cheque.status, new_status) not in LEGAL_TRANSITIONS:
            raise ConflictError(
                f"illegal cheque transition {cheque.status} -> {new_status}",
                code="terminal-state",
            )
        cheque.status = new_status


def guard_stop(cheque: Cheque) -> None:
    """Raise the status-specific error when a stop is not allowed."""
    if cheque.status == CLEARED:
        raise ConflictError("cheque already cleared", code="already-cleared")
    if cheque.status == STOPPED:
        raise ConflictError("cheque already stopped", code="already-stopped")
    if cheque.status == BOUNCED:
        raise ConflictError("cheque already bounced", code="terminal-state")


def guard_presentable(cheque: Cheque) -> None:
    """Presentation requires an unused cheque; terminal states reject."""
    if cheque.status != UNUSED:
        raise ConflictError(f"cheque is {cheque.status}", code="terminal-state")
