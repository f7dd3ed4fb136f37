"""Pending actions: server-side prepared mutations awaiting confirmation.

Every money- or registration-moving flow is two-phase: a prepare call
creates a PendingAction echoing the details for the confirmation screen,
and a separate confirm call executes it exactly once. Expiry is lazy:
the first touch past the deadline flips the action to ``expired`` (an
event of its own, so replay agrees) and the touch fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConflictError, NotFoundError, NotOwnerError

KIND_TRANSFER = "transfer"
KIND_REGISTERED_PAYMENT = "registered-payment"
KIND_OPEN_PAYMENT = "open-payment"
KIND_BILLER_REGISTRATION = "biller-registration"
KIND_BILLER_DEREGISTRATION = "biller-deregistration"

PENDING_KINDS = (
    KIND_TRANSFER,
    KIND_REGISTERED_PAYMENT,
    KIND_OPEN_PAYMENT,
    KIND_BILLER_REGISTRATION,
    KIND_BILLER_DEREGISTRATION,
)

STATE_PENDING = "pending"
STATE_CONFIRMED = "confirmed"
STATE_CANCELLED = "cancelled"
STATE_EXPIRED = "expired"


@dataclass
class PendingAction:
    id: str
    customer: str
    kind: str
    payload: dict
    created_at: float
    expires_at: float
    state: str = STATE_PENDING
    result_id: str | None = None  # id of the record a confirm produced


@dataclass
class PendingStore:
    actions: dict[str, PendingAction] = field(default_factory=dict)

    def get(self, pending_id: str) -> PendingAction:
        action = self.actions.get(pending_id)
        if action is None:
            raise NotFoundError(f"no such pending action: {pending_id}",
                                code="unknown-pending")
        return action

    def require_owned(self, customer_id: str, pending_id: str) -> PendingAction:
        action = self.get(pending_id)
        if action.customer != customer_id:
            raise NotOwnerError("pending action belongs to another customer")
        return action

    def check_consumable(self, action: PendingAction, now: float) -> bool:
        """Gate a confirm/cancel touch.

        Returns True when the action is live but past its deadline; the
        caller must journal the expiry before failing. Raises
        already-processed for consumed actions and action-expired for ones
        a previous touch already flipped.
        """
        if action.state in (STATE_CONFIRMED, STATE_CANCELLED):
            detail = f"pending action already {action.state}"
            if action.result_id:
                detail += f"; original record {action.result_id}"
            raise ConflictError(detail, code="already-processed")
        if action.state == STATE_EXPIRED:
            raise ConflictError("pending action expired", code="action-expired")
        return now > action.expires_at

    def add(self, action: PendingAction) -> None:
        self.actions[action.id] = action

    def mark_confirmed(self, pending_id: str, result_id: str | None) -> None:
        action = self.actions[pending_id]
        action.state = STATE_CONFIRMED
        action.result_id = result_id

    def mark_cancelled(self, pending_id: str) -> None:
        self.actions[pending_id].state = STATE_CANCELLED

    def mark_expired(self, pending_id: str) -> None:
        self.actions[pending_id].state = STATE_EXPIRED
