"""Two-phase fund transfers.

``prepare`` validates and parks a PendingAction (no money moves);
``confirm`` re-validates and commits the balanced two-entry ledger
transaction exactly once. The pending's echo payload is what the
confirmation screen shows.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..errors import ConflictError, InsufficientFundsError, NotFoundError, NotOwnerError, ValidationError
from ..ledger import CREDIT, DEBIT, TX_TRANSFER
from ..model import Money, parse_amount
from ..pending import KIND_TRANSFER, PendingAction
from ..transfers import TransferRecord

if TYPE_CHECKING:
    from ..bank import Bank


class TransferService:
    def __init__(self, bank: "Bank"):
        self.bank = bank

    def prepare(self, customer_id: str, from_account: str, to_account: str,
                amount: Money | str, memo: str = "") -> PendingAction:
        """Stage a transfer; returns the pending action for the pop-up."""
        bank = self.bank
        if isinstance(amount, str):
            amount = parse_amount(amount, bank.config.currency)
        with bank.lock.write():
            source = bank.ledger.account(from_account)
            if source.owner != customer_id:
                raise NotOwnerError("source account belongs to another customer")
            if from_account == to_account:
                raise ValidationError("source and destination are the same account",
                                      code="same-account")
            dest = bank.ledger.account(to_account)
            if dest.is_system:
                # internal accounts are invisible to customers
                raise NotFoundError(f"no such account: {to_account}", code="unknown-account")
            if dest.status != "open":
                raise ConflictError(f"account {to_account} is closed", code="account-closed")
            if bank.ledger.balance_minor(from_account) < amount.minor_units:
                raise InsufficientFundsError("amount exceeds available balance")
            pending_id = bank.counters.next_one("pending")
            now = bank.clock.now()
            event = bank.commit("pending-created", {
                "pending_id": pending_id,
                "customer_id": customer_id,
                "kind": KIND_TRANSFER,
                "details": {
                    "from_account": from_account,
                    "to_account": to_account,
                    "amount_minor": amount.minor_units,
                    "memo": memo,
                },
                "created_at": now,
                "expires_at": now + bank.config.pending_ttl_secs,
            })
            return bank.pendings.get(event.payload["pending_id"])

    def confirm(self, customer_id: str, pending_id: str) -> TransferRecord:
        """Execute a staged transfer exactly once."""
        bank = self.bank
        with bank.lock.write():
            action = bank.pendings.require_owned(customer_id, pending_id)
            if action.kind != KIND_TRANSFER:
                raise ConflictError(f"pending action is a {action.kind}, not a transfer",
                                    code="wrong-pending-kind")
            if bank.pendings.check_consumable(action, bank.clock.now()):
                bank.commit("pending-expired", {"pending_id": pending_id})
                raise ConflictError("pending action expired", code="action-expired")
            details = action.payload
            # funds may have moved since prepare; the commit-time check decides
            if bank.ledger.balance_minor(details["from_account"]) < details["amount_minor"]:
                raise InsufficientFundsError("amount exceeds available balance")
            transfer_id = bank.counters.next_one("transfer")
            tx_id = bank.counters.next_one("transaction")
            amount = details["amount_minor"]
            event = bank.commit("transfer-confirmed", {
                "pending_id": pending_id,
                "transfer": {
                    "id": transfer_id,
                    "customer": customer_id,
                    "from_account": details["from_account"],
                    "to_account": details["to_account"],
                    "amount_minor": amount,
                    "memo": details["memo"],
                },
                "tx": {
                    "id": tx_id,
                    "kind": TX_TRANSFER,
                    "memo": details["memo"] or f"transfer {transfer_id}",
                    "reference": transfer_id,
                    "entries": [
                        {"account": details["from_account"], "direction": DEBIT,
                         "amount_minor": amount},
                        {"account": details["to_account"], "direction": CREDIT,
                         "amount_minor": amount},
                    ],
                },
            })
            return bank.transfers.records[event.payload["transfer"]["id"]]

    def cancel_pending(self, customer_id: str, pending_id: str) -> None:
        """Decline a staged action of any kind (the pop-up's cancel path)."""
        bank = self.bank
        with bank.lock.write():
            action = bank.pendings.require_owned(customer_id, pending_id)
            if bank.pendings.check_consumable(action, bank.clock.now()):
                bank.commit("pending-expired", {"pending_id": pending_id})
                raise ConflictError("pending action expired", code="action-expired")
            bank.commit("pending-cancelled", {"pending_id": pending_id})

    def history(self, customer_id: str) -> list[TransferRecord]:
        with self.bank.lock.read():
            return self.bank.transfers.of_customer(customer_id)

    def detail(self, customer_id: str, transfer_id: str) -> TransferRecord:
        with self.bank.lock.read():
            return self.bank.transfers.detail(customer_id, transfer_id)
