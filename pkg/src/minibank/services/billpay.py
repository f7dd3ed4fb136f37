"""Bill payments and biller registration, all two-phase.

Registered payments pull the consumer reference from the stored
registration (that is their defining property); open payments carry it
per call. Registration state is re-checked at confirm time, so a
deregistration between prepare and confirm wins.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..billpay import BillPaymentRecord, Corporation
from ..errors import ConflictError, InsufficientFundsError, NotOwnerError, ValidationError
from ..ledger import CREDIT, DEBIT, TX_BILL_PAYMENT
from ..model import Money, parse_amount
from ..pending import (
    KIND_BILLER_DEREGISTRATION,
    KIND_BILLER_REGISTRATION,
    KIND_OPEN_PAYMENT,
    KIND_REGISTERED_PAYMENT,
    PendingAction,
)

if TYPE_CHECKING:
    from ..bank import Bank


class BillPayService:
    def __init__(self, bank: "Bank"):
        self.bank = bank

    # -- queries -----------------------------------------------------------

    def list_corporations(self, active_only: bool = True) -> list[Corporation]:
        with self.bank.lock.read():
            return self.bank.billpay_store.list_corporations(active_only)

    def registered_billers(self, customer_id: str):
        with self.bank.lock.read():
            return self.bank.billpay_store.registered_billers(customer_id)

    def payment_history(self, customer_id: str) -> list[BillPaymentRecord]:
        with self.bank.lock.read():
            return self.bank.billpay_store.payment_history(customer_id)

    # -- payments -----------------------------------------------------------

    def prepare_registered_payment(self, customer_id: str, corporation_id: str,
                                   source_account: str,
                                   amount: Money | str) -> PendingAction:
        bank = self.bank
        if isinstance(amount, str):
            amount = parse_amount(amount, bank.config.currency)
        with bank.lock.write():
            bank.billpay_store.active_corporation(corporation_id)
            registration = bank.billpay_store.active_registration(customer_id, corporation_id)
            if registration is None:
                raise ConflictError(f"not registered with {corporation_id}",
                                    code="not-registered")
            self._check_source(customer_id, source_account, amount.minor_units)
            return self._stage_payment(
                customer_id, KIND_REGISTERED_PAYMENT, corporation_id,
                registration.consumer_reference, source_account, amount.minor_units,
            )

    def prepare_open_payment(self, customer_id: str, corporation_id: str,
                             consumer_reference: str, source_account: str,
                             amount: Money | str) -> PendingAction:
        bank = self.bank
        if isinstance(amount, str):
            amount = parse_amount(amount, bank.config.currency)
        if not consumer_reference.strip():
            raise ValidationError("consumer reference must be nonempty",
                                  code="empty-reference")
        with bank.lock.write():
            bank.billpay_store.active_corporation(corporation_id)
            self._check_source(customer_id, source_account, amount.minor_units)
            return self._stage_payment(
                customer_id, KIND_OPEN_PAYMENT, corporation_id,
                consumer_reference, source_account, amount.minor_units,
            )

    def _check_source(self, customer_id: str, source_account: str, amount_minor: int) -> None:
        bank = self.bank
        account = bank.ledger.account(source_account)
        if account.owner != customer_id:
            raise NotOwnerError("source account belongs to another customer")
        if bank.ledger.balance_minor(source_account) < amount_minor:
            raise InsufficientFundsError("amount exceeds available balance")

    def _stage_payment(self, customer_id: str, kind: str, corporation_id: str,
                       consumer_reference: str, source_account: str,
                       amount_minor: int) -> PendingAction:
        bank = self.bank
        pending_id = bank.counters.next_one("pending")
        now = bank.clock.now()
        event = bank.commit("pending-created", {
            "pending_id": pending_id,
            "customer_id": customer_id,
            "kind": kind,
            "details": {
                "corporation": corporation_id,
                "consumer_reference": consumer_reference,
                "source_account": source_account,
                "amount_minor": amount_minor,
            },
            "created_at": now,
            "expires_at": now + bank.config.pending_ttl_secs,
        })
        return bank.pendings.get(event.payload["pending_id"])

    def confirm_payment(self, customer_id: str, pending_id: str) -> BillPaymentRecord:
        """Execute a staged payment of either kind exactly once."""
        bank = self.bank
        with bank.lock.write():
            action = bank.pendings.require_owned(customer_id, pending_id)
            if action.kind not in (KIND_REGISTERED_PAYMENT, KIND_OPEN_PAYMENT):
                raise ConflictError(f"pending action is a {action.kind}, not a payment",
                                    code="wrong-pending-kind")
            if bank.pendings.check_consumable(action, bank.clock.now()):
                bank.commit("pending-expired", {"pending_id": pending_id})
                raise ConflictError("pending action expired", code="action-expired")
            details = action.payload
            corp = bank.billpay_store.active_corporation(details["corporation"])
            if action.kind == KIND_REGISTERED_PAYMENT:
                if bank.billpay_store.active_registration(
                        customer_id, details["corporation"]) is None:
                    raise ConflictError("registration no longer active", code="not-registered")
            if bank.ledger.balance_minor(details["source_account"]) < details["amount_minor"]:
                raise InsufficientFundsError("amount exceeds available balance")
            payment_id = bank.counters.next_one("payment")
            tx_id = bank.counters.next_one("transaction")
            kind_label = "registered" if action.kind == KIND_REGISTERED_PAYMENT else "open"
            event = bank.commit("payment-confirmed", {
                "pending_id": pending_id,
                "payment": {
                    "id": payment_id,
                    "customer": customer_id,
                    "corporation": corp.id,
                    "kind": kind_label,
                    "consumer_reference": details["consumer_reference"],
                    "source_account": details["source_account"],
                    "amount_minor": details["amount_minor"],
                },
                "tx": {
                    "id": tx_id,
                    "kind": TX_BILL_PAYMENT,
                    "memo": f"bill payment to {corp.name}",
                    "reference": payment_id,
                    "entries": [
                        {"account": details["source_account"], "direction": DEBIT,
                         "amount_minor": details["amount_minor"]},
                        {"account": corp.settlement_account, "direction": CREDIT,
                         "amount_minor": details["amount_minor"]},
                    ],
                },
            })
            return bank.billpay_store.payments[event.payload["payment"]["id"]]

    # -- registration ---------------------------------------------------------

    def register_biller(self, customer_id: str, corporation_id: str,
                        consumer_reference: str) -> PendingAction:
        bank = self.bank
        if not consumer_reference.strip():
            raise ValidationError("consumer reference must be nonempty",
                                  code="empty-reference")
        with bank.lock.write():
            bank.billpay_store.active_corporation(corporation_id)
            if bank.billpay_store.active_registration(customer_id, corporation_id):
                raise ConflictError(f"already registered with {corporation_id}",
                                    code="already-registered")
            pending_id = bank.counters.next_one("pending")
            now = bank.clock.now()
            event = bank.commit("pending-created", {
                "pending_id": pending_id,
                "customer_id": customer_id,
                "kind": KIND_BILLER_REGISTRATION,
                "details": {
                    "corporation": corporation_id,
                    "consumer_reference": consumer_reference,
                },
                "created_at": now,
                "expires_at": now + bank.config.pending_ttl_secs,
            })
            return bank.pendings.get(event.payload["pending_id"])

    def confirm_registration(self, customer_id: str, pending_id: str) -> None:
        bank = self.bank
        with bank.lock.write():
            action = bank.pendings.require_owned(customer_id, pending_id)
            if action.kind != KIND_BILLER_REGISTRATION:
                raise ConflictError(f"pending action is a {action.kind}, not a registration",
                                    code="wrong-pending-kind")
            if bank.pendings.check_consumable(action, bank.clock.now()):
                bank.commit("pending-expired", {"pending_id": pending_id})
                raise ConflictError("pending action expired", code="action-expired")
            corporation_id = action.payload["corporation"]
            if bank.billpay_store.active_registration(customer_id, corporation_id):
                raise ConflictError(f"already registered with {corporation_id}",
                                    code="already-registered")
            bank.billpay_store.active_corporation(corporation_id)
            bank.commit("biller-registered", {
                "pending_id": pending_id,
                "customer_id": customer_id,
                "corporation_id": corporation_id,
                "consumer_reference": action.payload["consumer_reference"],
            })

    def deregister_biller(self, customer_id: str, corporation_id: str) -> PendingAction:
        bank = self.bank
        with bank.lock.write():
            if bank.billpay_store.active_registration(customer_id, corporation_id) is None:
                raise ConflictError(f"not registered with {corporation_id}",
                                    code="not-registered")
            pending_id = bank.counters.next_one("pending")
            now = bank.clock.now()
            event = bank.commit("pending-created", {
                "pending_id": pending_id,
                "customer_id": customer_id,
                "kind": KIND_BILLER_DEREGISTRATION,
                "details": {"corporation": corporation_id},
                "created_at": now,
                "expires_at": now + bank.config.pending_ttl_secs,
            })
            return bank.pendings.get(event.payload["pending_id"])

    def confirm_deregistration(self, customer_id: str, pending_id: str) -> None:
        bank = self.bank
        with bank.lock.write():
            action = bank.pendings.require_owned(customer_id, pending_id)
            if action.kind != KIND_BILLER_DEREGISTRATION:
                raise ConflictError(f"pending action is a {action.kind}, not a deregistration",
                                    code="wrong-pending-kind")
            if bank.pendings.check_consumable(action, bank.clock.now()):
                bank.commit("pending-expired", {"pending_id": pending_id})
                raise ConflictError("pending action expired", code="action-expired")
            corporation_id = action.payload["corporation"]
            if bank.billpay_store.active_registration(customer_id, corporation_id) is None:
                raise ConflictError(f"not registered with {corporation_id}",
                                    code="not-registered")
            bank.commit("biller-deregistered", {
                "pending_id": pending_id,
                "customer_id": customer_id,
                "corporation_id": corporation_id,
            })
