"""Cheque services: status inquiry, stop instruction, book requests.

Presentation (clearing or bouncing a cheque) is an admin-channel action;
it lives here so the state machine has a single home, and the admin CLI
calls it.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..cheques import BOOK_LEAF_CHOICES, FULFILLED, STOPPED, UNUSED, Cheque, ChequeBookRequest, guard_stop
from ..errors import ConflictError, InsufficientFundsError, NotOwnerError, ValidationError
from ..ledger import (
    CLEARING_ACCOUNT_ID,
    CREDIT,
    DEBIT,
    FEE_INCOME_ACCOUNT_ID,
    KIND_CURRENT,
    TX_CHEQUE_CLEARING,
    TX_FEE,
)
from ..model import Money, parse_amount

if TYPE_CHECKING:
    from ..bank import Bank


class ChequeService:
    def __init__(self, bank: "Bank"):
        self.bank = bank

    def _owned_cheque(self, customer_id: str, number: str) -> Cheque:
        cheque = self.bank.cheques.get(number)
        account = self.bank.ledger.account(cheque.account)
        if account.owner != customer_id:
            raise NotOwnerError("cheque drawn on another customer's account")
        return cheque

    def cheque_status(self, customer_id: str, number: str) -> Cheque:
        with self.bank.lock.read():
            return self._owned_cheque(customer_id, number)

    def stop_cheque(self, customer_id: str, number: str) -> None:
        """Stop an unused cheque; later presentation is rejected.

        A configured nonzero stop fee posts from the drawing account to
        fee income and requires sufficient funds.
        """
        bank = self.bank
        with bank.lock.write():
            cheque = self._owned_cheque(customer_id, number)
            guard_stop(cheque)
            fee_minor = bank.config.stop_cheque_fee_minor
            fee_tx = None
            if fee_minor > 0:
                if bank.ledger.balance_minor(cheque.account) < fee_minor:
                    raise InsufficientFundsError("balance cannot cover the stop-cheque fee")
                fee_tx = {
                    "id": bank.counters.next_one("transaction"),
                    "kind": TX_FEE,
                    "memo": f"stop-cheque fee for {number}",
                    "reference": number,
                    "entries": [
                        {"account": cheque.account, "direction": DEBIT,
                         "amount_minor": fee_minor},
                        {"account": FEE_INCOME_ACCOUNT_ID, "direction": CREDIT,
                         "amount_minor": fee_minor},
                    ],
                }
            bank.commit("cheque-stopped", {"number": number, "fee_tx": fee_tx})

    def request_cheque_book(self, customer_id: str, account_id: str,
                            leaves: int) -> ChequeBookRequest:
        """Record a book request; an admin fulfills it with a number range."""
        bank = self.bank
        with bank.lock.write():
            account = bank.ledger.account(account_id)
            if account.owner != customer_id:
                raise NotOwnerError("account belongs to another customer")
            if account.kind != KIND_CURRENT:
                raise ConflictError("cheques draw on current accounts only",
                                    code="wrong-account-kind")
            if leaves not in BOOK_LEAF_CHOICES:
                raise ValidationError(
                    f"cheque books come in {BOOK_LEAF_CHOICES} leaves", code="invalid-leaves"
                )
            request_id = bank.counters.next_one("book_request")
            event = bank.commit("chequebook-requested", {
                "request_id": request_id,
                "customer_id": customer_id,
                "account_id": account_id,
                "leaves": leaves,
            })
            return bank.cheques.request(event.payload["request_id"])

    # -- admin channel -------------------------------------------------------

    def fulfill_book(self, request_id: str) -> ChequeBookRequest:
        """Assign the next consecutive number range and create unused cheques."""
        bank = self.bank
        with bank.lock.write():
            request = bank.cheques.request(request_id)
            if request.status == FULFILLED:
                raise ConflictError("request already fulfilled", code="already-processed")
            numbers = bank.counters.peek_next("cheque", request.leaves)
            bank.commit("chequebook-fulfilled", {
                "request_id": request_id,
                "first_number": numbers[0],
                "last_number": numbers[-1],
            })
            return bank.cheques.request(request_id)

    def present_cheque(self, number: str, amount: Money | str) -> str:
        """Present a cheque for clearing; returns cleared, bounced, or rejected.

        Sufficient funds clear the cheque with a ledger posting into the
        clearing account; insufficient funds bounce it with no posting; a
        stopped cheque is rejected. Re-presenting a cleared or bounced
        cheque raises terminal-state.
        """
        bank = self.bank
        if isinstance(amount, str):
            amount = parse_amount(amount, bank.config.currency)
        with bank.lock.write():
            cheque = bank.cheques.get(number)
            if cheque.status == STOPPED:
                return "rejected"
            if cheque.status != UNUSED:
                raise ConflictError(f"cheque is {cheque.status}", code="terminal-state")
            if bank.ledger.balance_minor(cheque.account) >= amount.minor_units:
                tx_id = bank.counters.next_one("transaction")
                bank.commit("cheque-cleared", {
                    "number": number,
                    "amount_minor": amount.minor_units,
                    "tx": {
                        "id": tx_id,
                        "kind": TX_CHEQUE_CLEARING,
                        "memo": f"cheque {number} cleared",
                        "reference": number,
                        "entries": [
                            {"account": cheque.account, "direction": DEBIT,
                             "amount_minor": amount.minor_units},
                            {"account": CLEARING_ACCOUNT_ID, "direction": CREDIT,
                             "amount_minor": amount.minor_units},
                        ],
                    },
                })
                return "cleared"
            bank.commit("cheque-bounced", {
                "number": number,
                "amount_minor": amount.minor_units,
            })
            return "bounced"
