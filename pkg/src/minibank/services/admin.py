"""Operator-side commands: seeding, onboarding, unlocks, account opening.

Opening balances are posted as seed-deposit transactions debiting the
internal equity account, so the conservation baseline (sum of customer,
settlement, and fee balances) equals the seeded total exactly.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..customers import CustomerProfile, make_digest
from ..errors import ConflictError, NotFoundError
from ..ledger import CREDIT, DEBIT, EQUITY_ACCOUNT_ID, RETAIL_KINDS, TX_SEED_DEPOSIT, Account
from ..model import Money, validate_email

if TYPE_CHECKING:
    from ..bank import Bank

# Demo fixture: the standard demo login plus enough data to walk every
# screen. Opening balances are fixture choices.
SEED_USERNAME = "user"
SEED_PASSWORD = "user"
SEED_CURRENT_MINOR = 100_000  # 1000.00
SEED_SAVINGS_MINOR = 50_000  # 500.00
SEED_CORPORATIONS = ("Atlas Power & Light", "City Water Works", "Metro Telecom")
SEED_CARD_COUNT = 2
SEED_BOOK_LEAVES = 50


class AdminService:
    def __init__(self, bank: "Bank"):
        self.bank = bank

    def add_customer(self, username: str, password: str, email: str, full_name: str,
                     phone: str = "", address: str = "", cards: int = 0,
                     current_minor: int = 0, savings_minor: int = 0) -> CustomerProfile:
        """Register a customer with a current and a savings account.

        The 6-20 password policy applies to change_password only, not here:
        operator-created credentials (like the demo user) predate it.
        """
        bank = self.bank
        with bank.lock.write():
            if bank.directory.by_username(username) is not None:
                raise ConflictError(f"username taken: {username}", code="username-taken")
            normalized_email = validate_email(email)
            customer_id = bank.counters.next_one("customer")
            account_ids = bank.counters.peek_next("account", 2)
            card_ids = bank.counters.peek_next("card", cards)
            digest = make_digest(password, bank.config.digest_algorithm,
                                 bank.config.digest_iterations)
            bank.commit("customer-registered", {
                "customer_id": customer_id,
                "username": username,
                "digest": digest,
                "email": normalized_email,
                "full_name": full_name,
                "phone": phone,
                "address": address,
                "card_ids": card_ids,
                "current_account_id": account_ids[0],
                "savings_account_id": account_ids[1],
            })
            for account_id, amount_minor in ((account_ids[0], current_minor),
                                             (account_ids[1], savings_minor)):
                if amount_minor > 0:
                    self._seed_deposit(account_id, amount_minor)
            return bank.directory.get(customer_id)

    def _seed_deposit(self, account_id: str, amount_minor: int) -> None:
        bank = self.bank
        tx_id = bank.counters.next_one("transaction")
        bank.commit("seed-deposit", {
            "tx": {
                "id": tx_id,
                "kind": TX_SEED_DEPOSIT,
                "memo": f"opening balance for {account_id}",
                "reference": None,
                "entries": [
                    {"account": EQUITY_ACCOUNT_ID, "direction": DEBIT,
                     "amount_minor": amount_minor},
                    {"account": account_id, "direction": CREDIT,
                     "amount_minor": amount_minor},
                ],
            },
        })

    def deposit(self, account_id: str, amount: Money) -> None:
        """Post an opening/seed deposit into an existing account."""
        bank = self.bank
        with bank.lock.write():
            bank.ledger.account(account_id)
            self._seed_deposit(account_id, amount.minor_units)

    def add_corporation(self, name: str):
        bank = self.bank
        with bank.lock.write():
            for corp in bank.billpay_store.corporations.values():
                if corp.name == name:
                    raise ConflictError(f"corporation name taken: {name}",
                                        code="corporation-name-taken")
            corporation_id = bank.counters.next_one("corporation")
            settlement_id = bank.counters.next_one("account")
            bank.commit("corporation-added", {
                "corporation_id": corporation_id,
                "name": name,
                "settlement_account_id": settlement_id,
            })
            return bank.billpay_store.corporation(corporation_id)

    def unlock_customer(self, username: str) -> None:
        bank = self.bank
        with bank.lock.write():
            profile = bank.directory.by_username(username)
            if profile is None:
                raise NotFoundError(f"no such customer: {username}", code="unknown-customer")
            bank.commit("customer-unlocked", {"customer_id": profile.id})
        bank.auth.reset_failures(profile.id)

    def open_account(self, owner: str, kind: str) -> Account:
        """Open an additional ledger account for an existing owner."""
        bank = self.bank
        with bank.lock.write():
            if (owner not in bank.directory.customers
                    and owner not in bank.billpay_store.corporations):
                raise NotFoundError(f"no such owner: {owner}", code="unknown-owner")
            if kind not in RETAIL_KINDS:
                raise ConflictError(f"customers cannot hold {kind} accounts",
                                    code="wrong-account-kind")
            bank.ledger.ensure_can_open(owner, kind)
            account_id = bank.counters.next_one("account")
            bank.commit("account-opened", {
                "account_id": account_id,
                "owner": owner,
                "kind": kind,
            })
            return bank.ledger.account(account_id)

    def seed(self) -> dict:
        """Populate an empty data dir with the demo fixture.

        Returns a summary of what was created. Fails with dir-not-empty if
        any event was ever committed here.
        """
        bank = self.bank
        if bank.last_seq > 0:
            raise ConflictError("data dir already contains events", code="dir-not-empty")
        profile = self.add_customer(
            username=SEED_USERNAME,
            password=SEED_PASSWORD,
            email="user@hotmail.com",
            full_name="Demo User",
            phone="555-0100",
            address="1 Demo Street",
            cards=SEED_CARD_COUNT,
            current_minor=SEED_CURRENT_MINOR,
            savings_minor=SEED_SAVINGS_MINOR,
        )
        for name in SEED_CORPORATIONS:
            self.add_corporation(name)
        current = bank.ledger.retail_account(profile.id, "current")
        request = bank.cheque.request_cheque_book(profile.id, current.id, SEED_BOOK_LEAVES)
        fulfilled = bank.cheque.fulfill_book(request.id)
        return {
            "customer_id": profile.id,
            "username": SEED_USERNAME,
            "corporations": len(SEED_CORPORATIONS),
            "cheques": f"{fulfilled.first_number}-{fulfilled.last_number}",
        }
