"""Double-entry ledger: accounts, balanced atomic postings, history.

Sign convention: every account is credit-normal; its balance is the sum
of credits minus the sum of debits posted against it. Customer deposits
are credits, so customer balances read positively. The internal equity
account (the counterparty of seed deposits) is the single account whose
fold may go negative; it is excluded from the conservation total.

All mutators here are deterministic functions of their arguments; the
bank's command layer performs validation, journals an event, then calls
the mutator. Replay drives the same mutators from the journal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BankError, ConflictError, InsufficientFundsError, NotFoundError, ValidationError
from .model import Money, format_id

KIND_CURRENT = "current"
KIND_SAVINGS = "savings"
KIND_SETTLEMENT = "corporation-settlement"
KIND_FEE_INCOME = "fee-income"
KIND_EQUITY = "equity"

RETAIL_KINDS = (KIND_CURRENT, KIND_SAVINGS)
ACCOUNT_KINDS = (KIND_CURRENT, KIND_SAVINGS, KIND_SETTLEMENT, KIND_FEE_INCOME, KIND_EQUITY)

TX_TRANSFER = "transfer"
TX_BILL_PAYMENT = "bill-payment"
TX_CHEQUE_CLEARING = "cheque-clearing"
TX_FEE = "fee"
TX_SEED_DEPOSIT = "seed-deposit"

DEBIT = "debit"
CREDIT = "credit"

# Owner sentinel and reserved ids for bank-internal accounts. Reserved ids
# sit far above the sequence-allocated range so they never collide.
BANK_OWNER = "BANK"
EQUITY_ACCOUNT_ID = "9999999001"
FEE_INCOME_ACCOUNT_ID = "9999999002"
CLEARING_ACCOUNT_ID = "9999999003"


@dataclass
class Account:
    id: str
    owner: str
    kind: str
    opened_tick: int
    opened_label: str
    status: str = "open"

    @property
    def is_system(self) -> bool:
        return self.owner == BANK_OWNER


@dataclass(frozen=True)
class LedgerEntry:
    account: str
    direction: str  # "debit" | "credit"
    amount_minor: int  # strictly positive


@dataclass(frozen=True)
class LedgerTransaction:
    id: str
    tick: int
    wall_label: str
    kind: str
    memo: str
    entries: tuple[LedgerEntry, ...]
    reference: str | None = None

    def debit_total(self) -> int:
        return sum(e.amount_minor for e in self.entries if e.direction == DEBIT)

    def credit_total(self) -> int:
        return sum(e.amount_minor for e in self.entries if e.direction == CREDIT)


@dataclass
class HistoryRow:
    tx_id: str
    tick: int
    wall_label: str
    kind: str
    memo: str
    signed_minor: int
    running_balance_minor: int


def entries_balanced(entries: tuple[LedgerEntry, ...]) -> bool:
    debits = sum(e.amount_minor for e in entries if e.direction == DEBIT)
    credits = sum(e.amount_minor for e in entries if e.direction == CREDIT)
    return debits == credits


@dataclass
class Ledger:
    """Account registry plus the append-only transaction list and balances."""

    currency: str = "USD"
    accounts: dict[str, Account] = field(default_factory=dict)
    transactions: list[LedgerTransaction] = field(default_factory=list)
    balances: dict[str, int] = field(default_factory=dict)

    # -- queries ------------------------------------------------------------

    def account(self, account_id: str) -> Account:
        acct = self.accounts.get(account_id)
        if acct is None:
            raise NotFoundError(f"no such account: {account_id}", code="unknown-account")
        return acct

    def balance_of(self, account_id: str) -> Money:
        self.account(account_id)
        return Money(self.balances[account_id], self.currency)

    def balance_minor(self, account_id: str) -> int:
        self.account(account_id)
        return self.balances[account_id]

    def accounts_of(self, owner: str) -> list[Account]:
        return [a for a in self.accounts.values() if a.owner == owner]

    def retail_account(self, owner: str, kind: str) -> Account | None:
        for acct in self.accounts.values():
            if acct.owner == owner and acct.kind == kind:
                return acct
        return None

    def history(self, account_id: str, tick_from: int | None = None,
                tick_to: int | None = None) -> list[HistoryRow]:
        """Rows in commit order with a running balance.

        The running balance is computed over the account's full history, so
        the last row of an unbounded query equals ``balance_of``.
        """
        self.account(account_id)
        if tick_from is not None and tick_to is not None and tick_from > tick_to:
            raise ValidationError("history range start exceeds end", code="invalid-range")
        rows: list[HistoryRow] = []
        running = 0
        for tx in self.transactions:
            signed = 0
            touched = False
            for entry in tx.entries:
                if entry.account != account_id:
                    continue
                touched = True
                signed += entry.amount_minor if entry.direction == CREDIT else -entry.amount_minor
            if not touched:
                continue
            running += signed
            if tick_from is not None and tx.tick < tick_from:
                continue
            if tick_to is not None and tx.tick > tick_to:
                continue
            rows.append(HistoryRow(tx.id, tx.tick, tx.wall_label, tx.kind, tx.memo,
                                   signed, running))
        return rows

    # -- decide-side checks ---------------------------------------------------

    def ensure_can_open(self, owner: str, kind: str) -> None:
        if kind not in ACCOUNT_KINDS:
            raise ValidationError(f"unknown account kind: {kind}", code="unknown-account-kind")
        if kind in RETAIL_KINDS and self.retail_account(owner, kind) is not None:
            raise ConflictError(
                f"{owner} already holds a {kind} account", code="duplicate-kind-for-owner"
            )

    def check_transaction(self, entries: tuple[LedgerEntry, ...]) -> None:
        """Validate a transaction against current balances without applying it.

        Raises unbalanced-transaction, unknown-account, account-closed, or
        insufficient-funds. Equity is exempt from the funds check; it is the
        seeded-money source and may fold negative.
        """
        if len(entries) < 2:
            raise BankError("a transaction needs at least two entries",
                            code="unbalanced-transaction")
        if any(e.amount_minor <= 0 for e in entries):
            raise BankError("entry amounts must be strictly positive",
                            code="unbalanced-transaction")
        if not entries_balanced(entries):
            raise BankError("debit total does not equal credit total",
                            code="unbalanced-transaction")
        debits: dict[str, int] = {}
        for entry in entries:
            acct = self.account(entry.account)
            if acct.status != "open":
                raise ConflictError(f"account {acct.id} is closed", code="account-closed")
            if entry.direction == DEBIT:
                debits[acct.id] = debits.get(acct.id, 0) + entry.amount_minor
        for account_id, debit_total in debits.items():
            if self.accounts[account_id].kind == KIND_EQUITY:
                continue
            if self.balances[account_id] < debit_total:
                raise InsufficientFundsError(
                    f"account {account_id} holds {self.balances[account_id]} minor units, "
                    f"needs {debit_total}"
                )

    # -- apply-side mutators --------------------------------------------------

    def register_account(self, account: Account) -> None:
        if account.id in self.accounts:
            raise BankError(f"account id reused: {account.id}", code="duplicate-account-id")
        self.accounts[account.id] = account
        self.balances[account.id] = 0

    def apply_transaction(self, tx: LedgerTransaction) -> None:
        """Post a validated transaction: update balances, append to history.

        Double-entry is re-asserted here on every commit; an unbalanced
        transaction reaching this point is an internal bug (or a corrupt
        journal) and aborts with no state change.
        """
        self.check_transaction(tx.entries)
        for entry in tx.entries:
            delta = entry.amount_minor if entry.direction == CREDIT else -entry.amount_minor
            self.balances[entry.account] += delta
        self.transactions.append(tx)

    # -- invariant helpers ------------------------------------------------------

    def conservation_total_minor(self) -> int:
        """Sum of all account balances excluding the internal equity account."""
        return sum(bal for acct_id, bal in self.balances.items()
                   if self.accounts[acct_id].kind != KIND_EQUITY)

    def seed_total_minor(self) -> int:
        """Sum of all seed-deposit transaction amounts (their credit legs)."""
        total = 0
        for tx in self.transactions:
            if tx.kind != TX_SEED_DEPOSIT:
                continue
            total += sum(e.amount_minor for e in tx.entries
                         if e.direction == CREDIT and
                         self.accounts[e.account].kind != KIND_EQUITY)
        return total


def next_account_id(number: int) -> str:
    return format_id("account", number)
