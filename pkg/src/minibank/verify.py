"""Journal verification: replay a data dir and check every module invariant.

Used by ``bank-admin journal verify``. A report with any error means the
journal cannot be trusted; warnings (a truncated torn tail) are
recoverable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .bank import Bank
from .config import BankConfig
from .errors import BankError
from .journal import JOURNAL_FILENAME, SNAPSHOT_FILENAME, read_snapshot, scan_journal
from .ledger import KIND_EQUITY, RETAIL_KINDS, TX_CHEQUE_CLEARING
from .model import id_number


@dataclass
class VerifyReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    events: int = 0
    transactions: int = 0
    accounts: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def verify_data_dir(data_dir: str, config: BankConfig | None = None) -> VerifyReport:
    """Replay the journal and run the cross-module invariant suite."""
    report = VerifyReport()
    journal_path = os.path.join(data_dir, JOURNAL_FILENAME)
    snapshot_path = os.path.join(data_dir, SNAPSHOT_FILENAME)

    try:
        scan = scan_journal(journal_path)
    except BankError as exc:
        report.errors.append(f"{exc.code}: {exc.message}")
        return report
    if scan.warning:
        report.warnings.append(scan.warning)
    report.events = len(scan.events)

    snap = None
    try:
        snap = read_snapshot(snapshot_path)
    except BankError as exc:
        report.errors.append(f"{exc.code}: {exc.message}")
        return report

    first_expected = snap[0] + 1 if snap else 1
    if scan.events and scan.events[0].seq > first_expected:
        report.errors.append(
            f"sequence-gap: journal starts at {scan.events[0].seq}, "
            f"expected no later than {first_expected}"
        )
        return report
    if not scan.events and snap is None:
        return report  # pristine empty dir

    try:
        bank = Bank.open(data_dir, config=config or BankConfig(), read_only=True)
    except BankError as exc:
        report.errors.append(f"{exc.code}: {exc.message}")
        return report
    except Exception as exc:  # tampered payloads can break appliers arbitrarily
        report.errors.append(f"corrupt-journal: replay raised {exc!r}")
        return report
    try:
        _check_state(bank, report)
        if snap is not None and scan.events and scan.events[0].seq == 1:
            _check_snapshot_agreement(bank, scan.events, report)
    finally:
        bank.close()
    return report


def _check_state(bank: Bank, report: VerifyReport) -> None:
    ledger = bank.ledger
    report.transactions = len(ledger.transactions)
    report.accounts = len(ledger.accounts)

    for tx in ledger.transactions:
        if tx.debit_total() != tx.credit_total():
            report.errors.append(
                f"double-entry: transaction {tx.id} debits {tx.debit_total()} "
                f"!= credits {tx.credit_total()}"
            )

    conservation = ledger.conservation_total_minor()
    seeded = ledger.seed_total_minor()
    if conservation != seeded:
        report.errors.append(
            f"conservation: balances total {conservation} != seeded total {seeded}"
        )

    for account in ledger.accounts.values():
        balance = ledger.balances[account.id]
        if account.kind in RETAIL_KINDS and balance < 0:
            report.errors.append(f"negative balance on customer account {account.id}")
        if account.kind != KIND_EQUITY and balance < 0:
            report.errors.append(f"negative balance on internal account {account.id}")
        rows = ledger.history(account.id)
        replayed = rows[-1].running_balance_minor if rows else 0
        if replayed != balance:
            report.errors.append(
                f"history replay for {account.id} ends at {replayed}, balance is {balance}"
            )

    seen_pairs = set()
    for reg in bank.billpay_store.registrations:
        if not reg.active:
            continue
        pair = (reg.customer, reg.corporation)
        if pair in seen_pairs:
            report.errors.append(f"duplicate active registration for {pair}")
        seen_pairs.add(pair)

    clearing_refs: dict[str, int] = {}
    for tx in ledger.transactions:
        if tx.kind == TX_CHEQUE_CLEARING and tx.reference:
            clearing_refs[tx.reference] = clearing_refs.get(tx.reference, 0) + 1
    for cheque in bank.cheques.cheques.values():
        postings = clearing_refs.get(cheque.number, 0)
        if cheque.status == "cleared" and postings != 1:
            report.errors.append(
                f"cheque {cheque.number} cleared with {postings} clearing postings"
            )
        if cheque.status in ("unused", "stopped", "bounced") and postings:
            report.errors.append(
                f"cheque {cheque.number} is {cheque.status} but has a clearing posting"
            )

    ranges = []
    for request in bank.cheques.requests.values():
        if request.status != "fulfilled":
            continue
        first = id_number("cheque", request.first_number)
        last = id_number("cheque", request.last_number)
        if last - first + 1 != request.leaves:
            report.errors.append(f"book request {request.id} range does not match leaves")
        ranges.append((first, last, request.id))
    ranges.sort()
    for (f1, l1, id1), (f2, l2, id2) in zip(ranges, ranges[1:]):
        if f2 <= l1:
            report.errors.append(f"cheque ranges of {id1} and {id2} overlap")


def _check_snapshot_agreement(bank: Bank, events, report: VerifyReport) -> None:
    """Full replay from event 1 must byte-match snapshot + suffix."""
    fresh = Bank.in_memory(BankConfig(currency=bank.config.currency))
    try:
        for event in events:
            fresh._apply(event)
            fresh.last_seq = event.seq
    except Exception as exc:
        report.errors.append(f"full replay failed: {exc!r}")
        return
    if fresh.state_bytes() != bank.state_bytes():
        report.errors.append("snapshot + suffix replay disagrees with full replay")
