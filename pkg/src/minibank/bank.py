"""The bank core: event-sourced state, single-writer commits, replay.

Every durable mutation follows the same path: a service operation
(the *decide* side) validates the request against current state, makes
all nondeterministic choices (ids, wall-clock labels, salts), and commits
one event. ``commit`` appends the event to the journal (durably, before
anything is acknowledged), then applies it. The *apply* side is a pure
function of (state, event), shared verbatim by live execution and by
replay, which is what makes "same journal, same state" hold by
construction.

Volatile state (sessions, consecutive-failure counters) lives outside
this path and dies with the process.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field

from .billpay import BillerRegistration, BillPaymentRecord, BillPayStore, Corporation
from .cheques import (
    BOUNCED,
    CLEARED,
    STOPPED,
    Cheque,
    ChequeBookRequest,
    ChequeRegistry,
    FULFILLED,
)
from .clock import Clock, SystemClock, wall_label
from .config import BankConfig
from .customers import CustomerDirectory, CustomerProfile, SessionTable
from .errors import BankError, JournalError
from .journal import (
    JOURNAL_FILENAME,
    LOCK_FILENAME,
    SNAPSHOT_FILENAME,
    Event,
    JournalWriter,
    canonical_json,
    compact_journal,
    read_snapshot,
    scan_journal,
    truncate_torn_tail,
    write_snapshot,
)
from .ledger import (
    BANK_OWNER,
    CLEARING_ACCOUNT_ID,
    EQUITY_ACCOUNT_ID,
    FEE_INCOME_ACCOUNT_ID,
    KIND_EQUITY,
    KIND_FEE_INCOME,
    KIND_SETTLEMENT,
    Account,
    Ledger,
    LedgerEntry,
    LedgerTransaction,
)
from .model import format_id, id_number
from .pending import PendingAction, PendingStore
from .transfers import TransferLog, TransferRecord

STATE_VERSION = 1


class RWLock:
    """Readers-writer lock: concurrent reads, exclusive single writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._cond:
                self._writing = False
                self._cond.notify_all()


@dataclass
class Counters:
    """Monotonic id allocators, advanced only by event application."""

    values: dict[str, int] = field(default_factory=dict)

    def peek_next(self, namespace: str, count: int = 1) -> list[str]:
        """Ids the next ``count`` allocations will take; no mutation."""
        current = self.values.get(namespace, 0)
        return [format_id(namespace, current + offset) for offset in range(1, count + 1)]

    def next_one(self, namespace: str) -> str:
        return self.peek_next(namespace)[0]

    def observe(self, namespace: str, identifier: str) -> None:
        number = id_number(namespace, identifier)
        if number > self.values.get(namespace, 0):
            self.values[namespace] = number


def _tx_to_doc(tx: LedgerTransaction) -> dict:
    return {
        "id": tx.id,
        "kind": tx.kind,
        "memo": tx.memo,
        "reference": tx.reference,
        "entries": [
            {"account": e.account, "direction": e.direction, "amount_minor": e.amount_minor}
            for e in tx.entries
        ],
    }


def _tx_from_doc(doc: dict, tick: int, label: str) -> LedgerTransaction:
    entries = tuple(
        LedgerEntry(e["account"], e["direction"], e["amount_minor"]) for e in doc["entries"]
    )
    return LedgerTransaction(
        id=doc["id"],
        tick=tick,
        wall_label=label,
        kind=doc["kind"],
        memo=doc["memo"],
        entries=entries,
        reference=doc.get("reference"),
    )


class Bank:
    """State container plus the commit/apply/replay machinery.

    Construct through :meth:`open` (durable, file-locked data dir) or
    :meth:`in_memory` (tests). Service facades hang off attributes:
    ``auth``, ``transfer``, ``billpay``, ``cheque``, ``admin``.
    """

    def __init__(self, config: BankConfig, clock: Clock | None = None):
        self.config = config
        self.clock = clock or SystemClock()
        self.lock = RWLock()
        self.last_seq = 0
        self._writer: JournalWriter | None = None
        self._dir_lock = None
        self.recovery_warning: str | None = None

        self.ledger = Ledger(currency=config.currency)
        self.directory = CustomerDirectory()
        self.sessions = SessionTable(self.clock, config.session_ttl_secs)
        self.pendings = PendingStore()
        self.transfers = TransferLog()
        self.billpay_store = BillPayStore()
        self.cheques = ChequeRegistry()
        self.counters = Counters()

        self._register_system_accounts()
        self._bind_services()

    def _bind_services(self) -> None:
        from .services.admin import AdminService
        from .services.auth import AuthService
        from .services.billpay import BillPayService
        from .services.cheque import ChequeService
        from .services.transfer import TransferService

        self.auth = AuthService(self)
        self.transfer = TransferService(self)
        self.billpay = BillPayService(self)
        self.cheque = ChequeService(self)
        self.admin = AdminService(self)

    def _register_system_accounts(self) -> None:
        # Present from tick 0 in every state, never journaled, zero balance:
        # the equity source of seeded money, the fee-income sink, and the
        # cheque-clearing counterparty.
        for account_id, kind in (
            (EQUITY_ACCOUNT_ID, KIND_EQUITY),
            (FEE_INCOME_ACCOUNT_ID, KIND_FEE_INCOME),
            (CLEARING_ACCOUNT_ID, KIND_SETTLEMENT),
        ):
            self.ledger.register_account(
                Account(id=account_id, owner=BANK_OWNER, kind=kind,
                        opened_tick=0, opened_label="-")
            )

    # -- construction ----------------------------------------------------------

    @classmethod
    def in_memory(cls, config: BankConfig | None = None, clock: Clock | None = None) -> "Bank":
        """A bank with no persistence; unit-test workhorse."""
        return cls(config or BankConfig(), clock)

    @classmethod
    def open(cls, data_dir: str, config: BankConfig | None = None,
             clock: Clock | None = None, read_only: bool = False) -> "Bank":
        """Open a data directory: restore snapshot, replay journal, lock.

        A torn final journal line is physically truncated (with a warning
        kept on ``recovery_warning``); corruption anywhere earlier raises
        checksum-mismatch and the directory is left untouched.
        """
        config = config or BankConfig(data_dir=data_dir)
        config.data_dir = data_dir
        os.makedirs(data_dir, exist_ok=True)
        bank = cls(config, clock)

        # CLI and server are mutually exclusive over a data dir, even for
        # read-only commands.
        bank._acquire_dir_lock(data_dir)
        try:
            journal_path = os.path.join(data_dir, JOURNAL_FILENAME)
            snapshot_path = os.path.join(data_dir, SNAPSHOT_FILENAME)

            snap = read_snapshot(snapshot_path)
            if snap is not None:
                as_of, doc = snap
                bank._restore_state_doc(doc)
                bank.last_seq = as_of

            scan = scan_journal(journal_path)
            if scan.truncated:
                bank.recovery_warning = scan.warning
                if not read_only:
                    truncate_torn_tail(journal_path)
            for event in scan.events:
                if event.seq <= bank.last_seq:
                    continue  # already folded into the snapshot
                if event.seq != bank.last_seq + 1:
                    raise JournalError(
                        f"journal starts at {event.seq}, state ends at {bank.last_seq}",
                        code="sequence-gap",
                    )
                bank._apply(event)
                bank.last_seq = event.seq

            if not read_only:
                bank._writer = JournalWriter(
                    path=journal_path,
                    last_seq=bank.last_seq,
                    flush_policy=config.flush_policy,
                )
                bank._writer.open()
        except BaseException:
            bank._release_dir_lock()
            raise
        return bank

    def _acquire_dir_lock(self, data_dir: str) -> None:
        from filelock import FileLock, Timeout

        lock = FileLock(os.path.join(data_dir, LOCK_FILENAME))
        try:
            lock.acquire(timeout=0.2)
        except Timeout:
            raise BankError(
                f"data dir {data_dir} is locked by another process", code="data-dir-locked"
            ) from None
        self._dir_lock = lock

    def _release_dir_lock(self) -> None:
        if self._dir_lock is not None:
            self._dir_lock.release()
            self._dir_lock = None

    def close(self) -> None:
        if self._writer is not None:
            self._writer.close()
            self._writer = None
        self._release_dir_lock()

    def __enter__(self) -> "Bank":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- commit / apply ----------------------------------------------------------

    def commit(self, kind: str, payload: dict) -> Event:
        """Journal one event durably, then apply it. Caller holds the write lock."""
        event = Event(seq=self.last_seq + 1, wall=self.clock.now(), kind=kind, payload=payload)
        if self._writer is not None:
            self._writer.append(event)
        self._apply(event)
        self.last_seq = event.seq
        return event

    def _apply(self, event: Event) -> None:
        applier = self._APPLIERS.get(event.kind)
        if applier is None:
            raise JournalError(f"unknown event kind: {event.kind}", code="unknown-event-kind")
        applier(self, event)

    # Appliers: deterministic state mutation from the event alone. No clock,
    # no RNG, no config reads that could differ between live run and replay.

    def _apply_customer_registered(self, event: Event) -> None:
        p = event.payload
        label = wall_label(event.wall)
        profile = CustomerProfile(
            id=p["customer_id"],
            username=p["username"],
            credential_digest=p["digest"],
            email=p["email"],
            full_name=p["full_name"],
            phone=p["phone"],
            address=p["address"],
            atm_cards={card_id: "active" for card_id in p["card_ids"]},
        )
        self.directory.add(profile)
        for account_id, kind in ((p["current_account_id"], "current"),
                                 (p["savings_account_id"], "savings")):
            self.ledger.register_account(
                Account(id=account_id, owner=profile.id, kind=kind,
                        opened_tick=event.seq, opened_label=label)
            )
            self.counters.observe("account", account_id)
        self.counters.observe("customer", profile.id)
        for card_id in p["card_ids"]:
            self.counters.observe("card", card_id)

    def _apply_account_opened(self, event: Event) -> None:
        p = event.payload
        self.ledger.register_account(
            Account(id=p["account_id"], owner=p["owner"], kind=p["kind"],
                    opened_tick=event.seq, opened_label=wall_label(event.wall))
        )
        self.counters.observe("account", p["account_id"])

    def _apply_customer_locked(self, event: Event) -> None:
        self.directory.get(event.payload["customer_id"]).locked = True

    def _apply_customer_unlocked(self, event: Event) -> None:
        self.directory.get(event.payload["customer_id"]).locked = False

    def _apply_password_changed(self, event: Event) -> None:
        self.directory.get(event.payload["customer_id"]).credential_digest = \
            event.payload["digest"]

    def _apply_profile_updated(self, event: Event) -> None:
        profile = self.directory.get(event.payload["customer_id"])
        profile.email = event.payload["email"]
        profile.phone = event.payload["phone"]
        profile.address = event.payload["address"]

    def _apply_card_cancelled(self, event: Event) -> None:
        profile = self.directory.get(event.payload["customer_id"])
        profile.atm_cards[event.payload["card_id"]] = "cancelled"

    def _apply_corporation_added(self, event: Event) -> None:
        p = event.payload
        self.ledger.register_account(
            Account(id=p["settlement_account_id"], owner=p["corporation_id"],
                    kind=KIND_SETTLEMENT, opened_tick=event.seq,
                    opened_label=wall_label(event.wall))
        )
        self.billpay_store.add_corporation(
            Corporation(id=p["corporation_id"], name=p["name"],
                        settlement_account=p["settlement_account_id"])
        )
        self.counters.observe("corporation", p["corporation_id"])
        self.counters.observe("account", p["settlement_account_id"])

    def _apply_tx(self, event: Event, doc: dict) -> None:
        tx = _tx_from_doc(doc, event.seq, wall_label(event.wall))
        self.ledger.apply_transaction(tx)
        self.counters.observe("transaction", tx.id)

    def _apply_seed_deposit(self, event: Event) -> None:
        self._apply_tx(event, event.payload["tx"])

    def _apply_pending_created(self, event: Event) -> None:
        p = event.payload
        self.pendings.add(PendingAction(
            id=p["pending_id"],
            customer=p["customer_id"],
            kind=p["kind"],
            payload=p["details"],
            created_at=p["created_at"],
            expires_at=p["expires_at"],
        ))
        self.counters.observe("pending", p["pending_id"])

    def _apply_pending_cancelled(self, event: Event) -> None:
        self.pendings.mark_cancelled(event.payload["pending_id"])

    def _apply_pending_expired(self, event: Event) -> None:
        self.pendings.mark_expired(event.payload["pending_id"])

    def _apply_transfer_confirmed(self, event: Event) -> None:
        p = event.payload
        t = p["transfer"]
        self._apply_tx(event, p["tx"])
        record = TransferRecord(
            id=t["id"],
            customer=t["customer"],
            from_account=t["from_account"],
            to_account=t["to_account"],
            amount_minor=t["amount_minor"],
            memo=t["memo"],
            committed_tx=p["tx"]["id"],
            tick=event.seq,
            wall_label=wall_label(event.wall),
        )
        self.transfers.add(record)
        self.pendings.mark_confirmed(p["pending_id"], record.id)
        self.counters.observe("transfer", record.id)

    def _apply_payment_confirmed(self, event: Event) -> None:
        p = event.payload
        pay = p["payment"]
        self._apply_tx(event, p["tx"])
        record = BillPaymentRecord(
            id=pay["id"],
            customer=pay["customer"],
            corporation=pay["corporation"],
            kind=pay["kind"],
            consumer_reference=pay["consumer_reference"],
            source_account=pay["source_account"],
            amount_minor=pay["amount_minor"],
            committed_tx=p["tx"]["id"],
            tick=event.seq,
            wall_label=wall_label(event.wall),
        )
        self.billpay_store.add_payment(record)
        self.pendings.mark_confirmed(p["pending_id"], record.id)
        self.counters.observe("payment", record.id)

    def _apply_biller_registered(self, event: Event) -> None:
        p = event.payload
        self.billpay_store.add_registration(BillerRegistration(
            customer=p["customer_id"],
            corporation=p["corporation_id"],
            consumer_reference=p["consumer_reference"],
            registered_tick=event.seq,
        ))
        self.pendings.mark_confirmed(p["pending_id"], p["corporation_id"])

    def _apply_biller_deregistered(self, event: Event) -> None:
        p = event.payload
        self.billpay_store.deactivate_registration(p["customer_id"], p["corporation_id"])
        self.pendings.mark_confirmed(p["pending_id"], p["corporation_id"])

    def _apply_chequebook_requested(self, event: Event) -> None:
        p = event.payload
        self.cheques.add_request(ChequeBookRequest(
            id=p["request_id"],
            customer=p["customer_id"],
            account=p["account_id"],
            leaves=p["leaves"],
        ))
        self.counters.observe("book_request", p["request_id"])

    def _apply_chequebook_fulfilled(self, event: Event) -> None:
        p = event.payload
        request = self.cheques.request(p["request_id"])
        request.status = FULFILLED
        request.first_number = p["first_number"]
        request.last_number = p["last_number"]
        for number in range(id_number("cheque", p["first_number"]),
                            id_number("cheque", p["last_number"]) + 1):
            cheque_number = format_id("cheque", number)
            self.cheques.add_cheque(Cheque(number=cheque_number, account=request.account))
            self.counters.observe("cheque", cheque_number)

    def _apply_cheque_stopped(self, event: Event) -> None:
        p = event.payload
        self.cheques.transition(p["number"], STOPPED)
        self.cheques.get(p["number"]).stopped_label = wall_label(event.wall)
        if p.get("fee_tx"):
            self._apply_tx(event, p["fee_tx"])

    def _apply_cheque_cleared(self, event: Event) -> None:
        p = event.payload
        self._apply_tx(event, p["tx"])
        self.cheques.transition(p["number"], CLEARED)
        cheque = self.cheques.get(p["number"])
        cheque.amount_minor = p["amount_minor"]
        cheque.presented_label = wall_label(event.wall)

    def _apply_cheque_bounced(self, event: Event) -> None:
        p = event.payload
        self.cheques.transition(p["number"], BOUNCED)
        cheque = self.cheques.get(p["number"])
        cheque.amount_minor = p["amount_minor"]
        cheque.presented_label = wall_label(event.wall)

    _APPLIERS = {
        "customer-registered": _apply_customer_registered,
        "account-opened": _apply_account_opened,
        "customer-locked": _apply_customer_locked,
        "customer-unlocked": _apply_customer_unlocked,
        "password-changed": _apply_password_changed,
        "profile-updated": _apply_profile_updated,
        "card-cancelled": _apply_card_cancelled,
        "corporation-added": _apply_corporation_added,
        "seed-deposit": _apply_seed_deposit,
        "pending-created": _apply_pending_created,
        "pending-cancelled": _apply_pending_cancelled,
        "pending-expired": _apply_pending_expired,
        "transfer-confirmed": _apply_transfer_confirmed,
        "payment-confirmed": _apply_payment_confirmed,
        "biller-registered": _apply_biller_registered,
        "biller-deregistered": _apply_biller_deregistered,
        "chequebook-requested": _apply_chequebook_requested,
        "chequebook-fulfilled": _apply_chequebook_fulfilled,
        "cheque-stopped": _apply_cheque_stopped,
        "cheque-cleared": _apply_cheque_cleared,
        "cheque-bounced": _apply_cheque_bounced,
    }

    # -- state serialization -----------------------------------------------------

    def state_doc(self) -> dict:
        """Canonical JSON-able document of all durable state."""
        return {
            "version": STATE_VERSION,
            "currency": self.config.currency,
            "last_seq": self.last_seq,
            "counters": dict(sorted(self.counters.values.items())),
            "accounts": [
                {"id": a.id, "owner": a.owner, "kind": a.kind,
                 "opened_tick": a.opened_tick, "opened_label": a.opened_label,
                 "status": a.status}
                for a in self.ledger.accounts.values() if not a.is_system
            ],
            "transactions": [
                {**_tx_to_doc(tx), "tick": tx.tick, "wall_label": tx.wall_label}
                for tx in self.ledger.transactions
            ],
            "customers": [
                {"id": c.id, "username": c.username, "digest": c.credential_digest,
                 "email": c.email, "full_name": c.full_name, "phone": c.phone,
                 "address": c.address, "cards": list(c.atm_cards.items()),
                 "locked": c.locked}
                for c in self.directory.customers.values()
            ],
            "pendings": [
                {"id": a.id, "customer": a.customer, "kind": a.kind,
                 "details": a.payload, "created_at": a.created_at,
                 "expires_at": a.expires_at, "state": a.state, "result_id": a.result_id}
                for a in self.pendings.actions.values()
            ],
            "transfers": [
                {"id": t.id, "customer": t.customer, "from_account": t.from_account,
                 "to_account": t.to_account, "amount_minor": t.amount_minor,
                 "memo": t.memo, "committed_tx": t.committed_tx, "tick": t.tick,
                 "wall_label": t.wall_label}
                for t in self.transfers.records.values()
            ],
            "corporations": [
                {"id": c.id, "name": c.name, "settlement_account": c.settlement_account,
                 "active": c.active}
                for c in self.billpay_store.corporations.values()
            ],
            "registrations": [
                {"customer": r.customer, "corporation": r.corporation,
                 "consumer_reference": r.consumer_reference,
                 "registered_tick": r.registered_tick, "active": r.active}
                for r in self.billpay_store.registrations
            ],
            "payments": [
                {"id": p.id, "customer": p.customer, "corporation": p.corporation,
                 "kind": p.kind, "consumer_reference": p.consumer_reference,
                 "source_account": p.source_account, "amount_minor": p.amount_minor,
                 "committed_tx": p.committed_tx, "tick": p.tick,
                 "wall_label": p.wall_label}
                for p in self.billpay_store.payments.values()
            ],
            "cheques": [
                {"number": c.number, "account": c.account, "status": c.status,
                 "amount_minor": c.amount_minor, "presented_label": c.presented_label,
                 "stopped_label": c.stopped_label}
                for c in self.cheques.cheques.values()
            ],
            "book_requests": [
                {"id": r.id, "customer": r.customer, "account": r.account,
                 "leaves": r.leaves, "status": r.status,
                 "first_number": r.first_number, "last_number": r.last_number}
                for r in self.cheques.requests.values()
            ],
        }

    def state_bytes(self) -> bytes:
        return canonical_json(self.state_doc()).encode("utf-8")

    def _restore_state_doc(self, doc: dict) -> None:
        if doc.get("version") != STATE_VERSION:
            raise JournalError(f"unsupported snapshot version: {doc.get('version')}",
                               code="checksum-mismatch")
        self.counters.values.update(doc["counters"])
        for a in doc["accounts"]:
            self.ledger.register_account(Account(
                id=a["id"], owner=a["owner"], kind=a["kind"],
                opened_tick=a["opened_tick"], opened_label=a["opened_label"],
                status=a["status"],
            ))
        for t in doc["transactions"]:
            self.ledger.apply_transaction(_tx_from_doc(t, t["tick"], t["wall_label"]))
        for c in doc["customers"]:
            self.directory.add(CustomerProfile(
                id=c["id"], username=c["username"], credential_digest=c["digest"],
                email=c["email"], full_name=c["full_name"], phone=c["phone"],
                address=c["address"], atm_cards=dict(map(tuple, c["cards"])),
                locked=c["locked"],
            ))
        for p in doc["pendings"]:
            self.pendings.add(PendingAction(
                id=p["id"], customer=p["customer"], kind=p["kind"],
                payload=p["details"], created_at=p["created_at"],
                expires_at=p["expires_at"], state=p["state"], result_id=p["result_id"],
            ))
        for t in doc["transfers"]:
            self.transfers.add(TransferRecord(
                id=t["id"], customer=t["customer"], from_account=t["from_account"],
                to_account=t["to_account"], amount_minor=t["amount_minor"],
                memo=t["memo"], committed_tx=t["committed_tx"], tick=t["tick"],
                wall_label=t["wall_label"],
            ))
        for c in doc["corporations"]:
            self.billpay_store.corporations[c["id"]] = Corporation(
                id=c["id"], name=c["name"], settlement_account=c["settlement_account"],
                active=c["active"],
            )
        for r in doc["registrations"]:
            self.billpay_store.add_registration(BillerRegistration(
                customer=r["customer"], corporation=r["corporation"],
                consumer_reference=r["consumer_reference"],
                registered_tick=r["registered_tick"], active=r["active"],
            ))
        for p in doc["payments"]:
            self.billpay_store.add_payment(BillPaymentRecord(
                id=p["id"], customer=p["customer"], corporation=p["corporation"],
                kind=p["kind"], consumer_reference=p["consumer_reference"],
                source_account=p["source_account"], amount_minor=p["amount_minor"],
                committed_tx=p["committed_tx"], tick=p["tick"],
                wall_label=p["wall_label"],
            ))
        for c in doc["cheques"]:
            self.cheques.add_cheque(Cheque(
                number=c["number"], account=c["account"], status=c["status"],
                amount_minor=c["amount_minor"], presented_label=c["presented_label"],
                stopped_label=c["stopped_label"],
            ))
        for r in doc["book_requests"]:
            self.cheques.add_request(ChequeBookRequest(
                id=r["id"], customer=r["customer"], account=r["account"],
                leaves=r["leaves"], status=r["status"],
                first_number=r["first_number"], last_number=r["last_number"],
            ))

    # -- snapshots --------------------------------------------------------------

    def save_snapshot(self) -> int:
        """Write snapshot.dat at the current sequence; returns as_of_seq."""
        if self.config.data_dir is None:
            raise BankError("in-memory bank has no data dir", code="io-error")
        with self.lock.write():
            write_snapshot(os.path.join(self.config.data_dir, SNAPSHOT_FILENAME),
                           self.last_seq, self.state_doc())
            return self.last_seq

    def snapshot_and_compact(self) -> int:
        """Snapshot, then drop the journal prefix the snapshot covers."""
        as_of = self.save_snapshot()
        with self.lock.write():
            # The compaction rewrite replaces the inode; reopen the writer so
            # appends land in the new file.
            if self._writer is not None:
                self._writer.close()
            compact_journal(os.path.join(self.config.data_dir, JOURNAL_FILENAME), as_of)
            if self._writer is not None:
                self._writer = JournalWriter(
                    path=self._writer.path, last_seq=self.last_seq,
                    flush_policy=self.config.flush_policy,
                )
                self._writer.open()
        return as_of
