"""Bill-payment domain: corporations, biller registrations, payment records.

A *registered* payment draws its consumer reference from a stored
registration; an *open* payment carries everything per call. Both settle
into the corporation's internal settlement account. Deregistration is a
soft delete so past payment records keep their corporation joins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConflictError, NotFoundError

PAYMENT_REGISTERED = "registered"
PAYMENT_OPEN = "open"


@dataclass
class Corporation:
    id: str
    name: str
    settlement_account: str
    active: bool = True


@dataclass
class BillerRegistration:
    customer: str
    corporation: str
    consumer_reference: str
    registered_tick: int
    active: bool = True


@dataclass(frozen=True)
class BillPaymentRecord:
    id: str
    customer: str
    corporation: str
    kind: str  # "registered" | "open"
    consumer_reference: str
    source_account: str
    amount_minor: int
    committed_tx: str
    tick: int
    wall_label: str


@dataclass
class BillPayStore:
    corporations: dict[str, Corporation] = field(default_factory=dict)
    registrations: list[BillerRegistration] = field(default_factory=list)
    payments: dict[str, BillPaymentRecord] = field(default_factory=dict)

    # -- corporations ---------------------------------------------------------

    def corporation(self, corporation_id: str) -> Corporation:
        corp = self.corporations.get(corporation_id)
        if corp is None:
            raise NotFoundError(f"no such corporation: {corporation_id}",
                                code="unknown-corporation")
        return corp

    def active_corporation(self, corporation_id: str) -> Corporation:
        corp = self.corporation(corporation_id)
        if not corp.active:
            raise NotFoundError(f"corporation inactive: {corporation_id}",
                                code="unknown-corporation")
        return corp

    def list_corporations(self, active_only: bool = True) -> list[Corporation]:
        corps = [c for c in self.corporations.values() if c.active or not active_only]
        return sorted(corps, key=lambda c: c.name)

    def add_corporation(self, corp: Corporation) -> None:
        for existing in self.corporations.values():
            if existing.name == corp.name:
                raise ConflictError(f"corporation name taken: {corp.name}",
                                    code="corporation-name-taken")
        self.corporations[corp.id] = corp

    # -- registrations ----------------------------------------------------------

    def active_registration(self, customer_id: str,
                            corporation_id: str) -> BillerRegistration | None:
        for reg in self.registrations:
            if reg.customer == customer_id and reg.corporation == corporation_id and reg.active:
                return reg
        return None

    def registered_billers(self, customer_id: str) -> list[tuple[Corporation, str]]:
        """Active registrations as (corporation, consumer_reference), name order."""
        rows = [(self.corporations[reg.corporation], reg.consumer_reference)
                for reg in self.registrations
                if reg.customer == customer_id and reg.active]
        return sorted(rows, key=lambda pair: pair[0].name)

    def add_registration(self, registration: BillerRegistration) -> None:
        self.registrations.append(registration)

    def deactivate_registration(self, customer_id: str, corporation_id: str) -> None:
        reg = self.active_registration(customer_id, corporation_id)
        if reg is not None:
            reg.active = False

    # -- payments ---------------------------------------------------------------

    def add_payment(self, record: BillPaymentRecord) -> None:
        self.payments[record.id] = record

    def payment_history(self, customer_id: str) -> list[BillPaymentRecord]:
        """All confirmed payments of both kinds, newest first."""
        mine = [p for p in self.payments.values() if p.customer == customer_id]
        return sorted(mine, key=lambda p: p.tick, reverse=True)
