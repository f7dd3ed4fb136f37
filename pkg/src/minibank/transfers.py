"""Transfer records: confirmed fund movements between accounts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotFoundError, NotOwnerError


@dataclass(frozen=True)
class TransferRecord:
    id: str
    customer: str
    from_account: str
    to_account: str
    amount_minor: int
    memo: str
    committed_tx: str
    tick: int
    wall_label: str


@dataclass
class TransferLog:
    records: dict[str, TransferRecord] = field(default_factory=dict)

    def add(self, record: TransferRecord) -> None:
        self.records[record.id] = record

    def of_customer(self, customer_id: str) -> list[TransferRecord]:
        """All confirmed transfers by a customer, newest first."""
        mine = [r for r in self.records.values() if r.customer == customer_id]
        return sorted(mine, key=lambda r: r.tick, reverse=True)

    def detail(self, customer_id: str, transfer_id: str) -> TransferRecord:
        record = self.records.get(transfer_id)
        if record is None:
            raise NotFoundError(f"no such transfer: {transfer_id}", code="unknown-transfer")
        if record.customer != customer_id:
            raise NotOwnerError("transfer belongs to another customer")
        return record
