"""Append-only event journal and snapshot files.

Journal encoding (``events.log``), one event per line::

    <seq>\\t<crc32>\\t<body>\\n

``seq`` is the decimal event sequence number (gapless, ascending),
``crc32`` is 8 lowercase hex digits of ``zlib.crc32`` computed over the
UTF-8 bytes of ``<seq>\\t<body>``, and ``body`` is the canonical JSON of
``{"kind": ..., "payload": {...}, "wall": <epoch seconds>}`` with keys
sorted and no whitespace. The file is UTF-8, newline-delimited,
human-auditable, and diff-friendly.

Snapshot encoding (``snapshot.dat``): a single line in the same scheme,
``<as_of_seq>\\t<crc32>\\t<state json>\\n``.

Recovery rule: a torn final line (unterminated, unparseable, or failing
its checksum) is dropped with a warning, the expected signature of a
crash mid-append. Any bad line *before* the final line is fatal
(checksum-mismatch), since an append-only writer cannot produce it.
"""

from __future__ import annotations

import json
import os
import zlib
from dataclasses import dataclass, field

from .errors import JournalError

JOURNAL_FILENAME = "events.log"
SNAPSHOT_FILENAME = "snapshot.dat"
LOCK_FILENAME = "bank.lock"


@dataclass(frozen=True)
class Event:
    seq: int
    wall: float
    kind: str
    payload: dict


@dataclass
class ScanResult:
    events: list[Event]
    truncated: bool = False
    warning: str | None = None


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def encode_line(seq: int, body: str) -> str:
    checked = f"{seq}\t{body}"
    crc = zlib.crc32(checked.encode("utf-8")) & 0xFFFFFFFF
    return f"{seq}\t{crc:08x}\t{body}\n"


def encode_event(event: Event) -> str:
    body = canonical_json({"kind": event.kind, "payload": event.payload, "wall": event.wall})
    return encode_line(event.seq, body)


class _LineError(Exception):
    """Internal: a line failed parsing or its checksum."""


def _decode_line(line: str) -> tuple[int, str]:
    """Split and checksum-verify one journal line; returns (seq, body)."""
    parts = line.rstrip("\n").split("\t", 2)
    if len(parts) != 3:
        raise _LineError("malformed line")
    seq_text, crc_text, body = parts
    try:
        seq = int(seq_text)
        expected_crc = int(crc_text, 16)
    except ValueError:
        raise _LineError("malformed seq or checksum field") from None
    actual = zlib.crc32(f"{seq}\t{body}".encode("utf-8")) & 0xFFFFFFFF
    if actual != expected_crc:
        raise _LineError(f"checksum mismatch at sequence {seq}")
    return seq, body


def _decode_event(seq: int, body: str) -> Event:
    try:
        doc = json.loads(body)
        return Event(seq=seq, wall=float(doc["wall"]), kind=str(doc["kind"]),
                     payload=doc["payload"])
    except (ValueError, KeyError, TypeError):
        raise _LineError(f"unreadable event body at sequence {seq}") from None


def scan_journal(path: str) -> ScanResult:
    """Read every event, applying the torn-tail recovery rule.

    Raises:
        JournalError: code checksum-mismatch for corruption before the
            final line or sequence gaps; code io-error on read failure.
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        return ScanResult(events=[])
    except OSError as exc:
        raise JournalError(f"cannot read journal: {exc}", code="io-error") from exc

    events: list[Event] = []
    truncated = False
    warning = None

    chunks = raw.split(b"\n")
    # A well-formed file ends with a newline, so the last chunk is empty;
    # anything else is an unterminated torn tail.
    tail_fragment = chunks[-1]
    complete = chunks[:-1]

    for index, chunk in enumerate(complete):
        is_final = index == len(complete) - 1 and not tail_fragment
        try:
            text = chunk.decode("utf-8")
            seq, body = _decode_line(text)
            event = _decode_event(seq, body)
        except (UnicodeDecodeError, _LineError) as exc:
            if is_final:
                truncated = True
                warning = f"dropped corrupt final journal line: {exc}"
                break
            raise JournalError(
                f"journal corrupt before final line: {exc}", code="checksum-mismatch"
            ) from None
        if events and event.seq != events[-1].seq + 1:
            raise JournalError(
                f"journal sequence gap: {events[-1].seq} followed by {event.seq}",
                code="sequence-gap",
            )
        events.append(event)

    if tail_fragment:
        truncated = True
        warning = "dropped unterminated final journal line (torn write)"

    return ScanResult(events=events, truncated=truncated, warning=warning)


@dataclass
class JournalWriter:
    """Exclusive appender for the event journal.

    ``flush_policy`` "flush" syncs to disk per append (correctness over
    throughput); "batch" flushes to the OS per append without fsync.
    """

    path: str
    last_seq: int = 0
    flush_policy: str = "flush"
    _fh: object = field(default=None, repr=False)

    def open(self) -> None:
        try:
            self._fh = open(self.path, "a", encoding="utf-8")
        except OSError as exc:
            raise JournalError(f"cannot open journal: {exc}", code="io-error") from exc

    def append(self, event: Event) -> None:
        """Durably append one event; the caller acknowledges only after this."""
        if self._fh is None:
            self.open()
        if event.seq != self.last_seq + 1:
            raise JournalError(
                f"expected sequence {self.last_seq + 1}, got {event.seq}",
                code="sequence-gap",
            )
        line = encode_event(event)
        try:
            self._fh.write(line)
            self._fh.flush()
            if self.flush_policy == "flush":
                os.fsync(self._fh.fileno())
        except OSError as exc:
            raise JournalError(f"journal append failed: {exc}", code="io-error") from exc
        self.last_seq = event.seq

    def close(self) -> None:
        if self._fh is not None:
            try:
                self._fh.flush()
                os.fsync(self._fh.fileno())
            except OSError:
                pass
            self._fh.close()
            self._fh = None


def truncate_torn_tail(path: str) -> None:
    """Physically rewrite the journal without its torn tail, if any."""
    scan = scan_journal(path)
    if not scan.truncated:
        return
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for event in scan.events:
            fh.write(encode_event(event))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_snapshot(path: str, as_of_seq: int, state_doc) -> None:
    """Write a snapshot atomically (tmp + rename)."""
    line = encode_line(as_of_seq, canonical_json(state_doc))
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise JournalError(f"snapshot write failed: {exc}", code="io-error") from exc


def read_snapshot(path: str) -> tuple[int, dict] | None:
    """Load and checksum-verify a snapshot; None when absent."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            line = fh.readline()
    except FileNotFoundError:
        return None
    except OSError as exc:
        raise JournalError(f"cannot read snapshot: {exc}", code="io-error") from exc
    try:
        seq, body = _decode_line(line)
        return seq, json.loads(body)
    except (_LineError, ValueError) as exc:
        raise JournalError(f"snapshot corrupt: {exc}", code="checksum-mismatch") from None


def compact_journal(path: str, up_to_seq: int) -> int:
    """Drop journal events with seq <= up_to_seq; returns events removed."""
    scan = scan_journal(path)
    kept = [e for e in scan.events if e.seq > up_to_seq]
    removed = len(scan.events) - len(kept)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for event in kept:
            fh.write(encode_event(event))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
    return removed
