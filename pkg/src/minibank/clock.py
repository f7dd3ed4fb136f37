"""Injectable wall-clock source.

Durable ordering uses the journal's logical sequence; the wall clock only
supplies human-readable labels and drives TTL comparisons (session idle
expiry, pending-action deadlines). Tests inject :class:`ManualClock` to
step time deterministically.
"""

from __future__ import annotations

import time
from datetime import datetime, timezone


class Clock:
    """Wall-clock interface: epoch seconds as float."""

    def now(self) -> float:
        raise NotImplementedError


class SystemClock(Clock):
    def now(self) -> float:
        return time.time()


class ManualClock(Clock):
    """Fixed clock advanced explicitly by tests."""

    def __init__(self, start: float = 1_700_000_000.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now += seconds

    def set(self, epoch: float) -> None:
        self._now = epoch


def wall_label(epoch: float) -> str:
    """Render epoch seconds as an ISO-8601 UTC label with milliseconds."""
    dt = datetime.fromtimestamp(epoch, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"
