"""Runtime configuration, overridable via environment variables.

Environment variables: BANK_LISTEN, BANK_DATA_DIR, BANK_SESSION_TTL_SECS,
BANK_PENDING_TTL_SECS.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .model import DEFAULT_CURRENCY


@dataclass
class BankConfig:
    currency: str = DEFAULT_CURRENCY
    session_ttl_secs: float = 15 * 60.0
    pending_ttl_secs: float = 5 * 60.0
    lockout_threshold: int = 5
    digest_algorithm: str = "pbkdf2-sha256"
    digest_iterations: int = 100_000
    stop_cheque_fee_minor: int = 0
    # "flush": flush+fsync per append; "batch": flush only (tests).
    flush_policy: str = "flush"
    listen: str = "127.0.0.1:8430"
    data_dir: str = field(default_factory=lambda: os.path.join(os.getcwd(), "bankdata"))

    @classmethod
    def from_env(cls, **overrides) -> "BankConfig":
        """Build a config from BANK_* environment variables plus overrides."""
        cfg = cls(**overrides)
        env = os.environ
        if "listen" not in overrides and env.get("BANK_LISTEN"):
            cfg.listen = env["BANK_LISTEN"]
        if "data_dir" not in overrides and env.get("BANK_DATA_DIR"):
            cfg.data_dir = env["BANK_DATA_DIR"]
        if "session_ttl_secs" not in overrides and env.get("BANK_SESSION_TTL_SECS"):
            cfg.session_ttl_secs = float(env["BANK_SESSION_TTL_SECS"])
        if "pending_ttl_secs" not in overrides and env.get("BANK_PENDING_TTL_SECS"):
            cfg.pending_ttl_secs = float(env["BANK_PENDING_TTL_SECS"])
        return cfg
