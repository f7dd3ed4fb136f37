"""minibank: an internet-banking backend on a double-entry ledger.

Core pieces: exact-integer money and field validation (:mod:`model`),
the ledger (:mod:`ledger`), two-phase pending actions (:mod:`pending`),
the append-only journal (:mod:`journal`), the event-sourced coordinator
(:mod:`bank`), an HTTP gateway (:mod:`gateway`), and an admin CLI
(:mod:`cli`).
"""

from .bank import Bank
from .clock import ManualClock, SystemClock
from .config import BankConfig
from .errors import BankError
from .model import Money, format_amount, parse_amount, validate_email, validate_password

__version__ = "0.1.0"

__all__ = [
    "Bank",
    "BankConfig",
    "BankError",
    "ManualClock",
    "Money",
    "SystemClock",
    "format_amount",
    "parse_amount",
    "validate_email",
    "validate_password",
    "__version__",
]
