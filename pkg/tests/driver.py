"""Randomized operation driver shared by persistence and acceptance tests."""

import random

from minibank import Bank, ManualClock
from minibank.errors import BankError

DEMO_CUSTOMER = "C000001"
DEMO_CURRENT = "0000000001"
DEMO_SAVINGS = "0000000002"

OPS = (
    "prepare_transfer", "confirm", "cancel", "open_payment", "registered_payment",
    "register", "deregister", "stop", "present", "advance",
)


def random_session(bank: Bank, clock: ManualClock, rng: random.Random, ops: int,
                   check=None) -> int:
    """Drive ``ops`` random operations; invalid ones fail and are ignored.

    ``check`` runs after every operation when given.
    Returns the number of committed events.
    """
    corp_ids = [c.id for c in bank.billpay.list_corporations()]
    pending_pool: list[str] = []
    for step in range(ops):
        op = rng.choice(OPS)
        try:
            if op == "prepare_transfer":
                src, dst = rng.sample([DEMO_CURRENT, DEMO_SAVINGS], k=2)
                action = bank.transfer.prepare(DEMO_CUSTOMER, src, dst,
                                               f"{rng.randint(1, 2000)}.00", "r")
                pending_pool.append(action.id)
            elif op == "confirm" and pending_pool:
                pending_id = rng.choice(pending_pool)
                kind = bank.pendings.get(pending_id).kind
                if kind == "transfer":
                    bank.transfer.confirm(DEMO_CUSTOMER, pending_id)
                elif kind in ("registered-payment", "open-payment"):
                    bank.billpay.confirm_payment(DEMO_CUSTOMER, pending_id)
                elif kind == "biller-registration":
                    bank.billpay.confirm_registration(DEMO_CUSTOMER, pending_id)
                else:
                    bank.billpay.confirm_deregistration(DEMO_CUSTOMER, pending_id)
            elif op == "cancel" and pending_pool:
                bank.transfer.cancel_pending(DEMO_CUSTOMER, rng.choice(pending_pool))
            elif op == "open_payment":
                action = bank.billpay.prepare_open_payment(
                    DEMO_CUSTOMER, rng.choice(corp_ids), "REF",
                    DEMO_CURRENT, f"{rng.randint(1, 300)}.50")
                pending_pool.append(action.id)
            elif op == "registered_payment":
                action = bank.billpay.prepare_registered_payment(
                    DEMO_CUSTOMER, rng.choice(corp_ids), DEMO_CURRENT,
                    f"{rng.randint(1, 100)}.00")
                pending_pool.append(action.id)
            elif op == "register":
                action = bank.billpay.register_biller(DEMO_CUSTOMER,
                                                      rng.choice(corp_ids), "R-1")
                pending_pool.append(action.id)
            elif op == "deregister":
                action = bank.billpay.deregister_biller(DEMO_CUSTOMER,
                                                        rng.choice(corp_ids))
                pending_pool.append(action.id)
            elif op == "stop":
                bank.cheque.stop_cheque(DEMO_CUSTOMER, f"{rng.randint(1, 50):06d}")
            elif op == "present":
                bank.cheque.present_cheque(f"{rng.randint(1, 50):06d}",
                                           f"{rng.randint(1, 500)}.25")
            elif op == "advance":
                clock.advance(rng.choice([1.0, 240.0, 400.0]))
        except BankError:
            pass
        if check is not None:
            check(step)
    return bank.last_seq
