"""Operator CLI: seed data, manage customers/corporations, run the
cheque back office, verify the journal.

Commands talk to the same in-process services the gateway uses, directly
against the data dir (the server must be stopped; a lock file enforces
exclusivity). Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import sys

import click

from .bank import Bank
from .config import BankConfig
from .errors import BankError
from .model import format_amount, parse_amount
from .verify import verify_data_dir


def _open_bank(ctx: click.Context) -> Bank:
    data_dir = ctx.obj["data_dir"]
    return Bank.open(data_dir, config=BankConfig.from_env(data_dir=data_dir))


def _fail(exc: BankError) -> None:
    click.echo(f"{exc.code}: {exc.message}", err=True)
    sys.exit(1)


@click.group()
@click.option("--data-dir", envvar="BANK_DATA_DIR", default="./bankdata",
              show_default=True, help="Journal/snapshot directory.")
@click.pass_context
def main(ctx: click.Context, data_dir: str):
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir


@main.command()
@click.pass_context
def seed(ctx: click.Context):
    """Populate an empty data dir with the demo fixture (user/user)."""
    try:
        with _open_bank(ctx) as bank:
            summary = bank.admin.seed()
    except BankError as exc:
        _fail(exc)
    click.echo(f"seeded customer {summary['customer_id']} "
               f"(login {summary['username']}/{summary['username']}), "
               f"{summary['corporations']} corporations, "
               f"cheques {summary['cheques']}")


@main.group()
def customer():
    """Customer management."""


@customer.command("add")
@click.argument("username")
@click.argument("password")
@click.argument("email")
@click.argument("full_name")
@click.option("--phone", default="")
@click.option("--address", default="")
@click.option("--cards", default=0, type=int, help="Number of ATM cards to issue.")
@click.option("--current", "current_amount", default=None, help="Opening current balance.")
@click.option("--savings", "savings_amount", default=None, help="Opening savings balance.")
@click.pass_context
def customer_add(ctx, username, password, email, full_name, phone, address, cards,
                 current_amount, savings_amount):
    """Register a customer with current and savings accounts."""
    try:
        current_minor = parse_amount(current_amount).minor_units if current_amount else 0
        savings_minor = parse_amount(savings_amount).minor_units if savings_amount else 0
        with _open_bank(ctx) as bank:
            profile = bank.admin.add_customer(
                username=username, password=password, email=email, full_name=full_name,
                phone=phone, address=address, cards=cards,
                current_minor=current_minor, savings_minor=savings_minor,
            )
            accounts = {a.kind: a.id for a in bank.ledger.accounts_of(profile.id)}
    except BankError as exc:
        _fail(exc)
    click.echo(f"customer {profile.id} username={profile.username} "
               f"current={accounts['current']} savings={accounts['savings']}")


@customer.command("unlock")
@click.argument("username")
@click.pass_context
def customer_unlock(ctx, username):
    """Clear a lockout so the customer can log in again."""
    try:
        with _open_bank(ctx) as bank:
            bank.admin.unlock_customer(username)
    except BankError as exc:
        _fail(exc)
    click.echo(f"unlocked {username}")


@main.group()
def corporation():
    """Bill-payment corporations."""


@corporation.command("add")
@click.argument("name")
@click.pass_context
def corporation_add(ctx, name):
    """Register a corporation and its settlement account."""
    try:
        with _open_bank(ctx) as bank:
            corp = bank.admin.add_corporation(name)
    except BankError as exc:
        _fail(exc)
    click.echo(f"corporation {corp.id} name={corp.name!r} "
               f"settlement={corp.settlement_account}")


@main.group(name="cheque-book")
def cheque_book():
    """Cheque book fulfilment."""


@cheque_book.command("fulfill")
@click.argument("request_id")
@click.pass_context
def cheque_book_fulfill(ctx, request_id):
    """Assign a cheque number range to a pending book request."""
    try:
        with _open_bank(ctx) as bank:
            request = bank.cheque.fulfill_book(request_id)
    except BankError as exc:
        _fail(exc)
    click.echo(f"fulfilled {request.id}: cheques "
               f"{request.first_number}-{request.last_number}")


@main.group()
def cheque():
    """Cheque presentation."""


@cheque.command("present")
@click.argument("number")
@click.argument("amount")
@click.pass_context
def cheque_present(ctx, number, amount):
    """Present a cheque for the given amount; prints the outcome."""
    try:
        money = parse_amount(amount)
        with _open_bank(ctx) as bank:
            outcome = bank.cheque.present_cheque(number, money)
    except BankError as exc:
        _fail(exc)
    click.echo(f"{outcome} {number} {format_amount(money)}")


@main.group()
def journal():
    """Journal maintenance."""


@journal.command("verify")
@click.pass_context
def journal_verify(ctx):
    """Replay the journal and check every ledger/service invariant."""
    report = verify_data_dir(ctx.obj["data_dir"])
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    if not report.ok:
        for error in report.errors:
            click.echo(error, err=True)
        sys.exit(1)
    click.echo(f"ok: {report.events} events, {report.transactions} transactions, "
               f"{report.accounts} accounts")


if __name__ == "__main__":
    main()
