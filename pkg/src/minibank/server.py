"""Gateway server entrypoint (``bank-server``).

Configuration comes from flags or the BANK_* environment variables:
BANK_LISTEN (host:port), BANK_DATA_DIR, BANK_SESSION_TTL_SECS,
BANK_PENDING_TTL_SECS.
"""

from __future__ import annotations

import os
import sys

import click
import uvicorn

from .bank import Bank
from .config import BankConfig
from .errors import BankError
from .gateway import create_app


@click.command()
@click.option("--listen", default=None, help="host:port to bind (BANK_LISTEN).")
@click.option("--data-dir", default=None, help="Journal/snapshot directory (BANK_DATA_DIR).")
@click.option("--web-root", default=None,
              help="Directory with the built web UI to serve at / (BANK_WEB_ROOT).")
def main(listen: str | None, data_dir: str | None, web_root: str | None):
    overrides = {}
    if listen:
        overrides["listen"] = listen
    if data_dir:
        overrides["data_dir"] = data_dir
    config = BankConfig.from_env(**overrides)
    web_root = web_root or os.environ.get("BANK_WEB_ROOT")
    host, _, port = config.listen.rpartition(":")
    try:
        bank = Bank.open(config.data_dir, config=config)
    except BankError as exc:
        click.echo(f"{exc.code}: {exc.message}", err=True)
        sys.exit(1)
    if bank.recovery_warning:
        click.echo(f"warning: {bank.recovery_warning}", err=True)
    try:
        uvicorn.run(create_app(bank, web_root=web_root),
                    host=host or "127.0.0.1", port=int(port))
    finally:
        bank.close()


if __name__ == "__main__":
    main()
