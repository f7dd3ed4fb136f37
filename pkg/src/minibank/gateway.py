"""Session-authenticated HTTP API over the bank services.

Every route is declared in ROUTES and registered through one adapter, so
session enforcement has no per-route opt-outs: the adapter authenticates
the ``X-Session-Token`` header for every route whose ``auth`` flag is set
(all of them except login), then calls the handler. Every failure path
(domain errors, unknown routes, wrong methods, malformed bodies) is
serialized into the same envelope::

    {"code": "<stable-code>", "message": "<human text>"}

with the status mapping: validation 400, auth 401, ownership 403,
missing 404, wrong method 405, conflict 409, insufficient funds 422.
Amounts cross the wire as decimal strings; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .bank import Bank
from .billpay import BillPaymentRecord, Corporation
from .cheques import Cheque, ChequeBookRequest
from .clock import wall_label
from .customers import CustomerProfile
from .errors import AuthError, BankError, NotOwnerError, ValidationError, http_status_for
from .ledger import Account, HistoryRow
from .model import format_amount, format_signed_minor, Money
from .pending import (
    KIND_BILLER_DEREGISTRATION,
    KIND_BILLER_REGISTRATION,
    KIND_OPEN_PAYMENT,
    KIND_REGISTERED_PAYMENT,
    KIND_TRANSFER,
    PendingAction,
)
from .transfers import TransferRecord

SESSION_HEADER = "X-Session-Token"


# -- wire serializers ---------------------------------------------------------


def _money_str(minor: int) -> str:
    return format_amount(Money(minor))


def account_doc(account: Account, balance_minor: int, currency: str) -> dict:
    return {
        "id": account.id,
        "kind": account.kind,
        "status": account.status,
        "balance": _money_str(balance_minor),
        "currency": currency,
    }


def history_row_doc(row: HistoryRow) -> dict:
    return {
        "tx_id": row.tx_id,
        "tick": row.tick,
        "timestamp": row.wall_label,
        "kind": row.kind,
        "memo": row.memo,
        "amount": format_signed_minor(row.signed_minor),
        "running_balance": _money_str(row.running_balance_minor),
    }


def pending_doc(action: PendingAction) -> dict:
    details = dict(action.payload)
    if "amount_minor" in details:
        details["amount"] = _money_str(details.pop("amount_minor"))
    return {
        "id": action.id,
        "kind": action.kind,
        "state": action.state,
        "created_at": wall_label(action.created_at),
        "expires_at": wall_label(action.expires_at),
        "details": details,
    }


def transfer_doc(record: TransferRecord) -> dict:
    return {
        "id": record.id,
        "from_account": record.from_account,
        "to_account": record.to_account,
        "amount": _money_str(record.amount_minor),
        "memo": record.memo,
        "committed_tx": record.committed_tx,
        "timestamp": record.wall_label,
    }


def payment_doc(record: BillPaymentRecord, corporation_name: str) -> dict:
    return {
        "id": record.id,
        "corporation": record.corporation,
        "corporation_name": corporation_name,
        "kind": record.kind,
        "consumer_reference": record.consumer_reference,
        "source_account": record.source_account,
        "amount": _money_str(record.amount_minor),
        "committed_tx": record.committed_tx,
        "timestamp": record.wall_label,
    }


def corporation_doc(corp: Corporation) -> dict:
    return {"id": corp.id, "name": corp.name, "active": corp.active}


def cheque_doc(cheque: Cheque) -> dict:
    doc = {"number": cheque.number, "account": cheque.account, "status": cheque.status}
    if cheque.amount_minor is not None:
        doc["amount"] = _money_str(cheque.amount_minor)
    if cheque.presented_label:
        doc["presented_at"] = cheque.presented_label
    if cheque.stopped_label:
        doc["stopped_at"] = cheque.stopped_label
    return doc


def book_request_doc(request: ChequeBookRequest) -> dict:
    doc = {
        "id": request.id,
        "account": request.account,
        "leaves": request.leaves,
        "status": request.status,
    }
    if request.first_number:
        doc["first_number"] = request.first_number
        doc["last_number"] = request.last_number
    return doc


def profile_doc(profile: CustomerProfile) -> dict:
    return {
        "customer_id": profile.id,
        "username": profile.username,
        "email": profile.email,
        "full_name": profile.full_name,
        "phone": profile.phone,
        "address": profile.address,
        "atm_cards": [
            {"id": card_id, "status": status}
            for card_id, status in profile.atm_cards.items()
        ],
    }


# -- request helpers ----------------------------------------------------------


def _text(body: dict, key: str, default: str = "") -> str:
    value = body.get(key, default)
    if value is None:
        return default
    if not isinstance(value, str):
        raise ValidationError(f"field {key!r} must be a string", code="malformed-body")
    return value


# -- handlers -------------------------------------------------------------------
# Signature: (bank, customer_id, body, path, query, token) -> response doc.


def h_login(bank: Bank, _c, body, _p, _q, _t) -> dict:
    session = bank.auth.login(_text(body, "username"), _text(body, "password"))
    return {"token": session.token, "customer_id": session.customer}


def h_logout(bank: Bank, _c, _b, _p, _q, token) -> dict:
    # Logout accepts expired and already-logged-out tokens (it is
    # idempotent), so it cannot run behind authenticate(); a missing header
    # is still rejected as session-invalid and garbage as unknown-token.
    if not token:
        raise AuthError("no session token supplied", code="session-invalid")
    bank.auth.logout(token)
    return {"ok": True}


def h_accounts(bank: Bank, customer, _b, _p, _q, _t) -> dict:
    with bank.lock.read():
        accounts = bank.ledger.accounts_of(customer)
        docs = [account_doc(a, bank.ledger.balance_minor(a.id), bank.config.currency)
                for a in sorted(accounts, key=lambda a: a.id)]
    return {"accounts": docs}


def h_account_history(bank: Bank, customer, _b, path, query, _t) -> dict:
    account_id = path["account_id"]

    def _tick(name: str) -> int | None:
        raw = query.get(name)
        if raw is None or raw == "":
            return None
        try:
            return int(raw)
        except ValueError:
            raise ValidationError(f"query {name!r} must be an integer tick",
                                  code="invalid-range") from None

    with bank.lock.read():
        account = bank.ledger.account(account_id)
        if account.owner != customer:
            raise NotOwnerError("account belongs to another customer")
        rows = bank.ledger.history(account_id, _tick("from"), _tick("to"))
        balance = bank.ledger.balance_minor(account_id)
    return {
        "account_id": account_id,
        "balance": _money_str(balance),
        "rows": [history_row_doc(r) for r in rows],
    }


def h_transfer_prepare(bank: Bank, customer, body, _p, _q, _t) -> dict:
    action = bank.transfer.prepare(
        customer,
        _text(body, "from_account"),
        _text(body, "to_account"),
        _text(body, "amount"),
        _text(body, "memo"),
    )
    return {"pending": pending_doc(action)}


def h_pending_confirm(bank: Bank, customer, _b, path, _q, _t) -> dict:
    pending_id = path["pending_id"]
    with bank.lock.read():
        kind = bank.pendings.require_owned(customer, pending_id).kind
    if kind == KIND_TRANSFER:
        record = bank.transfer.confirm(customer, pending_id)
        return {"kind": kind, "transfer": transfer_doc(record)}
    if kind in (KIND_REGISTERED_PAYMENT, KIND_OPEN_PAYMENT):
        record = bank.billpay.confirm_payment(customer, pending_id)
        name = bank.billpay_store.corporation(record.corporation).name
        return {"kind": kind, "payment": payment_doc(record, name)}
    if kind == KIND_BILLER_REGISTRATION:
        bank.billpay.confirm_registration(customer, pending_id)
    elif kind == KIND_BILLER_DEREGISTRATION:
        bank.billpay.confirm_deregistration(customer, pending_id)
    return {"kind": kind, "ok": True}


def h_pending_cancel(bank: Bank, customer, _b, path, _q, _t) -> dict:
    bank.transfer.cancel_pending(customer, path["pending_id"])
    return {"ok": True}


def h_transfers(bank: Bank, customer, _b, _p, _q, _t) -> dict:
    return {"transfers": [transfer_doc(r) for r in bank.transfer.history(customer)]}


def h_transfer_detail(bank: Bank, customer, _b, path, _q, _t) -> dict:
    return transfer_doc(bank.transfer.detail(customer, path["transfer_id"]))


def h_corporations(bank: Bank, _c, _b, _p, query, _t) -> dict:
    active_only = query.get("all", "") != "true"
    corps = bank.billpay.list_corporations(active_only=active_only)
    return {"corporations": [corporation_doc(c) for c in corps]}


def h_registered_billers(bank: Bank, customer, _b, _p, _q, _t) -> dict:
    rows = bank.billpay.registered_billers(customer)
    return {
        "billers": [
            {"corporation": corp.id, "name": corp.name, "consumer_reference": ref}
            for corp, ref in rows
        ]
    }


def h_registered_prepare(bank: Bank, customer, body, _p, _q, _t) -> dict:
    action = bank.billpay.prepare_registered_payment(
        customer,
        _text(body, "corporation"),
        _text(body, "source_account"),
        _text(body, "amount"),
    )
    return {"pending": pending_doc(action)}


def h_open_prepare(bank: Bank, customer, body, _p, _q, _t) -> dict:
    action = bank.billpay.prepare_open_payment(
        customer,
        _text(body, "corporation"),
        _text(body, "consumer_reference"),
        _text(body, "source_account"),
        _text(body, "amount"),
    )
    return {"pending": pending_doc(action)}


def h_payment_history(bank: Bank, customer, _b, _p, _q, _t) -> dict:
    with bank.lock.read():
        records = bank.billpay_store.payment_history(customer)
        docs = [payment_doc(r, bank.billpay_store.corporations[r.corporation].name)
                for r in records]
    return {"payments": docs}


def h_register_prepare(bank: Bank, customer, body, _p, _q, _t) -> dict:
    action = bank.billpay.register_biller(
        customer, _text(body, "corporation"), _text(body, "consumer_reference")
    )
    return {"pending": pending_doc(action)}


def h_deregister_prepare(bank: Bank, customer, body, _p, _q, _t) -> dict:
    action = bank.billpay.deregister_biller(customer, _text(body, "corporation"))
    return {"pending": pending_doc(action)}


def h_cheque_status(bank: Bank, customer, _b, path, _q, _t) -> dict:
    return cheque_doc(bank.cheque.cheque_status(customer, path["number"]))


def h_cheque_stop(bank: Bank, customer, _b, path, _q, _t) -> dict:
    bank.cheque.stop_cheque(customer, path["number"])
    return {"ok": True, "number": path["number"], "status": "stopped"}


def h_cheque_book(bank: Bank, customer, body, _p, _q, _t) -> dict:
    leaves = body.get("leaves")
    if not isinstance(leaves, int) or isinstance(leaves, bool):
        raise ValidationError("field 'leaves' must be an integer", code="invalid-leaves")
    request = bank.cheque.request_cheque_book(customer, _text(body, "account"), leaves)
    return {"request": book_request_doc(request)}


def h_change_password(bank: Bank, customer, body, _p, _q, token) -> dict:
    bank.auth.change_password(
        customer,
        _text(body, "old"),
        _text(body, "new"),
        _text(body, "confirm"),
        keep_token=token,
    )
    return {"ok": True}


def h_update_profile(bank: Bank, customer, body, _p, _q, _t) -> dict:
    bank.auth.update_profile(
        customer, _text(body, "email"), _text(body, "phone"), _text(body, "address")
    )
    return {"profile": profile_doc(bank.auth.profile_view(customer))}


def h_profile(bank: Bank, customer, _b, _p, _q, _t) -> dict:
    return {"profile": profile_doc(bank.auth.profile_view(customer))}


def h_cancel_card(bank: Bank, customer, _b, path, _q, _t) -> dict:
    bank.auth.cancel_atm_card(customer, path["card_id"])
    return {"ok": True, "card_id": path["card_id"], "status": "cancelled"}


@dataclass(frozen=True)
class Route:
    method: str
    path: str
    handler: Callable
    auth: bool = True
    success_status: int = 200
    has_body: bool = False


ROUTES: tuple[Route, ...] = (
    Route("POST", "/api/session", h_login, auth=False, success_status=201, has_body=True),
    Route("DELETE", "/api/session", h_logout, auth=False),
    Route("GET", "/api/accounts", h_accounts),
    Route("GET", "/api/accounts/{account_id}/transactions", h_account_history),
    Route("POST", "/api/transfers/prepare", h_transfer_prepare,
          success_status=201, has_body=True),
    Route("POST", "/api/pending/{pending_id}/confirm", h_pending_confirm),
    Route("POST", "/api/pending/{pending_id}/cancel", h_pending_cancel),
    Route("GET", "/api/transfers", h_transfers),
    Route("GET", "/api/transfers/{transfer_id}", h_transfer_detail),
    Route("GET", "/api/corporations", h_corporations),
    Route("GET", "/api/billers/registered", h_registered_billers),
    Route("POST", "/api/billpay/registered/prepare", h_registered_prepare,
          success_status=201, has_body=True),
    Route("POST", "/api/billpay/open/prepare", h_open_prepare,
          success_status=201, has_body=True),
    Route("GET", "/api/billpay/history", h_payment_history),
    Route("POST", "/api/billers/register/prepare", h_register_prepare,
          success_status=201, has_body=True),
    Route("POST", "/api/billers/deregister/prepare", h_deregister_prepare,
          success_status=201, has_body=True),
    Route("GET", "/api/cheques/{number}", h_cheque_status),
    Route("POST", "/api/cheques/{number}/stop", h_cheque_stop),
    Route("POST", "/api/cheque-books", h_cheque_book, success_status=201, has_body=True),
    Route("PUT", "/api/password", h_change_password, has_body=True),
    Route("PUT", "/api/profile", h_update_profile, has_body=True),
    Route("GET", "/api/profile", h_profile),
    Route("POST", "/api/atm-cards/{card_id}/cancel", h_cancel_card),
)


def _error_response(code: str, message: str, status: int | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status or http_status_for(code),
        content={"code": code, "message": message},
    )


def create_app(bank: Bank, web_root: str | None = None) -> FastAPI:
    """Build the HTTP application over an opened bank.

    ``web_root`` optionally mounts a static directory (the built web UI) at
    the root path; API routes keep priority under /api.
    """
    app = FastAPI(title="minibank", docs_url=None, redoc_url=None, openapi_url=None)

    # The browser UI may be served from another origin (dev server, static
    # host); auth is the explicit session header, not cookies, so a
    # permissive CORS policy leaks nothing.
    from starlette.middleware.cors import CORSMiddleware

    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    def make_endpoint(route: Route):
        # Sync endpoints run in the threadpool: reads proceed concurrently,
        # mutations serialize on the bank's writer lock.
        def dispatch(request: Request, body):
            token = request.headers.get(SESSION_HEADER, "")
            customer = bank.auth.authenticate(token) if route.auth else None
            if body is not None and not isinstance(body, dict):
                raise ValidationError("request body must be a JSON object",
                                      code="malformed-body")
            doc = route.handler(bank, customer, body or {}, request.path_params,
                                dict(request.query_params), token)
            return JSONResponse(status_code=route.success_status, content=doc)

        if route.has_body:
            def endpoint(request: Request, body=Body(None)):
                return dispatch(request, body)
        else:
            def endpoint(request: Request):
                return dispatch(request, None)

        endpoint.__name__ = route.handler.__name__
        return endpoint

    for route in ROUTES:
        app.add_api_route(route.path, make_endpoint(route), methods=[route.method])

    if web_root:
        from starlette.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=web_root, html=True), name="web")

    @app.exception_handler(BankError)
    async def bank_error_handler(_request: Request, exc: BankError):
        return _error_response(exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(_request: Request, _exc: RequestValidationError):
        return _error_response("malformed-body", "request body is not valid JSON", 400)

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(_request: Request, exc: StarletteHTTPException):
        if exc.status_code == 404:
            return _error_response("unknown-route", "no such route", 404)
        if exc.status_code == 405:
            return _error_response("wrong-method", "method not allowed on this route", 405)
        return _error_response("internal-error", str(exc.detail), exc.status_code)

    @app.exception_handler(Exception)
    async def fallback_handler(_request: Request, _exc: Exception):
        # never leak stack detail to clients
        return _error_response("internal-error", "internal error", 500)

    return app
