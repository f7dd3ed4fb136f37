/**
 * Typed client for the banking API.
 *
 * The session token lives in memory only: a page reload drops it and the
 * app falls back to the login screen. Every non-2xx response carries the
 * server's stable error envelope, surfaced here as ApiError.
 */

import type {
  AccountDoc,
  AccountHistoryDoc,
  BillerDoc,
  BookRequestDoc,
  ChequeDoc,
  ConfirmResultDoc,
  CorporationDoc,
  PendingDoc,
  ProfileDoc,
  TransferDoc,
  PaymentDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private token: string | null = null;

  constructor(private readonly base: string = "") {}

  get hasSession(): boolean {
    return this.token !== null;
  }

  dropSession(): void {
    this.token = null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["X-Session-Token"] = this.token;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        (doc as { code?: string }).code ?? "internal-error",
        (doc as { message?: string }).message ?? "request failed",
      );
    }
    return doc as T;
  }

  // -- session ------------------------------------------------------------

  async login(username: string, password: string): Promise<{ customer_id: string }> {
    const doc = await this.request<{ token: string; customer_id: string }>(
      "POST", "/api/session", { username, password });
    this.token = doc.token;
    return { customer_id: doc.customer_id };
  }

  async logout(): Promise<void> {
    try {
      await this.request("DELETE", "/api/session");
    } finally {
      this.token = null;
    }
  }

  // -- accounts ------------------------------------------------------------

  accounts(): Promise<{ accounts: AccountDoc[] }> {
    return this.request("GET", "/api/accounts");
  }

  accountHistory(accountId: string): Promise<AccountHistoryDoc> {
    return this.request("GET", `/api/accounts/${accountId}/transactions`);
  }

  // -- two-phase pendings ----------------------------------------------------

  prepareTransfer(form: {
    from_account: string; to_account: string; amount: string; memo: string;
  }): Promise<{ pending: PendingDoc }> {
    return this.request("POST", "/api/transfers/prepare", form);
  }

  prepareRegisteredPayment(form: {
    corporation: string; source_account: string; amount: string;
  }): Promise<{ pending: PendingDoc }> {
    return this.request("POST", "/api/billpay/registered/prepare", form);
  }

  prepareOpenPayment(form: {
    corporation: string; consumer_reference: string; source_account: string; amount: string;
  }): Promise<{ pending: PendingDoc }> {
    return this.request("POST", "/api/billpay/open/prepare", form);
  }

  prepareBillerRegistration(form: {
    corporation: string; consumer_reference: string;
  }): Promise<{ pending: PendingDoc }> {
    return this.request("POST", "/api/billers/register/prepare", form);
  }

  prepareBillerDeregistration(corporation: string): Promise<{ pending: PendingDoc }> {
    return this.request("POST", "/api/billers/deregister/prepare", { corporation });
  }

  confirmPending(pendingId: string): Promise<ConfirmResultDoc> {
    return this.request("POST", `/api/pending/${pendingId}/confirm`);
  }

  cancelPending(pendingId: string): Promise<{ ok: boolean }> {
    return this.request("POST", `/api/pending/${pendingId}/cancel`);
  }

  // -- histories and lookups ----------------------------------------------------

  transfers(): Promise<{ transfers: TransferDoc[] }> {
    return this.request("GET", "/api/transfers");
  }

  transferDetail(transferId: string): Promise<TransferDoc> {
    return this.request("GET", `/api/transfers/${transferId}`);
  }

  corporations(): Promise<{ corporations: CorporationDoc[] }> {
    return this.request("GET", "/api/corporations");
  }

  registeredBillers(): Promise<{ billers: BillerDoc[] }> {
    return this.request("GET", "/api/billers/registered");
  }

  paymentHistory(): Promise<{ payments: PaymentDoc[] }> {
    return this.request("GET", "/api/billpay/history");
  }

  // -- cheques --------------------------------------------------------------

  chequeStatus(number: string): Promise<ChequeDoc> {
    return this.request("GET", `/api/cheques/${number}`);
  }

  stopCheque(number: string): Promise<{ ok: boolean; status: string }> {
    return this.request("POST", `/api/cheques/${number}/stop`);
  }

  requestChequeBook(account: string, leaves: number): Promise<{ request: BookRequestDoc }> {
    return this.request("POST", "/api/cheque-books", { account, leaves });
  }

  // -- utility ----------------------------------------------------------------

  changePassword(old: string, newPassword: string, confirm: string): Promise<{ ok: boolean }> {
    return this.request("PUT", "/api/password", { old, new: newPassword, confirm });
  }

  updateProfile(form: { email: string; phone: string; address: string }):
      Promise<{ profile: ProfileDoc }> {
    return this.request("PUT", "/api/profile", form);
  }

  profile(): Promise<{ profile: ProfileDoc }> {
    return this.request("GET", "/api/profile");
  }

  cancelCard(cardId: string): Promise<{ ok: boolean; status: string }> {
    return this.request("POST", `/api/atm-cards/${cardId}/cancel`);
  }
}
