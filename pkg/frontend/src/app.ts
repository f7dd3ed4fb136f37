/**
 * Application controller: session, screen state, and the mutation flows.
 *
 * Invariants enforced here rather than in the renderers:
 *  - a confirm request is only ever sent for a pending id the server just
 *    returned from a prepare call (`pendingEcho` is the sole source);
 *  - at most one mutating request is in flight (`busy` gates them all and
 *    the renderers disable buttons while it is set);
 *  - the token lives in the ApiClient's memory only, so a reload lands on
 *    the login screen;
 *  - a 401 on any call drops the session and navigates back to login.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  AccountDoc,
  BillerDoc,
  ConfirmResultDoc,
  CorporationDoc,
  ChequeDoc,
  PendingDoc,
  ProfileDoc,
  TransferDoc,
  PaymentDoc,
  AccountHistoryDoc,
  BookRequestDoc,
} from "./types.js";
import { navigate, UNAUTHENTICATED_SCREENS, type NavEvent, type Screen } from "./screens.js";
import { confirmDialog } from "./dialog.js";
import { renderApp } from "./ui.js";

export interface Banner {
  tone: "error" | "info";
  text: string;
}

export class App {
  screen: Screen = "login";
  busy = false;
  banner: Banner | null = null;

  // data the current screens render from
  accounts: AccountDoc[] = [];
  corporations: CorporationDoc[] = [];
  billers: BillerDoc[] = [];
  transfers: TransferDoc[] = [];
  payments: PaymentDoc[] = [];
  profile: ProfileDoc | null = null;
  accountHistory: AccountHistoryDoc | null = null;
  chequeView: ChequeDoc | null = null;
  bookRequest: BookRequestDoc | null = null;
  transferDetail: TransferDoc | null = null;
  selectedCorporation: CorporationDoc | null = null;
  selectedBiller: BillerDoc | null = null;

  /** The one staged two-phase action; set only from prepare responses. */
  pendingEcho: PendingDoc | null = null;
  lastResult: ConfirmResultDoc | null = null;

  constructor(
    readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  render(): void {
    renderApp(this, this.root);
  }

  dispatch(event: NavEvent): void {
    const next = navigate(this.screen, event);
    if (next !== this.screen) {
      this.screen = next;
      this.banner = null;
    }
    this.render();
  }

  /** Guarded wrapper for anything that talks to a mutating endpoint. */
  private async mutate(work: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.render();
    try {
      await work();
    } catch (error) {
      this.handleError(error);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  private handleError(error: unknown): void {
    if (error instanceof ApiError) {
      if (error.status === 401 && !UNAUTHENTICATED_SCREENS.includes(this.screen)) {
        this.api.dropSession();
        this.screen = "login";
        this.banner = { tone: "error", text: "Session expired, please log in again." };
        return;
      }
      this.banner = { tone: "error", text: `${error.code}: ${error.message}` };
      return;
    }
    this.banner = { tone: "error", text: String(error) };
  }

  // -- session ----------------------------------------------------------------

  async login(username: string, password: string): Promise<void> {
    await this.mutate(async () => {
      try {
        await this.api.login(username, password);
      } catch (error) {
        if (error instanceof ApiError && error.status === 401) {
          this.screen = navigate(this.screen, "LOGIN_FAIL");
          this.banner = { tone: "error", text: error.message };
          return;
        }
        throw error;
      }
      this.accounts = (await this.api.accounts()).accounts;
      this.screen = navigate(this.screen, "LOGIN_OK");
      this.banner = null;
    });
  }

  async logout(): Promise<void> {
    await this.mutate(async () => {
      await this.api.logout().catch(() => undefined);
      this.pendingEcho = null;
      this.screen = "login";
    });
  }

  // -- navigation with data loading ------------------------------------------------

  async goWithData(event: NavEvent): Promise<void> {
    const target = navigate(this.screen, event);
    try {
      await this.loadFor(target);
    } catch (error) {
      this.handleError(error);
      this.render();
      return;
    }
    this.dispatch(event);
  }

  private async loadFor(screen: Screen): Promise<void> {
    switch (screen) {
      case "main":
      case "view-account":
      case "transfer-form":
      case "request-book":
        this.accounts = (await this.api.accounts()).accounts;
        break;
      case "tx-history-current":
        this.accountHistory = await this.api.accountHistory(this.currentAccount().id);
        break;
      case "tx-history-savings":
        this.accountHistory = await this.api.accountHistory(this.savingsAccount().id);
        break;
      case "transfer-history":
        this.transfers = (await this.api.transfers()).transfers;
        break;
      case "registered-list":
      case "bill-deregister-list":
        this.billers = (await this.api.registeredBillers()).billers;
        break;
      case "open-form":
      case "bill-register":
        this.corporations = (await this.api.corporations()).corporations;
        this.accounts = (await this.api.accounts()).accounts;
        break;
      case "bill-payment-history":
        this.payments = (await this.api.paymentHistory()).payments;
        break;
      case "update-profile":
      case "cancel-atm":
        this.profile = (await this.api.profile()).profile;
        break;
      default:
        break;
    }
  }

  currentAccount(): AccountDoc {
    const account = this.accounts.find((a) => a.kind === "current");
    if (!account) throw new Error("no current account loaded");
    return account;
  }

  savingsAccount(): AccountDoc {
    const account = this.accounts.find((a) => a.kind === "savings");
    if (!account) throw new Error("no savings account loaded");
    return account;
  }

  // -- two-phase flows ---------------------------------------------------------
  // prepare -> confirmation screen (server echo) -> confirm | cancel

  async submitTransfer(form: { from_account: string; to_account: string;
                               amount: string; memo: string }): Promise<void> {
    await this.mutate(async () => {
      const { pending } = await this.api.prepareTransfer(form);
      this.pendingEcho = pending;
      this.screen = navigate(this.screen, "SUBMIT");
    });
  }

  async submitRegisteredPayment(form: { corporation: string; source_account: string;
                                        amount: string }): Promise<void> {
    await this.mutate(async () => {
      const { pending } = await this.api.prepareRegisteredPayment(form);
      this.pendingEcho = pending;
      this.screen = navigate(this.screen, "SUBMIT");
    });
  }

  async submitOpenPayment(form: { corporation: string; consumer_reference: string;
                                  source_account: string; amount: string }): Promise<void> {
    await this.mutate(async () => {
      const { pending } = await this.api.prepareOpenPayment(form);
      this.pendingEcho = pending;
      this.screen = navigate(this.screen, "SUBMIT");
    });
  }

  async submitBillerRegistration(form: { corporation: string;
                                         consumer_reference: string }): Promise<void> {
    await this.mutate(async () => {
      const { pending } = await this.api.prepareBillerRegistration(form);
      this.pendingEcho = pending;
      this.screen = navigate(this.screen, "SUBMIT");
    });
  }

  async submitBillerDeregistration(corporation: string): Promise<void> {
    await this.mutate(async () => {
      const { pending } = await this.api.prepareBillerDeregistration(corporation);
      this.pendingEcho = pending;
      this.screen = navigate(this.screen, "SELECT_CORP");
    });
  }

  async confirmStaged(): Promise<void> {
    await this.mutate(async () => {
      if (!this.pendingEcho) throw new Error("nothing staged to confirm");
      const result = await this.api.confirmPending(this.pendingEcho.id);
      this.lastResult = result;
      this.pendingEcho = null;
      if (result.kind === "biller-registration" || result.kind === "biller-deregistration") {
        this.billers = (await this.api.registeredBillers()).billers;
      }
      this.screen = navigate(this.screen, "CONFIRM");
      if (result.kind === "biller-deregistration") {
        this.banner = { tone: "info", text: "Deregistration complete." };
      }
    });
  }

  async cancelStaged(): Promise<void> {
    await this.mutate(async () => {
      if (!this.pendingEcho) throw new Error("nothing staged to cancel");
      await this.api.cancelPending(this.pendingEcho.id);
      this.pendingEcho = null;
      this.screen = navigate(this.screen, "CANCEL");
      this.banner = { tone: "info", text: "Action cancelled; nothing was executed." };
    });
  }

  // -- single-shot mutations behind the client-side dialog -------------------------

  async changePassword(oldPw: string, newPw: string, confirmPw: string): Promise<void> {
    if (!(await confirmDialog(this.root, "Change your password?"))) return;
    await this.mutate(async () => {
      await this.api.changePassword(oldPw, newPw, confirmPw);
      this.screen = navigate(this.screen, "SUBMIT_OK");
    });
  }

  async updateProfile(form: { email: string; phone: string; address: string }):
      Promise<void> {
    if (!(await confirmDialog(this.root, "Save these profile changes?"))) return;
    await this.mutate(async () => {
      this.profile = (await this.api.updateProfile(form)).profile;
      this.screen = navigate(this.screen, "SUBMIT_OK");
    });
  }

  async cancelCard(cardId: string): Promise<void> {
    const ok = await confirmDialog(
      this.root, `Cancel card ${cardId}? This cannot be undone.`);
    if (!ok) return;
    await this.mutate(async () => {
      await this.api.cancelCard(cardId);
      this.profile = (await this.api.profile()).profile;
      this.banner = { tone: "info", text: `Card ${cardId} cancelled.` };
    });
  }

  async stopCheque(number: string): Promise<void> {
    if (!(await confirmDialog(this.root, `Stop cheque ${number}?`))) return;
    await this.mutate(async () => {
      await this.api.stopCheque(number);
      this.banner = { tone: "info", text: `Cheque ${number} stopped.` };
    });
  }

  async requestBook(account: string, leaves: number): Promise<void> {
    if (!(await confirmDialog(this.root, `Request a ${leaves}-leaf cheque book?`))) return;
    await this.mutate(async () => {
      this.bookRequest = (await this.api.requestChequeBook(account, leaves)).request;
      this.banner = {
        tone: "info",
        text: `Cheque book requested (${this.bookRequest.id}).`,
      };
    });
  }

  // -- lookups (reads; no dialog, no busy gate needed beyond reuse) ---------------

  async lookupCheque(number: string): Promise<void> {
    try {
      this.chequeView = await this.api.chequeStatus(number);
      this.banner = null;
    } catch (error) {
      this.chequeView = null;
      this.handleError(error);
    }
    this.render();
  }

  async openTransferDetail(transferId: string): Promise<void> {
    try {
      this.transferDetail = await this.api.transferDetail(transferId);
    } catch (error) {
      this.handleError(error);
      this.render();
      return;
    }
    this.dispatch("OPEN_DETAIL");
  }

  async selectBillerForPayment(biller: BillerDoc): Promise<void> {
    this.selectedBiller = biller;
    this.accounts = (await this.api.accounts()).accounts;
    this.dispatch("SELECT_CORP");
  }
}
