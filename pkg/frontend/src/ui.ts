/**
 * DOM renderers, one per screen.
 *
 * Forms follow the shared button conventions: Submit sends the action,
 * Reset restores every field to the value it had when the screen loaded
 * (purely client-side). Buttons are disabled while a mutation is in
 * flight. Confirmation screens render the server's echoed pending details,
 * not the client's form values, so the user confirms what the server will
 * execute.
 */

import type { App } from "./app.js";
import type { Screen } from "./screens.js";
import type { NavEvent } from "./screens.js";

type Child = Node | string;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function button(app: App, id: string, label: string, onClick: () => void,
                disabled = false): HTMLButtonElement {
  const node = el("button", { id }, label);
  node.disabled = disabled || app.busy;
  node.addEventListener("click", onClick);
  return node;
}

function navButton(app: App, event: NavEvent, label: string, id?: string): HTMLButtonElement {
  return button(app, id ?? `nav-${event.toLowerCase().replace(/_/g, "-")}`,
                label, () => void app.goWithData(event));
}

interface FieldSpec {
  name: string;
  label: string;
  initial?: string;
  type?: "text" | "password";
  options?: { value: string; label: string }[];
  readonly?: boolean;
}

/**
 * Build a form with labelled fields plus Submit and Reset buttons.
 * Reset returns every field to the `initial` it was rendered with.
 */
function form(app: App, spec: FieldSpec[], submitLabel: string,
              onSubmit: (values: Record<string, string>) => void): HTMLElement {
  const container = el("div", { class: "form" });
  const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();

  for (const field of spec) {
    const row = el("div", { class: "field-row" });
    row.append(el("label", { for: `field-${field.name}` }, field.label));
    let input: HTMLInputElement | HTMLSelectElement;
    if (field.options) {
      input = el("select", { id: `field-${field.name}` });
      for (const option of field.options) {
        const opt = el("option", { value: option.value }, option.label);
        input.append(opt);
      }
      input.value = field.initial ?? field.options[0]?.value ?? "";
    } else {
      input = el("input", {
        id: `field-${field.name}`,
        type: field.type ?? "text",
      });
      input.value = field.initial ?? "";
      if (field.readonly) input.readOnly = true;
    }
    inputs.set(field.name, input);
    row.append(input);
    container.append(row);
  }

  const submit = button(app, "btn-submit", submitLabel, () => {
    const values: Record<string, string> = {};
    for (const [name, input] of inputs) values[name] = input.value;
    onSubmit(values);
  });
  const reset = button(app, "btn-reset", "Reset", () => {
    for (const field of spec) {
      const input = inputs.get(field.name)!;
      input.value = field.initial ?? (field.options ? field.options[0]?.value ?? "" : "");
    }
  });
  container.append(submit, reset);
  return container;
}

function table(headers: string[], rows: Child[][], id: string): HTMLElement {
  const head = el("tr", {}, ...headers.map((h) => el("th", {}, h)));
  const body = rows.map((cells) =>
    el("tr", {}, ...cells.map((c) => el("td", {}, c))));
  return el("table", { id }, head, ...body);
}

function echoList(details: Record<string, string>): HTMLElement {
  const rows = Object.entries(details).map(([key, value]) =>
    el("li", { "data-echo": key }, `${key.replace(/_/g, " ")}: ${value}`));
  return el("ul", { id: "pending-echo" }, ...rows);
}

function confirmScreen(app: App, title: string): HTMLElement {
  const echo = app.pendingEcho;
  return el(
    "div", { class: "popup" },
    el("h2", {}, title),
    el("p", {}, "Please confirm the details below."),
    echo ? echoList(echo.details) : el("p", {}, "Nothing staged."),
    button(app, "btn-confirm", "Confirm", () => void app.confirmStaged(), !echo),
    button(app, "btn-cancel", "Cancel", () => void app.cancelStaged(), !echo),
  );
}

function accountOptions(app: App): { value: string; label: string }[] {
  return app.accounts.map((a) => ({
    value: a.id,
    label: `${a.kind} ${a.id} (${a.balance} ${a.currency})`,
  }));
}

function corporationOptions(app: App): { value: string; label: string }[] {
  return app.corporations.map((c) => ({ value: c.id, label: c.name }));
}

const RENDERERS: Record<Screen, (app: App) => HTMLElement> = {
  "login": (app) =>
    el("div", {},
       el("h2", {}, "Internet Banking Login"),
       form(app, [
         { name: "username", label: "Username" },
         { name: "password", label: "Password", type: "password" },
       ], "Login", (v) => void app.login(v.username, v.password))),

  "invalid-user": (app) =>
    el("div", {},
       el("h2", {}, "Invalid User"),
       el("p", { id: "invalid-user-message" },
          "The username and password did not match. Please try again."),
       navButton(app, "BACK_TO_LOGIN", "Back to login")),

  "main": (app) =>
    el("div", {},
       el("h2", {}, "Main Menu"),
       el("div", { class: "menu" },
          navButton(app, "GO_VIEW_ACCOUNT", "View Account", "menu-view-account"),
          navButton(app, "GO_TRANSFER", "Transfer Funds", "menu-transfer"),
          navButton(app, "GO_PAYBILLS", "Pay Bills", "menu-paybills"),
          navButton(app, "GO_CHEQUES", "Cheque Services", "menu-cheques"),
          navButton(app, "GO_UTILITY", "Utility", "menu-utility"))),

  "view-account": (app) =>
    el("div", {},
       el("h2", {}, "View Account"),
       table(["Account", "Kind", "Balance"],
             app.accounts.map((a) => [a.id, a.kind, `${a.balance} ${a.currency}`]),
             "accounts-table"),
       navButton(app, "OPEN_CURRENT_HISTORY", "Current account history",
                 "open-current-history"),
       navButton(app, "OPEN_SAVINGS_HISTORY", "Savings account history",
                 "open-savings-history"),
       navButton(app, "BACK", "Back")),

  "tx-history-current": (app) => historyScreen(app, "Current Account History"),
  "tx-history-savings": (app) => historyScreen(app, "Savings Account History"),

  "transfer-menu": (app) =>
    el("div", {},
       el("h2", {}, "Transfer Funds"),
       navButton(app, "OPEN_FORM", "New transfer", "open-transfer-form"),
       navButton(app, "OPEN_HISTORY", "Transfer history", "open-transfer-history"),
       navButton(app, "BACK", "Back")),

  "transfer-form": (app) =>
    el("div", {},
       el("h2", {}, "Transfer Funds Form"),
       form(app, [
         { name: "from_account", label: "From account", options: accountOptions(app) },
         { name: "to_account", label: "To account number" },
         { name: "amount", label: "Amount" },
         { name: "memo", label: "Memo" },
       ], "Submit", (v) => void app.submitTransfer({
         from_account: v.from_account, to_account: v.to_account,
         amount: v.amount, memo: v.memo,
       })),
       navButton(app, "BACK", "Back")),

  "transfer-confirm": (app) => confirmScreen(app, "Confirm Transfer"),

  "transfer-success": (app) =>
    el("div", {},
       el("h2", {}, "Transaction Successful"),
       el("p", { id: "receipt" },
          `Transfer ${app.lastResult?.transfer?.id ?? "?"} of ` +
          `${app.lastResult?.transfer?.amount ?? "?"} completed ` +
          `(ledger ${app.lastResult?.transfer?.committed_tx ?? "?"}).`),
       navButton(app, "OPEN_HISTORY", "Transfer history", "open-transfer-history"),
       navButton(app, "BACK", "Back")),

  "transfer-history": (app) =>
    el("div", {},
       el("h2", {}, "Transfer History"),
       table(["Id", "From", "To", "Amount", "When", ""],
             app.transfers.map((t) => [
               t.id, t.from_account, t.to_account, t.amount, t.timestamp,
               button(app, `detail-${t.id}`, "Detail",
                      () => void app.openTransferDetail(t.id)),
             ]),
             "transfers-table"),
       navButton(app, "BACK", "Back")),

  "transfer-detail": (app) => {
    const record = app.transferDetail;
    return el("div", {},
              el("h2", {}, "Transfer Detail"),
              record
                ? el("ul", { id: "transfer-detail" },
                     el("li", {}, `Id: ${record.id}`),
                     el("li", {}, `From: ${record.from_account}`),
                     el("li", {}, `To: ${record.to_account}`),
                     el("li", {}, `Amount: ${record.amount}`),
                     el("li", {}, `Memo: ${record.memo}`),
                     el("li", {}, `Ledger transaction: ${record.committed_tx}`),
                     el("li", {}, `When: ${record.timestamp}`))
                : el("p", {}, "No transfer selected."),
              navButton(app, "BACK", "Back"));
  },

  "paybills-menu": (app) =>
    el("div", {},
       el("h2", {}, "Pay Bills"),
       navButton(app, "OPEN_REGISTERED_LIST", "Registered payment", "open-registered-list"),
       navButton(app, "OPEN_OPEN_FORM", "Open payment", "open-open-form"),
       navButton(app, "OPEN_BILL_REGISTER", "Register a biller", "open-bill-register"),
       navButton(app, "OPEN_DEREGISTER_LIST", "Deregister a biller", "open-deregister-list"),
       navButton(app, "OPEN_PAYMENT_HISTORY", "Payment history", "open-payment-history"),
       navButton(app, "BACK", "Back")),

  "registered-list": (app) =>
    el("div", {},
       el("h2", {}, "Registered Corporations"),
       app.billers.length
         ? table(["Corporation", "Your reference", ""],
                 app.billers.map((b) => [
                   b.name, b.consumer_reference,
                   button(app, `pay-${b.corporation}`, "Pay",
                          () => void app.selectBillerForPayment(b)),
                 ]),
                 "billers-table")
         : el("p", {}, "No registered billers yet."),
       navButton(app, "BACK", "Back")),

  "registered-form": (app) => {
    const biller = app.selectedBiller;
    return el("div", {},
              el("h2", {}, `Pay ${biller?.name ?? "?"}`),
              el("p", { id: "stored-reference" },
                 `Consumer reference on file: ${biller?.consumer_reference ?? "?"}`),
              form(app, [
                { name: "source_account", label: "From account",
                  options: accountOptions(app) },
                { name: "amount", label: "Amount" },
              ], "Submit", (v) => void app.submitRegisteredPayment({
                corporation: biller?.corporation ?? "",
                source_account: v.source_account, amount: v.amount,
              })),
              navButton(app, "BACK", "Back"));
  },

  "registered-confirm": (app) => confirmScreen(app, "Confirm Registered Payment"),

  "registered-success": (app) => paymentSuccess(app, "Registered Payment Successful"),

  "open-form": (app) =>
    el("div", {},
       el("h2", {}, "Open Payment"),
       form(app, [
         { name: "corporation", label: "Corporation", options: corporationOptions(app) },
         { name: "consumer_reference", label: "Consumer reference" },
         { name: "source_account", label: "From account", options: accountOptions(app) },
         { name: "amount", label: "Amount" },
       ], "Submit", (v) => void app.submitOpenPayment({
         corporation: v.corporation, consumer_reference: v.consumer_reference,
         source_account: v.source_account, amount: v.amount,
       })),
       navButton(app, "BACK", "Back")),

  "open-confirm": (app) => confirmScreen(app, "Confirm Open Payment"),

  "open-success": (app) => paymentSuccess(app, "Open Payment Successful"),

  "bill-register": (app) =>
    el("div", {},
       el("h2", {}, "Bill Registration"),
       form(app, [
         { name: "corporation", label: "Corporation", options: corporationOptions(app) },
         { name: "consumer_reference", label: "Your account at the biller" },
       ], "Submit", (v) => void app.submitBillerRegistration({
         corporation: v.corporation, consumer_reference: v.consumer_reference,
       })),
       navButton(app, "BACK", "Back")),

  "bill-register-confirm": (app) => confirmScreen(app, "Confirm Bill Registration"),

  "bill-register-success": (app) =>
    el("div", {},
       el("h2", {}, "Bill Registration Successful"),
       el("p", { id: "receipt" }, "The biller has been registered."),
       navButton(app, "BACK", "Back")),

  "bill-deregister-list": (app) =>
    el("div", {},
       el("h2", {}, "Bill Deregistration"),
       app.billers.length
         ? table(["Corporation", "Your reference", ""],
                 app.billers.map((b) => [
                   b.name, b.consumer_reference,
                   button(app, `deregister-${b.corporation}`, "Deregister",
                          () => void app.submitBillerDeregistration(b.corporation)),
                 ]),
                 "deregister-table")
         : el("p", {}, "No registered billers."),
       navButton(app, "BACK", "Back")),

  "bill-deregister-confirm": (app) => confirmScreen(app, "Confirm Bill Deregistration"),

  "bill-payment-history": (app) =>
    el("div", {},
       el("h2", {}, "Bill Payment History"),
       table(["Id", "Corporation", "Kind", "Reference", "Amount", "When"],
             app.payments.map((p) => [
               p.id, p.corporation_name, p.kind, p.consumer_reference,
               p.amount, p.timestamp,
             ]),
             "payments-table"),
       navButton(app, "BACK", "Back")),

  "cheque-menu": (app) =>
    el("div", {},
       el("h2", {}, "Cheque Services"),
       navButton(app, "OPEN_CHEQUE_STATUS", "View cheque status", "open-cheque-status"),
       navButton(app, "OPEN_STOP_CHEQUE", "Stop cheque", "open-stop-cheque"),
       navButton(app, "OPEN_REQUEST_BOOK", "Request cheque book", "open-request-book"),
       navButton(app, "BACK", "Back")),

  "cheque-status": (app) => {
    const view = app.chequeView;
    return el("div", {},
              el("h2", {}, "View Cheque Status"),
              form(app, [{ name: "number", label: "Cheque number" }],
                   "Look up", (v) => void app.lookupCheque(v.number)),
              view
                ? el("ul", { id: "cheque-view" },
                     el("li", {}, `Number: ${view.number}`),
                     el("li", { id: "cheque-status-value" }, `Status: ${view.status}`),
                     ...(view.amount ? [el("li", {}, `Amount: ${view.amount}`)] : []),
                     ...(view.presented_at
                       ? [el("li", {}, `Presented: ${view.presented_at}`)] : []),
                     ...(view.stopped_at
                       ? [el("li", {}, `Stopped: ${view.stopped_at}`)] : []))
                : el("p", {}, "Enter a cheque number."),
              navButton(app, "BACK", "Back"));
  },

  "stop-cheque": (app) =>
    el("div", {},
       el("h2", {}, "Stop Cheque"),
       form(app, [{ name: "number", label: "Cheque number" }],
            "Stop cheque", (v) => void app.stopCheque(v.number)),
       navButton(app, "BACK", "Back")),

  "request-book": (app) =>
    el("div", {},
       el("h2", {}, "Request Cheque Book"),
       form(app, [
         { name: "account", label: "Current account",
           options: app.accounts.filter((a) => a.kind === "current")
             .map((a) => ({ value: a.id, label: `${a.id} (${a.balance})` })) },
         { name: "leaves", label: "Leaves",
           options: [{ value: "25", label: "25" }, { value: "50", label: "50" }] },
       ], "Request", (v) => void app.requestBook(v.account, Number(v.leaves))),
       navButton(app, "BACK", "Back")),

  "utility-menu": (app) =>
    el("div", {},
       el("h2", {}, "Utility"),
       navButton(app, "OPEN_CHANGE_PASSWORD", "Change password", "open-change-password"),
       navButton(app, "OPEN_UPDATE_PROFILE", "Update profile", "open-update-profile"),
       navButton(app, "OPEN_CANCEL_ATM", "Cancel ATM card", "open-cancel-atm"),
       navButton(app, "BACK", "Back")),

  "change-password": (app) =>
    el("div", {},
       el("h2", {}, "Change Password"),
       form(app, [
         { name: "old", label: "Current password", type: "password" },
         { name: "new", label: "New password", type: "password" },
         { name: "confirm", label: "Confirm new password", type: "password" },
       ], "Submit", (v) => void app.changePassword(v.old, v.new, v.confirm)),
       navButton(app, "BACK", "Back")),

  "password-changed": (app) =>
    el("div", {},
       el("h2", {}, "Password Successfully Changed"),
       el("p", { id: "receipt" }, "Use the new password at your next login."),
       navButton(app, "BACK", "Back")),

  "update-profile": (app) =>
    el("div", {},
       el("h2", {}, "Update Profile"),
       form(app, [
         { name: "email", label: "Email", initial: app.profile?.email ?? "" },
         { name: "phone", label: "Phone", initial: app.profile?.phone ?? "" },
         { name: "address", label: "Address", initial: app.profile?.address ?? "" },
       ], "Submit", (v) => void app.updateProfile({
         email: v.email, phone: v.phone, address: v.address,
       })),
       navButton(app, "BACK", "Back")),

  "profile-updated": (app) =>
    el("div", {},
       el("h2", {}, "Profile Updated"),
       el("p", { id: "receipt" }, `Email on file: ${app.profile?.email ?? "?"}`),
       navButton(app, "BACK", "Back")),

  "cancel-atm": (app) =>
    el("div", {},
       el("h2", {}, "Cancel ATM Card"),
       table(["Card", "Status", ""],
             (app.profile?.atm_cards ?? []).map((card) => [
               card.id, card.status,
               card.status === "active"
                 ? button(app, `cancel-${card.id}`, "Cancel card",
                          () => void app.cancelCard(card.id))
                 : "",
             ]),
             "cards-table"),
       navButton(app, "BACK", "Back")),
};

function historyScreen(app: App, title: string): HTMLElement {
  const history = app.accountHistory;
  return el("div", {},
            el("h2", {}, title),
            history
              ? table(["Tx", "Kind", "Memo", "Amount", "Running balance", "When"],
                      history.rows.map((r) => [
                        r.tx_id, r.kind, r.memo, r.amount, r.running_balance,
                        r.timestamp,
                      ]),
                      "history-table")
              : el("p", {}, "No data."),
            el("p", { id: "history-balance" },
               `Balance: ${history?.balance ?? "?"}`),
            navButton(app, "BACK", "Back"));
}

function paymentSuccess(app: App, title: string): HTMLElement {
  const payment = app.lastResult?.payment;
  return el("div", {},
            el("h2", {}, title),
            el("p", { id: "receipt" },
               payment
                 ? `Payment ${payment.id} of ${payment.amount} to ` +
                   `${payment.corporation_name} (ref ${payment.consumer_reference}).`
                 : "Payment completed."),
            navButton(app, "BACK", "Back"));
}

export function renderApp(app: App, root: HTMLElement): void {
  root.replaceChildren();

  const header = el("div", { class: "header" },
                    el("h1", {}, "Internet Banking"));
  if (app.api.hasSession && app.screen !== "login" && app.screen !== "invalid-user") {
    header.append(button(app, "btn-logout", "Logout", () => void app.logout()));
  }
  root.append(header);

  if (app.banner) {
    root.append(el("div", { id: "banner", class: `banner ${app.banner.tone}` },
                   app.banner.text));
  }

  const body = el("div", { id: "screen", "data-screen": app.screen });
  body.append(RENDERERS[app.screen](app));
  root.append(body);
}
