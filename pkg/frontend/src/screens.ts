/**
 * The screen inventory and the explicit navigation graph.
 *
 * Navigation is pure data: `navigate(screen, event)` looks up the edge and
 * returns the next screen; events with no edge from the current screen are
 * no-ops. The two-phase money flows are forced through their confirmation
 * screens by construction: the only inbound edge of each success screen is
 * CONFIRM from its confirmation screen, and the tests model-check that.
 */

export const SCREENS = [
  "login",
  "invalid-user",
  "main",
  "view-account",
  "tx-history-current",
  "tx-history-savings",
  "transfer-menu",
  "transfer-form",
  "transfer-confirm",
  "transfer-success",
  "transfer-history",
  "transfer-detail",
  "paybills-menu",
  "registered-list",
  "registered-form",
  "registered-confirm",
  "registered-success",
  "open-form",
  "open-confirm",
  "open-success",
  "bill-register",
  "bill-register-confirm",
  "bill-register-success",
  "bill-deregister-list",
  "bill-deregister-confirm",
  "bill-payment-history",
  "cheque-menu",
  "cheque-status",
  "stop-cheque",
  "request-book",
  "utility-menu",
  "change-password",
  "password-changed",
  "update-profile",
  "profile-updated",
  "cancel-atm",
] as const;

export type Screen = (typeof SCREENS)[number];

/** Screens a session-less app may render. */
export const UNAUTHENTICATED_SCREENS: readonly Screen[] = ["login", "invalid-user"];

export type NavEvent =
  | "LOGIN_OK"
  | "LOGIN_FAIL"
  | "BACK_TO_LOGIN"
  | "LOGOUT"
  | "SESSION_EXPIRED"
  | "GO_VIEW_ACCOUNT"
  | "GO_TRANSFER"
  | "GO_PAYBILLS"
  | "GO_CHEQUES"
  | "GO_UTILITY"
  | "BACK"
  | "OPEN_CURRENT_HISTORY"
  | "OPEN_SAVINGS_HISTORY"
  | "OPEN_FORM"
  | "OPEN_HISTORY"
  | "OPEN_DETAIL"
  | "SUBMIT"
  | "CONFIRM"
  | "CANCEL"
  | "SELECT_CORP"
  | "OPEN_REGISTERED_LIST"
  | "OPEN_OPEN_FORM"
  | "OPEN_BILL_REGISTER"
  | "OPEN_DEREGISTER_LIST"
  | "OPEN_PAYMENT_HISTORY"
  | "OPEN_CHEQUE_STATUS"
  | "OPEN_STOP_CHEQUE"
  | "OPEN_REQUEST_BOOK"
  | "OPEN_CHANGE_PASSWORD"
  | "OPEN_UPDATE_PROFILE"
  | "OPEN_CANCEL_ATM"
  | "SUBMIT_OK";

type Edges = Partial<Record<NavEvent, Screen>>;

export const GRAPH: Record<Screen, Edges> = {
  "login": { LOGIN_OK: "main", LOGIN_FAIL: "invalid-user" },
  "invalid-user": { BACK_TO_LOGIN: "login" },

  "main": {
    GO_VIEW_ACCOUNT: "view-account",
    GO_TRANSFER: "transfer-menu",
    GO_PAYBILLS: "paybills-menu",
    GO_CHEQUES: "cheque-menu",
    GO_UTILITY: "utility-menu",
    LOGOUT: "login",
  },

  "view-account": {
    OPEN_CURRENT_HISTORY: "tx-history-current",
    OPEN_SAVINGS_HISTORY: "tx-history-savings",
    BACK: "main",
  },
  "tx-history-current": { BACK: "view-account" },
  "tx-history-savings": { BACK: "view-account" },

  "transfer-menu": {
    OPEN_FORM: "transfer-form",
    OPEN_HISTORY: "transfer-history",
    BACK: "main",
  },
  "transfer-form": { SUBMIT: "transfer-confirm", BACK: "transfer-menu" },
  "transfer-confirm": { CONFIRM: "transfer-success", CANCEL: "transfer-form" },
  "transfer-success": { OPEN_HISTORY: "transfer-history", BACK: "transfer-menu" },
  "transfer-history": { OPEN_DETAIL: "transfer-detail", BACK: "transfer-menu" },
  "transfer-detail": { BACK: "transfer-history" },

  "paybills-menu": {
    OPEN_REGISTERED_LIST: "registered-list",
    OPEN_OPEN_FORM: "open-form",
    OPEN_BILL_REGISTER: "bill-register",
    OPEN_DEREGISTER_LIST: "bill-deregister-list",
    OPEN_PAYMENT_HISTORY: "bill-payment-history",
    BACK: "main",
  },
  "registered-list": { SELECT_CORP: "registered-form", BACK: "paybills-menu" },
  "registered-form": { SUBMIT: "registered-confirm", BACK: "registered-list" },
  "registered-confirm": { CONFIRM: "registered-success", CANCEL: "registered-form" },
  "registered-success": { BACK: "paybills-menu" },
  "open-form": { SUBMIT: "open-confirm", BACK: "paybills-menu" },
  "open-confirm": { CONFIRM: "open-success", CANCEL: "open-form" },
  "open-success": { BACK: "paybills-menu" },
  "bill-register": { SUBMIT: "bill-register-confirm", BACK: "paybills-menu" },
  "bill-register-confirm": { CONFIRM: "bill-register-success", CANCEL: "bill-register" },
  "bill-register-success": { BACK: "paybills-menu" },
  "bill-deregister-list": { SELECT_CORP: "bill-deregister-confirm", BACK: "paybills-menu" },
  "bill-deregister-confirm": { CONFIRM: "bill-deregister-list", CANCEL: "bill-deregister-list" },
  "bill-payment-history": { BACK: "paybills-menu" },

  "cheque-menu": {
    OPEN_CHEQUE_STATUS: "cheque-status",
    OPEN_STOP_CHEQUE: "stop-cheque",
    OPEN_REQUEST_BOOK: "request-book",
    BACK: "main",
  },
  "cheque-status": { BACK: "cheque-menu" },
  "stop-cheque": { BACK: "cheque-menu" },
  "request-book": { BACK: "cheque-menu" },

  "utility-menu": {
    OPEN_CHANGE_PASSWORD: "change-password",
    OPEN_UPDATE_PROFILE: "update-profile",
    OPEN_CANCEL_ATM: "cancel-atm",
    BACK: "main",
  },
  "change-password": { SUBMIT_OK: "password-changed", BACK: "utility-menu" },
  "password-changed": { BACK: "utility-menu" },
  "update-profile": { SUBMIT_OK: "profile-updated", BACK: "utility-menu" },
  "profile-updated": { BACK: "utility-menu" },
  "cancel-atm": { BACK: "utility-menu" },
};

/**
 * Resolve one navigation step. Illegal events are no-ops; an expired
 * session drops any authenticated screen back to login.
 */
export function navigate(current: Screen, event: NavEvent): Screen {
  if (event === "SESSION_EXPIRED") {
    return UNAUTHENTICATED_SCREENS.includes(current) ? current : "login";
  }
  return GRAPH[current][event] ?? current;
}

/** The two-phase flows and the screens that gate their confirm calls. */
export interface TwoPhaseFlow {
  name: string;
  form: Screen;
  confirm: Screen;
  success: Screen;
}

export const TWO_PHASE_FLOWS: readonly TwoPhaseFlow[] = [
  { name: "transfer", form: "transfer-form", confirm: "transfer-confirm",
    success: "transfer-success" },
  { name: "registered-payment", form: "registered-form", confirm: "registered-confirm",
    success: "registered-success" },
  { name: "open-payment", form: "open-form", confirm: "open-confirm",
    success: "open-success" },
  { name: "biller-registration", form: "bill-register", confirm: "bill-register-confirm",
    success: "bill-register-success" },
  { name: "biller-deregistration", form: "bill-deregister-list",
    confirm: "bill-deregister-confirm", success: "bill-deregister-list" },
];

/** Screens whose single-shot mutations go through the client-side dialog. */
export const DIALOG_GUARDED_SCREENS: readonly Screen[] = [
  "change-password",
  "update-profile",
  "cancel-atm",
  "stop-cheque",
  "request-book",
];

/** All screens reachable from `start` over the graph (ignores session drops). */
export function reachableFrom(start: Screen): Set<Screen> {
  const seen = new Set<Screen>([start]);
  const queue: Screen[] = [start];
  while (queue.length) {
    const screen = queue.shift()!;
    for (const next of Object.values(GRAPH[screen])) {
      if (next && !seen.has(next)) {
        seen.add(next);
        queue.push(next);
      }
    }
  }
  return seen;
}
