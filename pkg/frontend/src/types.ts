/** Wire types for the banking API. Amounts are decimal strings ("100.50"). */

export interface AccountDoc {
  id: string;
  kind: "current" | "savings";
  status: string;
  balance: string;
  currency: string;
}

export interface HistoryRowDoc {
  tx_id: string;
  tick: number;
  timestamp: string;
  kind: string;
  memo: string;
  amount: string;
  running_balance: string;
}

export interface AccountHistoryDoc {
  account_id: string;
  balance: string;
  rows: HistoryRowDoc[];
}

export type PendingKind =
  | "transfer"
  | "registered-payment"
  | "open-payment"
  | "biller-registration"
  | "biller-deregistration";

export interface PendingDoc {
  id: string;
  kind: PendingKind;
  state: string;
  created_at: string;
  expires_at: string;
  details: Record<string, string>;
}

export interface TransferDoc {
  id: string;
  from_account: string;
  to_account: string;
  amount: string;
  memo: string;
  committed_tx: string;
  timestamp: string;
}

export interface PaymentDoc {
  id: string;
  corporation: string;
  corporation_name: string;
  kind: "registered" | "open";
  consumer_reference: string;
  source_account: string;
  amount: string;
  committed_tx: string;
  timestamp: string;
}

export interface CorporationDoc {
  id: string;
  name: string;
  active: boolean;
}

export interface BillerDoc {
  corporation: string;
  name: string;
  consumer_reference: string;
}

export interface ChequeDoc {
  number: string;
  account: string;
  status: "unused" | "cleared" | "stopped" | "bounced";
  amount?: string;
  presented_at?: string;
  stopped_at?: string;
}

export interface BookRequestDoc {
  id: string;
  account: string;
  leaves: number;
  status: string;
  first_number?: string;
  last_number?: string;
}

export interface CardDoc {
  id: string;
  status: "active" | "cancelled";
}

export interface ProfileDoc {
  customer_id: string;
  username: string;
  email: string;
  full_name: string;
  phone: string;
  address: string;
  atm_cards: CardDoc[];
}

/** Confirm responses vary by pending kind. */
export interface ConfirmResultDoc {
  kind: PendingKind;
  transfer?: TransferDoc;
  payment?: PaymentDoc;
  ok?: boolean;
}
