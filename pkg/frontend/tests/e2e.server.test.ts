/**
 * Scripted browser run against a live, freshly seeded server.
 *
 * Boots the real backend (`bank-admin seed` + `bank-server`) in a child
 * process, renders the real UI into the DOM, and drives it by clicking
 * buttons and typing into fields: the full transfer flow and the full
 * registered-payment flow, both through their confirmation screens.
 *
 * The document origin below matches the backend (the production setup:
 * the gateway serves the UI), so fetches are same-origin.
 *
 * @vitest-environment happy-dom
 * @vitest-environment-options {"url": "http://127.0.0.1:8452"}
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { boot } from "../src/main.js";
import type { App } from "../src/app.js";

const PORT = 8452;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let dataDir: string;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const response = await fetch(`${BASE}/api/corporations`);
      if (response.status === 401) return; // up and enforcing sessions
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "bank-e2e-"));
  const seeded = spawnSync("bank-admin", ["--data-dir", dataDir, "seed"],
                           { encoding: "utf-8" });
  if (seeded.status !== 0) {
    throw new Error(`seed failed: ${seeded.stderr}`);
  }
  server = spawn("bank-server",
                 ["--data-dir", dataDir, "--listen", `127.0.0.1:${PORT}`],
                 { stdio: "ignore" });
  await waitForServer();
});

afterAll(async () => {
  if (server) {
    server.kill("SIGTERM");
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
  rmSync(dataDir, { recursive: true, force: true });
});

function screenOf(root: HTMLElement): string {
  return root.querySelector("#screen")?.getAttribute("data-screen") ?? "?";
}

async function waitForScreen(root: HTMLElement, screen: string): Promise<void> {
  for (let i = 0; i < 200; i++) {
    if (screenOf(root) === screen) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error(`never reached ${screen}; stuck on ${screenOf(root)} ` +
                  `(banner: ${root.querySelector("#banner")?.textContent ?? "none"})`);
}

function click(root: HTMLElement, id: string): void {
  const node = root.querySelector(`#${id}`) as HTMLButtonElement | null;
  if (!node) throw new Error(`no element #${id} on ${screenOf(root)}`);
  if (node.disabled) throw new Error(`#${id} is disabled`);
  node.click();
}

function type(root: HTMLElement, field: string, value: string): void {
  const node = root.querySelector(`#field-${field}`) as
    HTMLInputElement | HTMLSelectElement | null;
  if (!node) throw new Error(`no field ${field} on ${screenOf(root)}`);
  node.value = value;
}

describe("scripted browser run", () => {
  let root: HTMLElement;
  let app: App;

  it("logs in with the seeded credentials", async () => {
    document.body.innerHTML = `<div id="app"></div>`;
    root = document.getElementById("app")!;
    app = boot(root, BASE);
    expect(screenOf(root)).toBe("login");

    type(root, "username", "user");
    type(root, "password", "user");
    click(root, "btn-submit");
    await waitForScreen(root, "main");
  });

  it("completes the full transfer flow through its confirmation screen", async () => {
    click(root, "menu-transfer");
    await waitForScreen(root, "transfer-menu");
    click(root, "open-transfer-form");
    await waitForScreen(root, "transfer-form");

    // from-account select defaults to the current account
    type(root, "to_account", app.savingsAccount().id);
    type(root, "amount", "150.00");
    type(root, "memo", "scripted run");
    click(root, "btn-submit");
    await waitForScreen(root, "transfer-confirm");

    // the pop-up shows the server's echo
    const echo = root.querySelector("#pending-echo")!.textContent!;
    expect(echo).toContain("150.00");
    expect(echo).toContain(app.savingsAccount().id);

    click(root, "btn-confirm");
    await waitForScreen(root, "transfer-success");
    const receipt = root.querySelector("#receipt")!.textContent!;
    expect(receipt).toMatch(/TR\d{6}/);
    expect(receipt).toContain("150.00");

    // balances visible on the view-account screen reflect the movement
    click(root, "nav-back");
    await waitForScreen(root, "transfer-menu");
    click(root, "nav-back");
    await waitForScreen(root, "main");
    click(root, "menu-view-account");
    await waitForScreen(root, "view-account");
    const balances = root.querySelector("#accounts-table")!.textContent!;
    expect(balances).toContain("850.00");
    expect(balances).toContain("650.00");
  });

  it("registers a biller through the registration confirmation", async () => {
    click(root, "nav-back");
    await waitForScreen(root, "main");
    click(root, "menu-paybills");
    await waitForScreen(root, "paybills-menu");
    click(root, "open-bill-register");
    await waitForScreen(root, "bill-register");

    type(root, "consumer_reference", "E2E-REF-9");
    click(root, "btn-submit");
    await waitForScreen(root, "bill-register-confirm");
    expect(root.querySelector("#pending-echo")!.textContent).toContain("E2E-REF-9");

    click(root, "btn-confirm");
    await waitForScreen(root, "bill-register-success");
  });

  it("completes the full registered-payment flow", async () => {
    click(root, "nav-back");
    await waitForScreen(root, "paybills-menu");
    click(root, "open-registered-list");
    await waitForScreen(root, "registered-list");

    // exactly the biller registered above, with its stored reference
    const listing = root.querySelector("#billers-table")!.textContent!;
    expect(listing).toContain("E2E-REF-9");
    const payButton = root.querySelector("[id^='pay-']") as HTMLButtonElement;
    payButton.click();
    await waitForScreen(root, "registered-form");
    expect(root.querySelector("#stored-reference")!.textContent)
      .toContain("E2E-REF-9");

    type(root, "amount", "35.00");
    click(root, "btn-submit");
    await waitForScreen(root, "registered-confirm");
    const echo = root.querySelector("#pending-echo")!.textContent!;
    expect(echo).toContain("35.00");
    expect(echo).toContain("E2E-REF-9"); // server-filled reference

    click(root, "btn-confirm");
    await waitForScreen(root, "registered-success");
    expect(root.querySelector("#receipt")!.textContent).toMatch(/BP\d{6}/);
  });

  it("shows the payment in the bill payment history", async () => {
    click(root, "nav-back");
    await waitForScreen(root, "paybills-menu");
    click(root, "open-payment-history");
    await waitForScreen(root, "bill-payment-history");
    const history = root.querySelector("#payments-table")!.textContent!;
    expect(history).toContain("35.00");
    expect(history).toContain("registered");
  });

  it("money actually moved on the server", async () => {
    // independent check over the raw API
    const login = await fetch(`${BASE}/api/session`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ username: "user", password: "user" }),
    });
    const { token } = (await login.json()) as { token: string };
    const accounts = await fetch(`${BASE}/api/accounts`, {
      headers: { "X-Session-Token": token },
    });
    const doc = (await accounts.json()) as {
      accounts: Array<{ kind: string; balance: string }>;
    };
    const byKind = Object.fromEntries(doc.accounts.map((a) => [a.kind, a.balance]));
    expect(byKind["current"]).toBe("815.00"); // 1000 - 150 - 35
    expect(byKind["savings"]).toBe("650.00"); // 500 + 150
  });

  it("logs out back to the login screen", async () => {
    click(root, "nav-back");
    await waitForScreen(root, "paybills-menu");
    click(root, "nav-back");
    await waitForScreen(root, "main");
    click(root, "btn-logout");
    await waitForScreen(root, "login");
    expect(app.api.hasSession).toBe(false);
  });
});
