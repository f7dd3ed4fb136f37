import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    __BANK_API_BASE__?: string;
    bankApp?: App;
  }
}

export function boot(root: HTMLElement, apiBase?: string): App {
  const base = apiBase ?? window.__BANK_API_BASE__ ?? "";
  const app = new App(new ApiClient(base), root);
  app.render();
  return app;
}

const mount = document.getElementById("app");
if (mount) {
  window.bankApp = boot(mount);
}
