/**
 * Modal confirmation dialog for single-shot mutations (change password,
 * update profile, cancel card, stop cheque, request book). Two-phase money
 * flows use their own confirmation screens instead.
 */

export function confirmDialog(root: HTMLElement, message: string): Promise<boolean> {
  return new Promise((resolve) => {
    const overlay = document.createElement("div");
    overlay.className = "dialog-overlay";
    overlay.id = "confirm-dialog";

    const box = document.createElement("div");
    box.className = "dialog-box";

    const text = document.createElement("p");
    text.id = "dialog-message";
    text.textContent = message;

    const okButton = document.createElement("button");
    okButton.id = "dialog-ok";
    okButton.textContent = "OK";

    const cancelButton = document.createElement("button");
    cancelButton.id = "dialog-cancel";
    cancelButton.textContent = "Cancel";

    const finish = (answer: boolean) => {
      overlay.remove();
      resolve(answer);
    };
    okButton.addEventListener("click", () => finish(true));
    cancelButton.addEventListener("click", () => finish(false));

    box.append(text, okButton, cancelButton);
    overlay.append(box);
    root.append(overlay);
  });
}
