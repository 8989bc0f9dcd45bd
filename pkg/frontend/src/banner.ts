// Dismissible error banner; API failures surface here and never mutate state.

export function showBanner(container: HTMLElement, message: string): void {
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");

  const text = document.createElement("span");
  text.textContent = message;
  banner.appendChild(text);

  const dismiss = document.createElement("button");
  dismiss.className = "banner-dismiss";
  dismiss.textContent = "×";
  dismiss.addEventListener("click", () => banner.remove());
  banner.appendChild(dismiss);

  container.appendChild(banner);
}
