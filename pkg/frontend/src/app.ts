// Application shell: tabs, error banner with retry, view wiring.

import { InventoryApi } from "./api.js";
import { ViewState } from "./state.js";
import { clear, el } from "./dom.js";
import { ExplorerView } from "./views/explorer.js";
import { SearchView } from "./views/search.js";
import { RegisterView } from "./views/register.js";

export type TabName = "explorer" | "search" | "register";

export class App {
  readonly state = new ViewState();
  private readonly api: InventoryApi;
  private tab: TabName = "explorer";
  private readonly main = el("div", { class: "container" });
  private readonly bannerSlot = el("div", {});
  private readonly tabsBar = el("div", { class: "nav-tabs" });

  constructor(
    private readonly root: HTMLElement,
    baseUrl = "",
  ) {
    this.api = new InventoryApi(baseUrl);
  }

  mount(): Promise<void> {
    clear(this.root);
    this.root.append(
      el(
        "div",
        { class: "header" },
        el("h1", {}, "Network Inventory Browser"),
        el("p", {}, "what YANG data exists on a platform, and how to stream it"),
        this.tabsBar,
      ),
      el("div", { class: "container" }, this.bannerSlot),
      this.main,
    );
    this.renderTabs();
    return this.show(this.tab);
  }

  async show(tab: TabName): Promise<void> {
    this.tab = tab;
    this.renderTabs();
    clear(this.bannerSlot);
    clear(this.main);
    try {
      if (tab === "explorer") {
        await new ExplorerView(this.api, this.state, () => void this.show("register")).render(this.main);
      } else if (tab === "search") {
        await new SearchView(this.api, this.state).render(this.main);
      } else {
        new RegisterView(this.api, () => undefined).render(this.main);
      }
    } catch (error) {
      this.showBanner(error, tab);
    }
  }

  private renderTabs(): void {
    clear(this.tabsBar);
    const tabs: [TabName, string][] = [
      ["explorer", "Explorer"],
      ["search", "Module search"],
      ["register", "Register"],
    ];
    for (const [name, label] of tabs) {
      this.tabsBar.append(
        el(
          "button",
          {
            class: name === this.tab ? "nav-tab active" : "nav-tab",
            "data-tab": name,
            onclick: () => void this.show(name),
          },
          label,
        ),
      );
    }
  }

  private showBanner(error: unknown, tab: TabName): void {
    clear(this.bannerSlot);
    const message = error instanceof Error ? error.message : String(error);
    this.bannerSlot.append(
      el(
        "div",
        { class: "banner", "data-testid": "error-banner" },
        el("span", {}, `service unreachable or failing: ${message}`),
        el("button", { onclick: () => void this.show(tab) }, "Retry"),
      ),
    );
  }
}

declare global {
  interface Window {
    netinvApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app")!);
  window.netinvApp = app;
  void app.mount();
}
