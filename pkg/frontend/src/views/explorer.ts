// Platform explorer: list of registered platforms with a drill-down into
// protocols, datastores (or the non-NMDA notice), and module sets.

import { InventoryApi, PlatformRow } from "../api.js";
import { ViewState } from "../state.js";
import { badge, clear, el, table } from "../dom.js";

export class ExplorerView {
  constructor(
    private readonly api: InventoryApi,
    private readonly state: ViewState,
    private readonly goToRegister: () => void,
  ) {}

  async render(root: HTMLElement): Promise<void> {
    clear(root);
    const platforms = await this.api.listPlatforms();
    if (platforms.length === 0) {
      root.append(this.emptyState());
      return;
    }
    const detail = el("div", {});
    const cards = el(
      "div",
      { class: "cards" },
      ...platforms.map((platform) => this.platformCard(platform, detail)),
    );
    root.append(el("section", { class: "section" }, el("h2", {}, "Platforms"), cards), detail);
    const selected =
      platforms.find((p) => p.name === this.state.selectedPlatform) ?? null;
    if (selected) {
      await this.renderDetail(detail, selected);
      this.markSelected(cards, selected.name);
    }
  }

  private emptyState(): HTMLElement {
    const link = el("a", { onclick: () => this.goToRegister() }, "register a platform");
    return el(
      "section",
      { class: "section" },
      el("div", { class: "empty-state" }, "No platforms in the inventory yet. ", link, " to get started."),
    );
  }

  private platformCard(platform: PlatformRow, detail: HTMLElement): HTMLElement {
    const subtitle = [platform.vendor, platform.model].filter(Boolean).join(" ") || platform.id;
    const card = el(
      "div",
      {
        class: "card",
        "data-platform": platform.name,
        onclick: async () => {
          this.state.selectPlatform(platform.name);
          this.markSelected(card.parentElement as HTMLElement, platform.name);
          await this.renderDetail(detail, platform);
        },
      },
      el("div", { class: "title" }, platform.name),
      el("div", { class: "sub" }, subtitle),
    );
    return card;
  }

  private markSelected(cards: HTMLElement, name: string): void {
    for (const card of Array.from(cards.querySelectorAll(".card"))) {
      card.classList.toggle("selected", card.getAttribute("data-platform") === name);
    }
  }

  private async renderDetail(detail: HTMLElement, platform: PlatformRow): Promise<void> {
    clear(detail);
    const [protocols, datastores, moduleSets] = await Promise.all([
      this.api.protocols(platform.name),
      this.api.datastores(platform.name),
      this.api.moduleSets(platform.id),
    ]);

    const protocolRows = protocols.map((proto) => [
      document.createTextNode(proto.kind),
      document.createTextNode(`${proto.address}:${proto.port}`),
      document.createTextNode(proto.version ?? "-"),
      document.createTextNode(proto.encodings.join(", ") || "-"),
      proto.xpathFilter ? badge("xpath filter", "on") : badge("subtree only", "off"),
    ]);

    const datastoreSection =
      datastores.length > 0
        ? table(
            ["Datastore", "Schema"],
            datastores.map((ds) => [
              document.createTextNode(ds.datastoreName),
              document.createTextNode(ds.schemaName ?? "-"),
            ]),
          )
        : el(
            "div",
            { class: "notice", "data-testid": "non-nmda-notice" },
            "non-NMDA platform: no separate datastores are exposed",
          );

    detail.append(
      el(
        "section",
        { class: "section", "data-testid": "platform-detail" },
        el("h2", {}, `Protocols of ${platform.name}`),
        protocols.length ? table(["Kind", "Endpoint", "Version", "Encodings", "Filtering"], protocolRows) : el("div", { class: "muted" }, "no protocols recorded"),
      ),
      el(
        "section",
        { class: "section" },
        el("h2", {}, "Datastores"),
        datastoreSection,
      ),
      el(
        "section",
        { class: "section" },
        el("h2", {}, "Module sets"),
        moduleSets.length
          ? el("div", {}, ...moduleSets.map((name) => badge(name, "mode")))
          : el("div", { class: "muted" }, "no module sets recorded"),
      ),
    );
  }
}
