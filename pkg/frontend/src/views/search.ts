// Module search with a detail pane: merged module view plus a layered
// dependency diagram, depth-capped by the view state.

import { ApiError, DependencyGraph, InventoryApi, ModuleInfo, ModuleSummary } from "../api.js";
import { MAX_DEPTH, MIN_DEPTH, ViewState } from "../state.js";
import { badge, clear, el, table } from "../dom.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class SearchView {
  constructor(
    private readonly api: InventoryApi,
    private readonly state: ViewState,
  ) {}

  async render(root: HTMLElement): Promise<void> {
    clear(root);
    if (!this.state.selectedPlatform) {
      root.append(
        el(
          "section",
          { class: "section" },
          el("div", { class: "empty-state" }, "Select a platform in the explorer first."),
        ),
      );
      return;
    }

    const results = el("div", {});
    const detail = el("div", {});
    const validation = el("div", { class: "field-error" });
    const input = el("input", {
      type: "text",
      placeholder: "regex over module names, e.g. interface",
      value: this.state.moduleSearchPattern,
      "data-testid": "module-search",
    }) as HTMLInputElement;

    const runSearch = async () => {
      this.state.moduleSearchPattern = input.value;
      validation.textContent = "";
      clear(detail);
      try {
        const rows = await this.api.modules(this.state.selectedPlatform!, input.value || ".*");
        this.renderResults(results, detail, rows);
      } catch (error) {
        clear(results);
        if (error instanceof ApiError && error.status === 400) {
          validation.textContent = error.detail; // bad regex stays inline
        } else {
          const message = error instanceof Error ? error.message : String(error);
          validation.textContent = `search failed: ${message}`;
        }
      }
    };

    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") void runSearch();
    });
    root.append(
      el(
        "section",
        { class: "section" },
        el("h2", {}, `Modules on ${this.state.selectedPlatform}`),
        el(
          "div",
          { class: "search-row" },
          input,
          el("button", { class: "btn btn-primary", onclick: () => void runSearch() }, "Search"),
        ),
        validation,
        results,
      ),
      detail,
    );
    await runSearch();
  }

  private renderResults(results: HTMLElement, detail: HTMLElement, rows: ModuleSummary[]): void {
    clear(results);
    if (rows.length === 0) {
      results.append(el("div", { class: "empty-state", "data-testid": "no-matches" }, "no matches"));
      return;
    }
    const body = rows.map((row) => {
      const tr = el(
        "tr",
        {
          class: "clickable",
          "data-module": `${row.name}@${row.revision ?? "unknown"}`,
          onclick: () => {
            this.state.selectedModule = { name: row.name, revision: row.revision };
            void this.renderDetail(detail);
          },
        },
        el("td", {}, row.name),
        el("td", {}, row.revision ?? "-"),
        el("td", {}, row.conformanceType ?? "-"),
        el("td", {}, row.moduleSet ?? "-"),
        el("td", {}, row.catalogEnriched ? badge("enriched", "on") : badge("platform only", "off")),
      );
      return tr;
    });
    const header = el(
      "tr",
      {},
      ...["Module", "Revision", "Conformance", "Module set", "Catalog"].map((h) => el("th", {}, h)),
    );
    results.append(el("table", {}, el("thead", {}, header), el("tbody", {}, ...body)));
  }

  private async renderDetail(detail: HTMLElement): Promise<void> {
    const selection = this.state.selectedModule;
    if (!selection) return;
    clear(detail);
    const [info, graph] = await Promise.all([
      this.api.moduleInfo(selection.name, selection.revision),
      this.api.dependencies(selection.name, selection.revision, this.state.dependencyDepth),
    ]);
    detail.append(
      el(
        "section",
        { class: "section", "data-testid": "module-detail" },
        el("h2", {}, `${info.name}@${info.revision ?? "unknown"}`),
        el("div", { class: "detail-grid" }, this.infoPane(info), this.dependencyPane(graph)),
      ),
    );
  }

  private infoPane(info: ModuleInfo): HTMLElement {
    const kv = el("dl", { class: "kv" });
    const add = (label: string, value: Node | string | null) => {
      if (value == null || value === "") return;
      kv.append(el("dt", {}, label), el("dd", {}, value));
    };
    add("Type", info.type);
    add("Namespace", info.namespace);
    add("Organization", info.organization);
    if (info.schemaUrl) {
      add("Schema", el("a", { href: info.schemaUrl, target: "_blank", "data-testid": "schema-link" }, info.schemaUrl));
    }
    add("Tree type", info.treeType);
    add("Semantic version", info.semanticVersion);
    add("Reference", info.reference);
    add("Maturity", info.maturityLevel);
    add(
      "Implemented by",
      info.implementedBy
        .map((entry) => `${entry.platform} via ${entry.moduleSet} (${entry.conformanceType})`)
        .join("; ") || null,
    );
    const enrichment = info.catalogEnriched
      ? badge("catalog enriched", "on")
      : badge("platform facts only", "off");
    return el("div", {}, enrichment, kv);
  }

  private dependencyPane(graph: DependencyGraph): HTMLElement {
    const depthSelect = el("select", {
      onchange: (event) => {
        this.state.dependencyDepth = Number((event.target as HTMLSelectElement).value);
        void this.renderDetailContainer();
      },
    }) as HTMLSelectElement;
    for (let depth = MIN_DEPTH; depth <= MAX_DEPTH; depth++) {
      const option = el("option", { value: String(depth) }, String(depth)) as HTMLOptionElement;
      option.selected = depth === this.state.dependencyDepth;
      depthSelect.append(option);
    }
    const pane = el(
      "div",
      {},
      el("div", { class: "form-group" }, el("label", {}, "Dependency depth "), depthSelect),
    );
    if (graph.edges.length === 0) {
      pane.append(el("div", { class: "muted" }, "no dependencies recorded"));
    } else {
      pane.append(renderDependencyDiagram(graph));
      pane.append(
        table(
          ["From", "To", ""],
          graph.edges.map((edge) => [
            document.createTextNode(`${edge.source.name}@${edge.source.revision ?? "unknown"}`),
            document.createTextNode(`${edge.target.name}@${edge.target.revision ?? "unknown"}`),
            edge.placeholder ? badge("placeholder", "off") : document.createTextNode(""),
          ]),
        ),
      );
    }
    return pane;
  }

  private renderDetailContainer(): Promise<void> {
    // depth changes re-render the detail pane in place
    const detail = document.querySelector('[data-testid="module-detail"]')?.parentElement;
    return detail ? this.renderDetail(detail as HTMLElement) : Promise.resolve();
  }
}

/** Layered node-link diagram: BFS levels as columns, edges as lines. */
export function renderDependencyDiagram(graph: DependencyGraph): SVGSVGElement {
  const key = (ref: { name: string; revision: string | null }) =>
    `${ref.name}@${ref.revision ?? "unknown"}`;
  const levels = new Map<string, number>();
  const placeholders = new Set<string>();
  levels.set(key(graph.root), 0);
  for (const edge of graph.edges) {
    const sourceLevel = levels.get(key(edge.source)) ?? 0;
    if (!levels.has(key(edge.target))) {
      levels.set(key(edge.target), sourceLevel + 1);
    }
    if (edge.placeholder) placeholders.add(key(edge.target));
  }

  const columns: string[][] = [];
  for (const [node, level] of levels) {
    (columns[level] ??= []).push(node);
  }
  const nodeWidth = 170;
  const nodeHeight = 34;
  const hGap = 60;
  const vGap = 16;
  const width = columns.length * (nodeWidth + hGap);
  const height = Math.max(...columns.map((c) => c.length)) * (nodeHeight + vGap) + vGap;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "dep-graph");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("height", String(Math.min(height, 360)));

  const defs = document.createElementNS(SVG_NS, "defs");
  const marker = document.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrow");
  marker.setAttribute("viewBox", "0 0 8 8");
  marker.setAttribute("refX", "8");
  marker.setAttribute("refY", "4");
  marker.setAttribute("markerWidth", "6");
  marker.setAttribute("markerHeight", "6");
  marker.setAttribute("orient", "auto-start-reverse");
  const tip = document.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M 0 0 L 8 4 L 0 8 z");
  tip.setAttribute("fill", "#8aa4b0");
  marker.append(tip);
  defs.append(marker);
  svg.append(defs);

  const positions = new Map<string, { x: number; y: number }>();
  columns.forEach((column, level) => {
    column.forEach((node, index) => {
      positions.set(node, {
        x: level * (nodeWidth + hGap),
        y: vGap + index * (nodeHeight + vGap),
      });
    });
  });

  for (const edge of graph.edges) {
    const from = positions.get(key(edge.source));
    const to = positions.get(key(edge.target));
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "path");
    line.setAttribute("class", "dep-edge");
    const x1 = from.x + nodeWidth;
    const y1 = from.y + nodeHeight / 2;
    const x2 = to.x;
    const y2 = to.y + nodeHeight / 2;
    line.setAttribute("d", `M ${x1} ${y1} C ${x1 + 30} ${y1}, ${x2 - 30} ${y2}, ${x2} ${y2}`);
    svg.append(line);
  }

  for (const [node, pos] of positions) {
    const group = document.createElementNS(SVG_NS, "g");
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("class", placeholders.has(node) ? "dep-node placeholder" : "dep-node");
    rect.setAttribute("x", String(pos.x));
    rect.setAttribute("y", String(pos.y));
    rect.setAttribute("rx", "6");
    rect.setAttribute("width", String(nodeWidth));
    rect.setAttribute("height", String(nodeHeight));
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "dep-label");
    label.setAttribute("x", String(pos.x + 8));
    label.setAttribute("y", String(pos.y + nodeHeight / 2 + 4));
    label.textContent = node.length > 26 ? node.slice(0, 25) + "…" : node;
    group.append(rect, label);
    svg.append(group);
  }
  return svg;
}
