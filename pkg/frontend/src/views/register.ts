// Registration form: posts a registration event and renders the report.

import { ApiError, InventoryApi, RegistrationInput, RegistrationReport } from "../api.js";
import { badge, clear, el } from "../dom.js";

export class RegisterView {
  constructor(
    private readonly api: InventoryApi,
    private readonly onRegistered: () => void,
  ) {}

  render(root: HTMLElement): void {
    clear(root);
    const result = el("div", {});
    root.append(
      el(
        "section",
        { class: "section" },
        el("h2", {}, "Register a platform"),
        this.form(result),
      ),
      result,
    );
  }

  private field(
    label: string,
    name: string,
    attrs: Record<string, string> = {},
  ): { group: HTMLElement; input: HTMLInputElement; error: HTMLElement } {
    const input = el("input", { type: "text", name, ...attrs }) as HTMLInputElement;
    const error = el("div", { class: "field-error", "data-error-for": name });
    const group = el("div", { class: "form-group" }, el("label", {}, label), input, error);
    return { group, input, error };
  }

  private form(result: HTMLElement): HTMLElement {
    const name = this.field("Platform name *", "platformName");
    const vendor = this.field("Vendor", "vendor");
    const model = this.field("Model", "model");
    const host = this.field("Host *", "host", { placeholder: "127.0.0.1" });
    const port = this.field("Port *", "port", { placeholder: "8300" });
    const username = this.field("Username (netconf-ssh / gnmi)", "username");
    const password = this.field("Password", "password", { type: "password" });

    const transport = el("select", { name: "transport" }) as HTMLSelectElement;
    for (const kind of ["netconf-tcp", "netconf-ssh", "gnmi"]) {
      transport.append(el("option", { value: kind }, kind));
    }
    const tls = el("input", { type: "checkbox", name: "tls" }) as HTMLInputElement;

    const submit = el("button", { class: "btn btn-primary", type: "submit" }, "Register");
    const form = el(
      "form",
      {
        onsubmit: (event) => {
          event.preventDefault();
          void this.submit();
        },
      },
      el("div", { class: "form-row" }, name.group, vendor.group),
      el("div", { class: "form-row" }, model.group, el("div", { class: "form-group" }, el("label", {}, "Transport"), transport)),
      el("div", { class: "form-row" }, host.group, port.group),
      el("div", { class: "form-row" }, username.group, password.group),
      el("div", { class: "form-group" }, el("label", {}, el("span", {}, "TLS (gnmi) ")), tls),
      submit,
    ) as HTMLFormElement;

    this.submit = async () => {
      for (const field of [name, host, port]) field.error.textContent = "";
      clear(result);

      let valid = true;
      if (!name.input.value.trim()) {
        name.error.textContent = "platform name is required";
        valid = false;
      }
      if (!host.input.value.trim()) {
        host.error.textContent = "host is required";
        valid = false;
      }
      const portNumber = Number(port.input.value);
      if (!Number.isInteger(portNumber) || portNumber < 1 || portNumber > 65535) {
        port.error.textContent = "port must be 1-65535";
        valid = false;
      }
      if (!valid) return;

      const event: RegistrationInput = {
        platformName: name.input.value.trim(),
        vendor: vendor.input.value.trim() || null,
        model: model.input.value.trim() || null,
        connections: [
          {
            transport: transport.value,
            host: host.input.value.trim(),
            port: portNumber,
            username: username.input.value || null,
            password: password.input.value || null,
            tls: tls.checked,
          },
        ],
      };
      submit.setAttribute("disabled", "");
      try {
        const report = await this.api.register(event);
        result.append(reportCard(report));
        this.onRegistered();
      } catch (error) {
        if (error instanceof ApiError) {
          result.append(
            el(
              "div",
              { class: "report-card error", "data-testid": "register-error" },
              `registration failed: ${error.detail}`,
            ),
          );
        } else {
          throw error;
        }
      } finally {
        submit.removeAttribute("disabled");
      }
    };
    return form;
  }

  // bound during form construction so tests can trigger it via submit events
  private submit: () => Promise<void> = async () => {};
}

export function reportCard(report: RegistrationReport): HTMLElement {
  const counts = report.counts;
  const card = el(
    "div",
    { class: "report-card", "data-testid": "register-report" },
    el("div", {}, "registered ", el("strong", {}, report.platformId), " ", badge(`mode: ${report.mode}`, "mode")),
    el(
      "div",
      { class: "counts" },
      `${counts.datastores} datastores, ${counts.schemas} schemas, ${counts.moduleSets} module sets, ` +
        `${counts.modules} modules, ${counts.submodules} submodules`,
    ),
  );
  for (const warning of report.warnings) {
    card.append(el("div", { class: "field-error" }, `warning: ${warning}`));
  }
  return card;
}
