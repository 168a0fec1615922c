"""netinv: operator CLI for the inventory service.

Every subcommand is a thin client of one service endpoint; --json emits the
endpoint's body verbatim, the default rendering is a human table. Exit codes:
0 success, 1 validation error, 2 remote failure or not-found.
"""

from __future__ import annotations

import json
import sys

import click
import requests

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_REMOTE = 2

DEFAULT_SERVER = "http://127.0.0.1:8080"


class ServiceClient:
    def __init__(self, server: str, timeout: float = 30.0):
        self.server = server.rstrip("/")
        self.timeout = timeout

    def request(self, method: str, path: str, **kwargs):
        try:
            response = requests.request(
                method, self.server + path, timeout=self.timeout, **kwargs
            )
        except requests.RequestException as exc:
            click.echo(f"error: cannot reach {self.server}: {exc}", err=True)
            sys.exit(EXIT_REMOTE)
        if response.status_code >= 400:
            detail = ""
            try:
                body = response.json()
                detail = body.get("detail") or body.get("title") or ""
            except ValueError:
                detail = response.text[:200]
            click.echo(f"error: HTTP {response.status_code}: {detail}", err=True)
            sys.exit(EXIT_VALIDATION if response.status_code in (400, 409) else EXIT_REMOTE)
        return response


def render_table(rows: list[dict], columns: list[str]) -> str:
    if not rows:
        return "(no rows)"
    widths = {c: max(len(c), *(len(_cell(r.get(c))) for r in rows)) for c in columns}
    header = "  ".join(c.ljust(widths[c]) for c in columns)
    rule = "  ".join("-" * widths[c] for c in columns)
    lines = [header, rule]
    for row in rows:
        lines.append("  ".join(_cell(row.get(c)).ljust(widths[c]) for c in columns))
    return "\n".join(lines)


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    return str(value)


def emit(data, as_json: bool, human: str) -> None:
    if as_json:
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(human)


@click.group()
@click.option(
    "--server",
    "-s",
    envvar="NETINV_SERVER",
    default=DEFAULT_SERVER,
    show_default=True,
    help="Inventory service base URL. Env: NETINV_SERVER.",
)
@click.pass_context
def main(ctx: click.Context, server: str) -> None:
    """Explore and manage the semantic network inventory."""
    ctx.obj = ServiceClient(server)


def _parse_endpoint(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        click.echo(f"error: expected HOST:PORT, got {value!r}", err=True)
        sys.exit(EXIT_VALIDATION)
    return host, int(port)


@main.command()
@click.option("--name", required=True, help="Platform name (registry key).")
@click.option("--vendor", default=None)
@click.option("--model", default=None)
@click.option("--netconf-tcp", "netconf_tcp", multiple=True, metavar="HOST:PORT")
@click.option("--netconf-ssh", "netconf_ssh", multiple=True, metavar="HOST:PORT")
@click.option("--gnmi", "gnmi", multiple=True, metavar="HOST:PORT")
@click.option("--username", default=None, help="Credentials for netconf-ssh/gnmi connections.")
@click.option("--password", default=None)
@click.option("--tls", is_flag=True, help="Use TLS for gNMI connections.")
@click.option("--ca-cert", default=None, help="PEM file to verify the gNMI server certificate.")
@click.option("--timeout", default=10.0, show_default=True)
@click.option("--event-file", type=click.Path(exists=True), default=None, help="Raw RegistrationEvent JSON.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def register(client, name, vendor, model, netconf_tcp, netconf_ssh, gnmi, username, password, tls, ca_cert, timeout, event_file, as_json):
    """Register a platform: discover capabilities and populate the graph."""
    if event_file:
        with open(event_file, encoding="utf-8") as fh:
            event = json.load(fh)
    else:
        connections = []
        for value in netconf_tcp:
            host, port = _parse_endpoint(value)
            connections.append({"transport": "netconf-tcp", "host": host, "port": port, "timeout": timeout})
        for value in netconf_ssh:
            host, port = _parse_endpoint(value)
            connections.append(
                {
                    "transport": "netconf-ssh",
                    "host": host,
                    "port": port,
                    "username": username,
                    "password": password,
                    "timeout": timeout,
                }
            )
        for value in gnmi:
            host, port = _parse_endpoint(value)
            connections.append(
                {
                    "transport": "gnmi",
                    "host": host,
                    "port": port,
                    "username": username,
                    "password": password,
                    "tls": tls,
                    "caCert": ca_cert,
                    "timeout": timeout,
                }
            )
        if not connections:
            click.echo("error: at least one connection option is required", err=True)
            sys.exit(EXIT_VALIDATION)
        event = {"platformName": name, "vendor": vendor, "model": model, "connections": connections}
    report = client.request("POST", "/registry/platforms", json=event).json()
    counts = report["counts"]
    human = (
        f"registered {report['platformId']} mode={report['mode']}\n"
        f"  datastores={counts['datastores']} schemas={counts['schemas']} "
        f"moduleSets={counts['moduleSets']} modules={counts['modules']} "
        f"submodules={counts['submodules']}"
    )
    for warning in report["warnings"]:
        human += f"\n  warning: {warning}"
    emit(report, as_json, human)


@main.command()
@click.argument("platform")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def deregister(client, platform, as_json):
    """Remove a platform and its scoped entities from the graph."""
    body = client.request("DELETE", f"/registry/platforms/{platform}").json()
    emit(body, as_json, f"removed {body['removedEntities']} entities")


@main.command()
@click.argument("platform")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def datastores(client, platform, as_json):
    """List the datastores of a platform (step 1 of the discovery workflow)."""
    rows = client.request("GET", f"/inventory/platforms/{platform}/datastores").json()
    emit(rows, as_json, render_table(rows, ["datastoreName", "schemaName"]))


@main.command()
@click.argument("platform")
@click.option("--match", default=".*", show_default=True, help="Regex over module names.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def modules(client, platform, match, as_json):
    """Find the modules a platform implements (step 2)."""
    rows = client.request(
        "GET", f"/inventory/platforms/{platform}/modules", params={"match": match}
    ).json()
    emit(
        rows,
        as_json,
        render_table(
            rows,
            ["name", "revision", "conformanceType", "moduleSet", "catalogEnriched", "treeType"],
        ),
    )


@main.command()
@click.argument("platform")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def protocols(client, platform, as_json):
    """Show the management protocol endpoints of a platform (step 3)."""
    rows = client.request("GET", f"/inventory/platforms/{platform}/protocols").json()
    emit(
        rows,
        as_json,
        render_table(rows, ["kind", "address", "port", "version", "encodings", "xpathFilter"]),
    )


@main.command()
@click.argument("name")
@click.argument("revision")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def module(client, name, revision, as_json):
    """Merged platform + catalog view of one module."""
    info = client.request("GET", f"/inventory/modules/{name}/{revision}").json()
    lines = [f"{info['name']}@{info['revision'] or 'unknown'} ({info['type']})"]
    for key in (
        "namespace",
        "organization",
        "schemaUrl",
        "treeType",
        "semanticVersion",
        "reference",
        "maturityLevel",
        "moduleClassification",
    ):
        if info.get(key):
            lines.append(f"  {key}: {info[key]}")
    lines.append(f"  catalogEnriched: {_cell(info['catalogEnriched'])}")
    if info["implementedBy"]:
        lines.append("  implemented by:")
        for entry in info["implementedBy"]:
            lines.append(
                f"    {entry['platform']} via {entry['moduleSet']} ({entry['conformanceType']})"
            )
    for key in ("dependencies", "dependents"):
        if info[key]:
            refs = ", ".join(f"{r['name']}@{r['revision'] or 'unknown'}" for r in info[key])
            lines.append(f"  {key}: {refs}")
    emit(info, as_json, "\n".join(lines))


@main.command()
@click.argument("name")
@click.argument("revision")
@click.option("--depth", default=1, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def deps(client, name, revision, depth, as_json):
    """Dependency edges of a module, breadth-first up to --depth."""
    graph = client.request(
        "GET", f"/inventory/modules/{name}/{revision}/dependencies", params={"depth": depth}
    ).json()
    rows = [
        {
            "source": f"{e['source']['name']}@{e['source']['revision'] or 'unknown'}",
            "target": f"{e['target']['name']}@{e['target']['revision'] or 'unknown'}",
            "placeholder": e["placeholder"],
        }
        for e in graph["edges"]
    ]
    emit(graph, as_json, render_table(rows, ["source", "target", "placeholder"]))


@main.command(name="sync-catalog")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def sync_catalog(client, as_json):
    """Trigger one catalog synchronization run."""
    report = client.request("POST", "/catalog/sync").json()
    human = (
        f"fetched={report['fetched']} upserted={report['upserted']} "
        f"unchanged={report['unchanged']} failed={report['failed']}"
    )
    for error in report["errors"]:
        human += f"\n  error: {error}"
    emit(report, as_json, human)
    if report["errors"] and report["fetched"] == 0:
        sys.exit(EXIT_REMOTE)


@main.command(name="graph-check")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def graph_check(client, as_json):
    """Report dangling relationship targets in the context graph."""
    rows = client.request("GET", "/graph/integrity").json()
    human = "graph is clean" if not rows else render_table(
        rows, ["sourceEntity", "attributeName", "danglingObject"]
    )
    emit(rows, as_json, human)


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def platforms(client, as_json):
    """List registered platforms."""
    rows = client.request("GET", "/inventory/platforms").json()
    emit(rows, as_json, render_table(rows, ["name", "vendor", "model", "id"]))


if __name__ == "__main__":
    main()
