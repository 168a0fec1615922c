"""netinv-sim: run simulated platforms from fixture files."""

from __future__ import annotations

import json
import logging
import signal
import threading

import click

from .fixtures import canonical_fixture, canonical_fixture_names, load_fixture
from .server import serve


@click.command()
@click.option(
    "--fixture",
    "fixtures",
    multiple=True,
    required=True,
    help="Fixture file (YAML/JSON) or a canonical name: " + ", ".join(canonical_fixture_names()),
)
@click.option("--ephemeral-ports", is_flag=True, help="Bind OS-assigned ports instead of the fixture's.")
@click.option("--verbose", is_flag=True)
def main(fixtures: tuple[str, ...], ephemeral_ports: bool, verbose: bool) -> None:
    """Serve one simulated platform per fixture until interrupted."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    handles = []
    for ref in fixtures:
        fixture = canonical_fixture(ref) if ref.lower() in canonical_fixture_names() else load_fixture(ref)
        handles.append(serve(fixture, ephemeral_ports=ephemeral_ports))
    for handle in handles:
        click.echo(json.dumps({"name": handle.fixture.name, "ports": handle.ports}))
    stop = threading.Event()
    signal.signal(signal.SIGINT, lambda *_: stop.set())
    signal.signal(signal.SIGTERM, lambda *_: stop.set())
    stop.wait()
    for handle in handles:
        handle.stop()


if __name__ == "__main__":
    main()
