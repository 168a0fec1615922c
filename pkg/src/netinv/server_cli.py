"""netinv-server: run the inventory service."""

from __future__ import annotations

import logging
import os

import click
import uvicorn

from .catalog.connector import ConnectorConfig
from .service import InventoryApp


@click.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, type=int, show_default=True)
@click.option("--data-dir", default=None, help="Durable store directory (default: in-memory).")
@click.option(
    "--catalog-url",
    default=None,
    help="External catalog base URL; enables the scheduled connector. Env: CATALOG_URL.",
)
@click.option(
    "--catalog-interval",
    default=None,
    type=float,
    help="Catalog sync interval in seconds (default 86400). Env: CATALOG_INTERVAL.",
)
@click.option("--ui-dir", default=None, help="Directory of built frontend assets to serve at /ui.")
@click.option("--verbose", is_flag=True)
def main(host, port, data_dir, catalog_url, catalog_interval, ui_dir, verbose) -> None:
    """Start the semantic network inventory service."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    catalog_url = catalog_url or os.environ.get("CATALOG_URL")
    if catalog_interval is None:
        env_interval = os.environ.get("CATALOG_INTERVAL")
        catalog_interval = float(env_interval) if env_interval else 24 * 3600.0
    catalog_config = None
    if catalog_url:
        catalog_config = ConnectorConfig(base_url=catalog_url, interval=catalog_interval)
        catalog_config.validate()
    service = InventoryApp(data_dir=data_dir, catalog_config=catalog_config, ui_dir=ui_dir)
    app = service.build()
    service.start_background_tasks()
    try:
        uvicorn.run(app, host=host, port=port, log_level="info" if verbose else "warning")
    finally:
        service.shutdown()


if __name__ == "__main__":
    main()
