"""Composition of the inventory service: one app, one store, all surfaces."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI
from fastapi.staticfiles import StaticFiles

from . import __version__
from .catalog.api import create_catalog_router
from .catalog.connector import CatalogConnector, ConnectorConfig
from .context.api import create_graph_router, create_ngsild_router
from .context.store import ContextStore
from .inventory.api import create_inventory_router
from .inventory.service import InventoryService
from .registry.api import create_registry_router
from .registry.service import PlatformRegistry


class InventoryApp:
    """Owns the store and the long-lived components of one service process."""

    def __init__(
        self,
        data_dir: str | Path | None = None,
        catalog_config: ConnectorConfig | None = None,
        ui_dir: str | Path | None = None,
    ):
        self.store = ContextStore(data_dir)
        self.registry = PlatformRegistry(self.store)
        self.inventory = InventoryService(self.store)
        self.catalog = CatalogConnector(self.store, catalog_config)
        self.ui_dir = Path(ui_dir) if ui_dir else None

    def build(self) -> FastAPI:
        app = FastAPI(title="netinv", version=__version__)
        app.include_router(create_ngsild_router(self.store))
        app.include_router(create_graph_router(self.store))
        app.include_router(create_registry_router(self.registry))
        app.include_router(create_catalog_router(self.catalog))
        app.include_router(create_inventory_router(self.inventory))

        @app.get("/health")
        def health():
            return {"status": "ok", "version": __version__}

        ui_dir = self.ui_dir or _bundled_ui_dir()
        if ui_dir is not None and ui_dir.is_dir():
            app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        app.state.netinv = self
        return app

    def start_background_tasks(self) -> None:
        self.catalog.start_scheduler()

    def shutdown(self) -> None:
        self.catalog.stop_scheduler()
        self.store.snapshot()
        self.store.close()


def _bundled_ui_dir() -> Path | None:
    """The frontend build output, when running from a repo checkout."""
    import os

    env = os.environ.get("NETINV_UI_DIR")
    candidates = [Path(env)] if env else []
    here = Path(__file__).resolve()
    if len(here.parents) >= 3:
        candidates.append(here.parents[2] / "frontend" / "dist")  # src layout checkout
    candidates.append(Path.cwd() / "frontend" / "dist")
    for candidate in candidates:
        if candidate.is_dir():
            return candidate
    return None


def create_app(
    data_dir: str | Path | None = None,
    catalog_config: ConnectorConfig | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    return InventoryApp(data_dir=data_dir, catalog_config=catalog_config, ui_dir=ui_dir).build()
