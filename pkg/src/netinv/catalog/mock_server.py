"""Mock external catalog: same endpoint shape, driven by a fixture file."""

from __future__ import annotations

import importlib.resources
import json
from pathlib import Path

import click
import uvicorn
from fastapi import FastAPI


def load_catalog_records(path: str | Path | None = None) -> list[dict]:
    """Records from a JSON file; default is the in-repo C-1/C-2 fixture."""
    if path is None:
        text = (
            importlib.resources.files("netinv.simulator")
            .joinpath("data", "catalog-modules.json")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    records = json.loads(text)
    if not isinstance(records, list):
        raise ValueError("catalog fixture must be a JSON array of records")
    return records


def create_mock_catalog_app(records: list[dict]) -> FastAPI:
    app = FastAPI(title="mock-yang-catalog")

    @app.get("/api/search/modules")
    def search_modules(limit: int = 500, offset: int = 0):
        return {"modules": records[offset : offset + limit]}

    return app


@click.command()
@click.option("--data", type=click.Path(exists=True), default=None, help="JSON file of catalog records.")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8500, type=int)
def main(data: str | None, host: str, port: int) -> None:
    """Serve the mock catalog until interrupted."""
    app = create_mock_catalog_app(load_catalog_records(data))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
