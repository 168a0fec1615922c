"""HTTP surface of the catalog connector."""

from __future__ import annotations

from fastapi import APIRouter

from ..context.api import problem
from ..errors import ValidationError
from .connector import CatalogConnector


def create_catalog_router(connector: CatalogConnector) -> APIRouter:
    router = APIRouter(prefix="/catalog")

    @router.post("/sync")
    def sync():
        try:
            report = connector.sync()
        except ValidationError as exc:
            return problem(400, "BadRequestData", str(exc))
        return report.to_json()

    @router.get("/reports")
    def reports(limit: int = 10):
        return connector.reports(limit=limit)

    return router
