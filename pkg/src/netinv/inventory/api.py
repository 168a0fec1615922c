"""HTTP surface of the inventory read-side queries."""

from __future__ import annotations

from fastapi import APIRouter

from ..context.api import error_response
from .service import InventoryService


def create_inventory_router(service: InventoryService) -> APIRouter:
    router = APIRouter(prefix="/inventory")

    @router.get("/platforms")
    def platforms():
        return service.list_platforms()

    @router.get("/platforms/{name}/datastores")
    def datastores(name: str):
        try:
            return service.list_datastores(name)
        except Exception as exc:
            return error_response(exc)

    @router.get("/platforms/{name}/modules")
    def modules(name: str, match: str = ".*"):
        try:
            return service.find_modules(name, match)
        except Exception as exc:
            return error_response(exc)

    @router.get("/platforms/{name}/protocols")
    def protocols(name: str):
        try:
            return service.protocol_details(name)
        except Exception as exc:
            return error_response(exc)

    @router.get("/modules/{name}/{revision}")
    def module_info(name: str, revision: str):
        try:
            return service.module_info(name, _revision(revision))
        except Exception as exc:
            return error_response(exc)

    @router.get("/modules/{name}/{revision}/dependencies")
    def dependencies(name: str, revision: str, depth: int = 1):
        try:
            return service.dependency_graph(name, _revision(revision), depth)
        except Exception as exc:
            return error_response(exc)

    return router


def _revision(raw: str) -> str | None:
    return None if raw in ("unknown", "-") else raw
