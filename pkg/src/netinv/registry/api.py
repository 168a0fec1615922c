"""HTTP surface of the platform registry."""

from __future__ import annotations

from fastapi import APIRouter, Body

from ..context.api import problem
from ..errors import NotFoundError, RegistrationFailure, ValidationError
from .service import PlatformRegistry, RegistrationEvent


def create_registry_router(registry: PlatformRegistry) -> APIRouter:
    router = APIRouter(prefix="/registry")

    @router.post("/platforms", status_code=201)
    def register(body: dict = Body(...)):
        try:
            event = RegistrationEvent.from_json(body)
            report = registry.register(event)
        except ValidationError as exc:
            return problem(400, "BadRequestData", str(exc))
        except RegistrationFailure as exc:
            return problem(502, "DiscoveryFailed", str(exc))
        return report.to_json()

    @router.post("/platforms/{name}/refresh")
    def refresh(name: str):
        try:
            report = registry.refresh(name)
        except NotFoundError as exc:
            return problem(404, "ResourceNotFound", str(exc))
        except RegistrationFailure as exc:
            return problem(502, "DiscoveryFailed", str(exc))
        return report.to_json()

    @router.delete("/platforms/{name}")
    def deregister(name: str):
        try:
            removed = registry.deregister(name)
        except NotFoundError as exc:
            return problem(404, "ResourceNotFound", str(exc))
        return {"removedEntities": removed}

    return router
