"""REST surface of the embedded context store (NGSI-LD subset)."""

from __future__ import annotations

import importlib.resources
import json

from fastapi import APIRouter, Body, Query as QueryParam, Response

from ..errors import AlreadyExistsError, NotFoundError, QuerySyntaxError, ValidationError
from .model import Entity, Query
from .store import MERGE, REPLACE, ContextStore


def problem(status: int, title: str, detail: str) -> Response:
    body = {
        "type": f"urn:ngsi-ld:error:{title}",
        "title": title,
        "detail": detail,
        "status": status,
    }
    return Response(
        content=json.dumps(body), status_code=status, media_type="application/problem+json"
    )


def error_response(exc: Exception) -> Response:
    if isinstance(exc, NotFoundError):
        return problem(404, "ResourceNotFound", str(exc))
    if isinstance(exc, AlreadyExistsError):
        return problem(409, "AlreadyExists", str(exc))
    if isinstance(exc, (QuerySyntaxError, ValidationError)):
        return problem(400, "BadRequestData", str(exc))
    raise exc


def create_ngsild_router(store: ContextStore) -> APIRouter:
    router = APIRouter(prefix="/ngsi-ld/v1")

    @router.post("/entities", status_code=201)
    def create_entity(body: dict = Body(...)):
        try:
            entity = Entity.from_json(body)
            store.create_entity(entity)
        except Exception as exc:
            return error_response(exc)
        return Response(status_code=201, headers={"Location": f"/ngsi-ld/v1/entities/{entity.id}"})

    @router.post("/entityOperations/upsert", status_code=201)
    def batch_upsert(body: list = Body(...), options: str = QueryParam(default="update")):
        mode = MERGE if options == "update" else REPLACE
        try:
            entities = [Entity.from_json(item) for item in body]
            outcome = store.batch_upsert(entities, mode)
        except Exception as exc:
            return error_response(exc)
        if not outcome["created"]:
            return Response(status_code=204)
        return outcome["created"]

    @router.get("/entities")
    def query_entities(
        type: str | None = None,
        q: str | None = None,
        limit: int = 100,
        offset: int = 0,
    ):
        try:
            hits = store.query_entities(Query(type=type, q=q, limit=limit, offset=offset))
        except Exception as exc:
            return error_response(exc)
        return [entity.to_json() for entity in hits]

    @router.get("/entities/{entity_id}")
    def get_entity(entity_id: str):
        try:
            return store.get_entity(entity_id).to_json()
        except Exception as exc:
            return error_response(exc)

    @router.delete("/entities/{entity_id}", status_code=204)
    def delete_entity(entity_id: str):
        try:
            store.delete_entity(entity_id)
        except Exception as exc:
            return error_response(exc)
        return Response(status_code=204)

    @router.patch("/entities/{entity_id}/attrs", status_code=204)
    def patch_attrs(entity_id: str, body: dict = Body(...)):
        try:
            stored = store.get_entity(entity_id)
            body = dict(body)
            body["id"] = entity_id
            body["type"] = stored.type
            patch = Entity.from_json(body)
            store.patch_attributes(entity_id, patch.attributes)
        except Exception as exc:
            return error_response(exc)
        return Response(status_code=204)

    @router.get("/context.jsonld")
    def default_context():
        text = (
            importlib.resources.files("netinv.context")
            .joinpath("default_context.jsonld")
            .read_text(encoding="utf-8")
        )
        return Response(content=text, media_type="application/ld+json")

    return router


def create_graph_router(store: ContextStore) -> APIRouter:
    """Maintenance surface that is not part of the NGSI-LD subset."""
    router = APIRouter(prefix="/graph")

    @router.get("/integrity")
    def integrity():
        return [
            {"sourceEntity": src, "attributeName": attr, "danglingObject": obj}
            for src, attr, obj in store.check_referential_integrity()
        ]

    return router
