"""Embedded context store: an in-memory property graph with append-log durability.

Writes go to a JSON-lines write-ahead log; ``snapshot()`` compacts the log
into a deterministic snapshot file. Opening a store replays snapshot + log,
so a restart observes exactly the committed state. All public operations are
guarded by one lock; reads hand out deep copies, so a caller never sees a
half-applied write.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from ..errors import AlreadyExistsError, NotFoundError, ValidationError
from .model import RELATIONSHIP, Attribute, Entity, Query
from .qlang import QueryExpression, parse_q

SNAPSHOT_FILE = "snapshot.json"
WAL_FILE = "wal.jsonl"

REPLACE = "replace"
MERGE = "merge"


class ContextStore:
    def __init__(self, data_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._entities: dict[str, Entity] = {}
        self._dir = Path(data_dir) if data_dir is not None else None
        self._wal = None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load()
            self._wal = open(self._dir / WAL_FILE, "a", encoding="utf-8")

    # -- durability ---------------------------------------------------------

    def _load(self) -> None:
        snap = self._dir / SNAPSHOT_FILE
        if snap.exists():
            doc = json.loads(snap.read_text(encoding="utf-8"))
            for raw in doc.get("entities", []):
                entity = Entity.from_json(raw)
                self._entities[entity.id] = entity
        wal = self._dir / WAL_FILE
        if wal.exists():
            with open(wal, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        self._apply_record(json.loads(line))

    def _apply_record(self, record: dict) -> None:
        op = record["op"]
        if op == "upsert":
            self._do_upsert(Entity.from_json(record["entity"]), record["mode"])
        elif op == "delete":
            self._entities.pop(record["id"], None)
        elif op == "patch":
            entity = self._entities.get(record["id"])
            if entity is not None:
                patch = Entity.from_json(record["attrs"])
                for name, instances in patch.attributes.items():
                    entity.attributes[name] = instances
        elif op == "drop_instance":
            entity = self._entities.get(record["id"])
            if entity is not None:
                self._do_drop_instance(entity, record["name"], record.get("datasetId"))

    def _log(self, record: dict) -> None:
        if self._wal is not None:
            self._wal.write(json.dumps(record, separators=(",", ":")) + "\n")
            self._wal.flush()

    def snapshot(self) -> bytes:
        """Write a deterministic snapshot, truncate the log, return the bytes."""
        with self._lock:
            payload = self.canonical_bytes()
            if self._dir is not None:
                tmp = self._dir / (SNAPSHOT_FILE + ".tmp")
                tmp.write_bytes(payload)
                os.replace(tmp, self._dir / SNAPSHOT_FILE)
                self._wal.close()
                self._wal = open(self._dir / WAL_FILE, "w", encoding="utf-8")
            return payload

    def canonical_bytes(self) -> bytes:
        """Deterministic serialization of the full store (ids sorted)."""
        with self._lock:
            doc = {
                "entities": [
                    self._entities[eid].sorted_canonical() for eid in sorted(self._entities)
                ]
            }
            return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")

    def close(self) -> None:
        with self._lock:
            if self._wal is not None:
                self._wal.close()
                self._wal = None

    # -- write operations ----------------------------------------------------

    def upsert_entity(self, entity: Entity, mode: str = REPLACE) -> str:
        if mode not in (REPLACE, MERGE):
            raise ValidationError(f"unknown upsert mode {mode!r}")
        entity.validate()
        with self._lock:
            outcome = self._do_upsert(entity.copy(), mode)
            self._log({"op": "upsert", "mode": mode, "entity": entity.to_json()})
            return outcome

    def _do_upsert(self, entity: Entity, mode: str) -> str:
        existing = self._entities.get(entity.id)
        if existing is None:
            self._entities[entity.id] = entity
            return "created"
        if mode == REPLACE:
            self._entities[entity.id] = entity
            return "updated"
        if existing.type != entity.type:
            raise ValidationError(
                f"cannot merge: stored type {existing.type!r} != {entity.type!r}"
            )
        for name, instances in entity.attributes.items():
            slot = existing.attributes.setdefault(name, [])
            for inst in instances:
                for i, old in enumerate(slot):
                    if old.dataset_id == inst.dataset_id:
                        slot[i] = inst
                        break
                else:
                    slot.append(inst)
        return "updated"

    def create_entity(self, entity: Entity) -> None:
        entity.validate()
        with self._lock:
            if entity.id in self._entities:
                raise AlreadyExistsError(f"entity {entity.id} already exists")
            self.upsert_entity(entity, REPLACE)

    def batch_upsert(self, entities: list[Entity], mode: str = MERGE) -> dict[str, list[str]]:
        """Upsert many entities under one lock; readers see none or all."""
        for entity in entities:
            entity.validate()
        created: list[str] = []
        updated: list[str] = []
        with self._lock:
            for entity in entities:
                outcome = self.upsert_entity(entity, mode)
                (created if outcome == "created" else updated).append(entity.id)
        return {"created": created, "updated": updated}

    def patch_attributes(self, entity_id: str, attrs: dict[str, list[Attribute]]) -> None:
        """Replace the named attributes wholesale; other attributes untouched."""
        with self._lock:
            entity = self._entities.get(entity_id)
            if entity is None:
                raise NotFoundError(f"entity {entity_id} not found")
            patch = Entity(id=entity_id, type=entity.type, attributes=attrs)
            patch.validate()
            for name, instances in attrs.items():
                entity.attributes[name] = [inst.copy() for inst in instances]
            self._log({"op": "patch", "id": entity_id, "attrs": patch.to_json()})

    def delete_entity(self, entity_id: str) -> None:
        with self._lock:
            if entity_id not in self._entities:
                raise NotFoundError(f"entity {entity_id} not found")
            del self._entities[entity_id]
            self._log({"op": "delete", "id": entity_id})

    def drop_attribute_instance(self, entity_id: str, name: str, dataset_id: str | None) -> bool:
        """Remove one attribute instance; drops the attribute when it empties.

        Returns True when an instance was actually removed."""
        with self._lock:
            entity = self._entities.get(entity_id)
            if entity is None:
                raise NotFoundError(f"entity {entity_id} not found")
            removed = self._do_drop_instance(entity, name, dataset_id)
            if removed:
                self._log(
                    {"op": "drop_instance", "id": entity_id, "name": name, "datasetId": dataset_id}
                )
            return removed

    @staticmethod
    def _do_drop_instance(entity: Entity, name: str, dataset_id: str | None) -> bool:
        slot = entity.attributes.get(name)
        if not slot:
            return False
        kept = [inst for inst in slot if inst.dataset_id != dataset_id]
        if len(kept) == len(slot):
            return False
        if kept:
            entity.attributes[name] = kept
        else:
            del entity.attributes[name]
        return True

    # -- read operations ------------------------------------------------------

    def get_entity(self, entity_id: str) -> Entity:
        with self._lock:
            entity = self._entities.get(entity_id)
            if entity is None:
                raise NotFoundError(f"entity {entity_id} not found")
            return entity.copy()

    def has_entity(self, entity_id: str) -> bool:
        with self._lock:
            return entity_id in self._entities

    def entity_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._entities)

    def query_entities(self, query: Query) -> list[Entity]:
        query.validate()
        expr: QueryExpression | None = parse_q(query.q) if query.q else None
        with self._lock:
            hits = []
            for eid in sorted(self._entities):
                entity = self._entities[eid]
                if query.type is not None and entity.type != query.type:
                    continue
                if expr is not None and not expr.matches(entity):
                    continue
                hits.append(entity)
            page = hits[query.offset : query.offset + query.limit]
            return [entity.copy() for entity in page]

    def query_all(self, type: str | None = None, q: str | None = None) -> list[Entity]:
        """Unpaginated convenience used by in-process services."""
        results: list[Entity] = []
        offset = 0
        while True:
            page = self.query_entities(Query(type=type, q=q, limit=500, offset=offset))
            results.extend(page)
            if len(page) < 500:
                return results
            offset += 500

    def check_referential_integrity(self) -> list[tuple[str, str, str]]:
        """Every Relationship instance whose object is not a stored entity id,
        as (source entity id, dotted attribute path, dangling object)."""
        with self._lock:
            dangling: list[tuple[str, str, str]] = []

            def walk(source: str, attrs: dict[str, list[Attribute]], prefix: str) -> None:
                for name, instances in attrs.items():
                    path = f"{prefix}.{name}" if prefix else name
                    for inst in instances:
                        if inst.kind == RELATIONSHIP and inst.object not in self._entities:
                            dangling.append((source, path, inst.object))
                        walk(source, inst.sub_attributes, path)

            for eid in sorted(self._entities):
                walk(eid, self._entities[eid].attributes, "")
            return dangling
