"""Read-side convenience queries over the context graph.

Every answer here is assembled from plain context queries (query_entities and
id lookups); the service keeps no state of its own, so the NGSI-LD surface
can always reproduce these results.
"""

from __future__ import annotations

import re

from ..catalog.model import CATALOG_OWNED_ATTRIBUTES
from ..context.model import Entity
from ..context.store import ContextStore
from ..errors import NotFoundError, ValidationError
from ..ids import module_urn, module_urn_parts, platform_urn, split_urn
from ..netconf.messages import CAP_XPATH

MAX_DEPENDENCY_DEPTH = 5


def _catalog_enriched(entity: Entity) -> bool:
    return any(name in entity.attributes for name in CATALOG_OWNED_ATTRIBUTES)


def _is_placeholder(entity: Entity | None) -> bool:
    if entity is None:
        return True
    if entity.first_value("placeholder") is True:
        return True
    return entity.first_value("revisionKnown") is False


class InventoryService:
    def __init__(self, store: ContextStore):
        self._store = store

    # -- platforms ---------------------------------------------------------------

    def list_platforms(self) -> list[dict]:
        return [
            {
                "name": entity.first_value("name"),
                "vendor": entity.first_value("vendor"),
                "model": entity.first_value("model"),
                "id": entity.id,
            }
            for entity in self._store.query_all(type="Platform")
        ]

    def _platform_id(self, platform_name: str) -> str:
        urn = platform_urn(platform_name)
        if not self._store.has_entity(urn):
            raise NotFoundError(f"platform {platform_name!r} is not registered")
        return urn

    def list_datastores(self, platform_name: str) -> list[dict]:
        platform_id = self._platform_id(platform_name)
        rows = []
        for ds in self._store.query_all(type="Datastore", q=f'ofPlatform=="{platform_id}"'):
            schema_name = None
            schema_rel = ds.instance("hasSchema")
            if schema_rel is not None:
                try:
                    schema = self._store.get_entity(schema_rel.object)
                    schema_name = schema.first_value("name")
                except NotFoundError:
                    schema_name = split_urn(schema_rel.object)[1][-1]
            rows.append({"datastoreName": ds.first_value("name"), "schemaName": schema_name})
        rows.sort(key=lambda r: r["datastoreName"] or "")
        return rows

    def _platform_module_sets(self, platform_id: str) -> dict[str, str]:
        """ModuleSet URN -> set name for one platform."""
        return {
            entity.id: entity.first_value("name")
            for entity in self._store.query_all(type="ModuleSet", q=f'ofPlatform=="{platform_id}"')
        }

    def find_modules(self, platform_name: str, match: str) -> list[dict]:
        platform_id = self._platform_id(platform_name)
        try:
            pattern = re.compile(match)
        except re.error as exc:
            raise ValidationError(f"bad module regex: {exc}") from None
        sets = self._platform_module_sets(platform_id)
        rows = []
        for module in self._store.query_all(type="Module"):
            name = module.first_value("name")
            if not isinstance(name, str) or not pattern.search(name):
                continue
            for inst in module.attributes.get("belongsTo", []):
                if inst.dataset_id not in sets:
                    continue
                conformance = None
                sub = inst.sub_attributes.get("conformanceType")
                if sub:
                    conformance = sub[0].value
                rows.append(
                    {
                        "name": name,
                        "revision": module.first_value("revision"),
                        "conformanceType": conformance,
                        "moduleSet": sets[inst.dataset_id],
                        "catalogEnriched": _catalog_enriched(module),
                        "schemaUrl": module.first_value("schemaUrl"),
                        "treeType": module.first_value("treeType"),
                    }
                )
        rows.sort(key=lambda r: (r["name"], r["revision"] or "", r["moduleSet"] or ""))
        return rows

    def protocol_details(self, platform_name: str) -> list[dict]:
        platform_id = self._platform_id(platform_name)
        rows = []
        for proto in self._store.query_all(type="Protocol", q=f'ofPlatform=="{platform_id}"'):
            capabilities = proto.first_value("capabilities") or []
            rows.append(
                {
                    "kind": proto.first_value("kind"),
                    "address": proto.first_value("address"),
                    "port": proto.first_value("port"),
                    "capabilities": capabilities,
                    "encodings": proto.first_value("encodings") or [],
                    "version": proto.first_value("version"),
                    "xpathFilter": CAP_XPATH in capabilities,
                }
            )
        rows.sort(key=lambda r: (r["kind"] or "", r["port"] or 0))
        return rows

    # -- modules -------------------------------------------------------------------

    def _module_entity(self, name: str, revision: str | None) -> Entity:
        for submodule in (False, True):
            urn = module_urn(name, revision, submodule=submodule)
            if self._store.has_entity(urn):
                return self._store.get_entity(urn)
        raise NotFoundError(f"module {name}@{revision or 'unknown'} is not known")

    def module_info(self, name: str, revision: str | None) -> dict:
        entity = self._module_entity(name, revision)
        implemented_by = []
        for inst in entity.attributes.get("belongsTo", []):
            try:
                _etype, segments = split_urn(inst.dataset_id)
                platform, set_name = segments[0], segments[1]
            except (ValidationError, IndexError):
                platform, set_name = None, inst.dataset_id
            entry = {
                "platform": platform,
                "moduleSet": set_name,
                "conformanceType": None,
                "features": [],
            }
            sub = inst.sub_attributes.get("conformanceType")
            if sub:
                entry["conformanceType"] = sub[0].value
            features = inst.sub_attributes.get("features")
            if features:
                entry["features"] = features[0].value
            implemented_by.append(entry)
        implemented_by.sort(key=lambda e: (e["platform"] or "", e["moduleSet"] or ""))

        def refs(attr: str) -> list[dict]:
            out = []
            for inst in entity.attributes.get(attr, []):
                ref_name, ref_revision = module_urn_parts(inst.object)
                out.append({"name": ref_name, "revision": ref_revision})
            out.sort(key=lambda r: (r["name"], r["revision"] or ""))
            return out

        return {
            "name": entity.first_value("name"),
            "revision": entity.first_value("revision"),
            "type": entity.type,
            "namespace": entity.first_value("namespace"),
            "placeholder": entity.first_value("placeholder") is True,
            "implementedBy": implemented_by,
            "catalogEnriched": _catalog_enriched(entity),
            "organization": entity.first_value("organization"),
            "schemaUrl": entity.first_value("schemaUrl"),
            "treeType": entity.first_value("treeType"),
            "semanticVersion": entity.first_value("semanticVersion"),
            "reference": entity.first_value("reference"),
            "maturityLevel": entity.first_value("maturityLevel"),
            "moduleClassification": entity.first_value("moduleClassification"),
            "dependencies": refs("hasDependencies"),
            "dependents": refs("hasDependents"),
        }

    def dependency_graph(self, name: str, revision: str | None, depth: int = 1) -> dict:
        if not (1 <= depth <= MAX_DEPENDENCY_DEPTH):
            raise ValidationError(f"depth must be between 1 and {MAX_DEPENDENCY_DEPTH}")
        root = self._module_entity(name, revision)
        edges = []
        visited = {root.id}
        frontier = [root.id]
        for _level in range(depth):
            next_frontier: list[str] = []
            for node_id in frontier:
                try:
                    node = self._store.get_entity(node_id)
                except NotFoundError:
                    continue
                deps = sorted(
                    node.attributes.get("hasDependencies", []), key=lambda i: i.object
                )
                for inst in deps:
                    target_id = inst.object
                    target = (
                        self._store.get_entity(target_id)
                        if self._store.has_entity(target_id)
                        else None
                    )
                    src_name, src_rev = module_urn_parts(node_id)
                    dst_name, dst_rev = module_urn_parts(target_id)
                    edges.append(
                        {
                            "source": {"name": src_name, "revision": src_rev},
                            "target": {"name": dst_name, "revision": dst_rev},
                            "placeholder": _is_placeholder(target),
                        }
                    )
                    if target_id not in visited:
                        visited.add(target_id)
                        next_frontier.append(target_id)
            frontier = next_frontier
            if not frontier:
                break
        return {
            "root": {"name": name, "revision": revision},
            "depth": depth,
            "edges": edges,
        }
