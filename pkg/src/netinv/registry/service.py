"""Platform registration: discovery, mapping-path selection, graph writes.

The mapping path is picked per connection outcome in priority order
NMDA yang-library, legacy modules-state, hello fallback. Writes are staged
and applied as one batch so a failed registration leaves no trace.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..context.model import Entity
from ..context.store import ContextStore
from ..errors import NotFoundError, RegistrationFailure, ValidationError
from ..gnmi.client import gnmi_discover
from ..ids import encode_segment, platform_urn, urn_type
from ..netconf.client import CapabilityDiscovery, ConnectionSpec, netconf_discover
from ..platform.mappers import (
    map_hello_fallback,
    map_modules_state,
    map_platform,
    map_yang_library_nmda,
)
from ..platform.model import (
    ModuleImplementation,
    ModulesStateDocument,
    PlatformInfo,
    YangLibraryDocument,
)

log = logging.getLogger(__name__)

PLATFORM_SCOPED_TYPES = ("Protocol", "Datastore", "Schema", "ModuleSet")

MODE_NMDA = "nmda"
MODE_NON_NMDA = "non-nmda"
MODE_FALLBACK = "fallback"


@dataclass
class RegistrationEvent:
    platform_name: str
    connections: list[ConnectionSpec]
    vendor: str | None = None
    model: str | None = None

    def validate(self) -> None:
        if not self.platform_name:
            raise ValidationError("platformName must be non-empty")
        if not self.connections:
            raise ValidationError("at least one connection is required")
        for spec in self.connections:
            spec.validate()

    @classmethod
    def from_json(cls, data: dict) -> "RegistrationEvent":
        if not isinstance(data, dict):
            raise ValidationError("registration event must be a JSON object")
        connections = data.get("connections")
        if not isinstance(connections, list) or not connections:
            raise ValidationError("connections must be a non-empty array")
        event = cls(
            platform_name=data.get("platformName") or "",
            connections=[ConnectionSpec.from_json(c) for c in connections],
            vendor=data.get("vendor"),
            model=data.get("model"),
        )
        event.validate()
        return event


@dataclass
class RegistrationReport:
    platform_id: str
    mode: str
    per_protocol: list[dict] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def check(self) -> None:
        # nmda mode and datastore presence imply each other
        has_datastores = self.counts.get("datastores", 0) >= 1
        if (self.mode == MODE_NMDA) != has_datastores:
            raise ValidationError(
                f"inconsistent report: mode={self.mode} with {self.counts.get('datastores', 0)} datastores"
            )

    def to_json(self) -> dict:
        return {
            "platformId": self.platform_id,
            "mode": self.mode,
            "perProtocol": self.per_protocol,
            "counts": self.counts,
            "warnings": self.warnings,
        }


def _protocol_kind(spec: ConnectionSpec) -> str:
    return "gnmi" if spec.transport == "gnmi" else "netconf"


def _discover(spec: ConnectionSpec) -> CapabilityDiscovery:
    if spec.transport == "gnmi":
        return gnmi_discover(spec)
    return netconf_discover(spec)


class PlatformRegistry:
    def __init__(self, store: ContextStore):
        self._store = store
        self._events: dict[str, RegistrationEvent] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _name_lock(self, name: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(name, threading.Lock())

    # -- registration ---------------------------------------------------------

    def register(self, event: RegistrationEvent) -> RegistrationReport:
        event.validate()
        with self._name_lock(event.platform_name):
            report = self._register_locked(event)
            self._events[event.platform_name] = event
            return report

    def refresh(self, platform_name: str) -> RegistrationReport:
        event = self._events.get(platform_name)
        if event is None:
            raise NotFoundError(f"platform {platform_name!r} has no remembered registration")
        return self.register(event)

    def registered_event(self, platform_name: str) -> RegistrationEvent | None:
        return self._events.get(platform_name)

    def _register_locked(self, event: RegistrationEvent) -> RegistrationReport:
        discoveries, per_protocol, warnings = self._run_discoveries(event)
        if not discoveries:
            failures = "; ".join(p["outcome"] for p in per_protocol)
            raise RegistrationFailure(f"all connections failed: {failures}")

        platform_id = platform_urn(event.platform_name)
        mode, mapped = self._map_discoveries(platform_id, discoveries)
        info = PlatformInfo(name=event.platform_name, vendor=event.vendor, model=event.model)
        base_entities = map_platform(info, [d.protocol for _, d in discoveries])
        entities = base_entities + mapped
        self._apply(event.platform_name, entities, warnings)

        counts = {"datastores": 0, "schemas": 0, "moduleSets": 0, "modules": 0, "submodules": 0}
        keys = {
            "Datastore": "datastores",
            "Schema": "schemas",
            "ModuleSet": "moduleSets",
            "Module": "modules",
            "Submodule": "submodules",
        }
        for entity in mapped:
            key = keys.get(entity.type)
            if key:
                counts[key] += 1
        report = RegistrationReport(
            platform_id=platform_id,
            mode=mode,
            per_protocol=per_protocol,
            counts=counts,
            warnings=warnings,
        )
        report.check()
        return report

    def _run_discoveries(self, event: RegistrationEvent):
        results: list[tuple[ConnectionSpec, CapabilityDiscovery]] = []
        per_protocol: list[dict] = []
        warnings: list[str] = []
        with ThreadPoolExecutor(max_workers=min(4, len(event.connections))) as pool:
            futures = [(spec, pool.submit(_discover, spec)) for spec in event.connections]
            for spec, future in futures:
                endpoint = f"{spec.host}:{spec.port}"
                try:
                    discovery = future.result()
                except Exception as exc:
                    per_protocol.append(
                        {"kind": _protocol_kind(spec), "endpoint": endpoint, "outcome": str(exc)}
                    )
                    warnings.append(f"{_protocol_kind(spec)} {endpoint}: {exc}")
                    continue
                results.append((spec, discovery))
                per_protocol.append(
                    {"kind": _protocol_kind(spec), "endpoint": endpoint, "outcome": "ok"}
                )
        return results, per_protocol, warnings

    def _map_discoveries(
        self, platform_id: str, discoveries: list[tuple[ConnectionSpec, CapabilityDiscovery]]
    ) -> tuple[str, list[Entity]]:
        netconf_results = [d for s, d in discoveries if s.transport != "gnmi"]
        gnmi_results = [d for s, d in discoveries if s.transport == "gnmi"]

        mode = MODE_FALLBACK
        mapped: list[Entity] = []
        mapped_names: set[str] = set()
        for discovery in netconf_results:
            doc = discovery.yang_library
            if isinstance(doc, YangLibraryDocument) and doc.datastores:
                mode = MODE_NMDA
                mapped = map_yang_library_nmda(platform_id, doc)
                break
        if mode == MODE_FALLBACK:
            for discovery in netconf_results:
                doc = discovery.yang_library
                if isinstance(doc, YangLibraryDocument) and not doc.datastores:
                    # degenerate library without datastores: the device is not
                    # NMDA-usable, so flatten its module sets onto the legacy path
                    doc = ModulesStateDocument(
                        modules=[m for ms in doc.module_sets for m in ms.modules]
                    )
                if isinstance(doc, ModulesStateDocument):
                    mode = MODE_NON_NMDA
                    mapped = map_modules_state(platform_id, doc)
                    break
        if mode == MODE_FALLBACK:
            fallback: list[ModuleImplementation] = []
            seen = set()
            for discovery in netconf_results + gnmi_results:
                for impl in discovery.hello_modules:
                    if impl.identifier.key not in seen:
                        seen.add(impl.identifier.key)
                        fallback.append(impl)
            mapped = map_hello_fallback(platform_id, fallback)
        else:
            mapped_names = {
                e.first_value("name") for e in mapped if e.type in ("Module", "Submodule")
            }
            # gNMI cannot express YANG revisions, so "already covered" means the
            # module name appears in the NETCONF-derived result
            extras: list[ModuleImplementation] = []
            seen = set()
            for discovery in gnmi_results:
                for impl in discovery.hello_modules:
                    if impl.identifier.name in mapped_names or impl.identifier.key in seen:
                        continue
                    seen.add(impl.identifier.key)
                    extras.append(impl)
            if extras:
                mapped = mapped + map_hello_fallback(platform_id, extras)
        return mode, mapped

    # -- graph writes -----------------------------------------------------------

    def _scoped_prefixes(self, platform_name: str) -> dict[str, str]:
        enc = encode_segment(platform_name)
        return {t: f"urn:ngsi-ld:{t}:{enc}:" for t in PLATFORM_SCOPED_TYPES}

    def _existing_scoped_ids(self, platform_name: str) -> list[str]:
        prefixes = self._scoped_prefixes(platform_name).values()
        return [
            eid
            for eid in self._store.entity_ids()
            if any(eid.startswith(prefix) for prefix in prefixes)
        ]

    def _apply(self, platform_name: str, entities: list[Entity], warnings: list[str]) -> None:
        existing_scoped = set(self._existing_scoped_ids(platform_name))
        old_set_urns = {eid for eid in existing_scoped if urn_type(eid) == "ModuleSet"}
        new_ids = {entity.id for entity in entities}

        new_instance_index: set[tuple[str, str]] = set()
        for entity in entities:
            for inst in entity.attributes.get("belongsTo", []):
                new_instance_index.add((entity.id, inst.dataset_id))

        self._resolve_namespace_conflicts(entities, warnings)
        self._store.batch_upsert(entities, mode="merge")

        # a module listed by a real device is no longer a mere placeholder,
        # even if an earlier catalog sync materialized it as one
        for entity in entities:
            if entity.type in ("Module", "Submodule") and "placeholder" not in entity.attributes:
                self._store.drop_attribute_instance(entity.id, "placeholder", None)

        for stale_id in sorted(existing_scoped - new_ids):
            self._store.delete_entity(stale_id)

        # belongsTo instances keyed to this platform's sets but absent from the
        # new mapping are stale (module disappeared from the device)
        if old_set_urns:
            for entity in self._store.query_all(type="Module") + self._store.query_all(type="Submodule"):
                for inst in entity.attributes.get("belongsTo", []):
                    key = (entity.id, inst.dataset_id)
                    if inst.dataset_id in old_set_urns and key not in new_instance_index:
                        self._store.drop_attribute_instance(entity.id, "belongsTo", inst.dataset_id)

    def _resolve_namespace_conflicts(self, entities: list[Entity], warnings: list[str]) -> None:
        for entity in entities:
            if entity.type not in ("Module", "Submodule") or "namespace" not in entity.attributes:
                continue
            try:
                stored = self._store.get_entity(entity.id)
            except NotFoundError:
                continue
            stored_ns = stored.first_value("namespace")
            new_ns = entity.first_value("namespace")
            if stored_ns is not None and new_ns is not None and stored_ns != new_ns:
                del entity.attributes["namespace"]
                warning = (
                    f"namespace conflict for {entity.id}: keeping {stored_ns!r}, ignoring {new_ns!r}"
                )
                warnings.append(warning)
                log.warning(warning)

    # -- deregistration -----------------------------------------------------------

    def deregister(self, platform_name: str) -> int:
        with self._name_lock(platform_name):
            platform_id = platform_urn(platform_name)
            if not self._store.has_entity(platform_id):
                raise NotFoundError(f"platform {platform_name!r} is not registered")
            scoped = self._existing_scoped_ids(platform_name)
            set_urns = {eid for eid in scoped if urn_type(eid) == "ModuleSet"}
            for eid in scoped:
                self._store.delete_entity(eid)
            self._store.delete_entity(platform_id)
            if set_urns:
                for entity in self._store.query_all(type="Module") + self._store.query_all(type="Submodule"):
                    for inst in entity.attributes.get("belongsTo", []):
                        if inst.dataset_id in set_urns:
                            self._store.drop_attribute_instance(
                                entity.id, "belongsTo", inst.dataset_id
                            )
            self._events.pop(platform_name, None)
            return len(scoped) + 1
