"""Pure mappers from device-reported data to context-graph entities.

Module and Submodule entities are global (one per name+revision); everything
else is scoped to the platform through its URN. Implementation details live
on the Module's belongsTo instances, keyed by the owning ModuleSet URN.
"""

from __future__ import annotations

from ..context.model import Attribute, Entity
from ..errors import ValidationError
from ..ids import (
    datastore_urn,
    module_set_urn,
    module_urn,
    platform_urn,
    protocol_urn,
    schema_urn,
    split_urn,
)
from .model import (
    ModuleIdentifier,
    ModuleImplementation,
    ModulesStateDocument,
    PlatformInfo,
    ProtocolInfo,
    YangLibraryDocument,
    revision_is_date,
)

LEGACY_MODULE_SET = "modules-state"
FALLBACK_MODULE_SET = "hello"


def map_platform(info: PlatformInfo, protocols: list[ProtocolInfo]) -> list[Entity]:
    info.validate()
    platform = Entity(
        id=platform_urn(info.name),
        type="Platform",
        attributes={"name": [Attribute.property(info.name)]},
    )
    if info.vendor:
        platform.attributes["vendor"] = [Attribute.property(info.vendor)]
    if info.model:
        platform.attributes["model"] = [Attribute.property(info.model)]
    entities = [platform]
    for proto in protocols:
        proto.validate()
        ent = Entity(
            id=protocol_urn(info.name, proto.kind, proto.host, proto.port),
            type="Protocol",
            attributes={
                "kind": [Attribute.property(proto.kind)],
                "address": [Attribute.property(proto.host)],
                "port": [Attribute.property(proto.port)],
                "ofPlatform": [Attribute.relationship(platform.id)],
            },
        )
        if proto.capabilities:
            ent.attributes["capabilities"] = [Attribute.property(list(proto.capabilities))]
        if proto.encodings:
            ent.attributes["encodings"] = [Attribute.property(list(proto.encodings))]
        if proto.version:
            ent.attributes["version"] = [Attribute.property(proto.version)]
        entities.append(ent)
    return entities


class _ModuleAccumulator:
    """Collects global Module/Submodule entities while sets are mapped."""

    def __init__(self) -> None:
        self.modules: dict[str, Entity] = {}
        self.submodules: dict[str, Entity] = {}
        self.deviation_refs: list[ModuleIdentifier] = []

    def _identity_attributes(self, ident: ModuleIdentifier) -> dict[str, list[Attribute]]:
        attrs = {"name": [Attribute.property(ident.name)]}
        if ident.revision:
            attrs["revision"] = [Attribute.property(ident.revision)]
            if not revision_is_date(ident.revision):
                attrs["revisionKnown"] = [Attribute.property(False)]
        else:
            attrs["revisionKnown"] = [Attribute.property(False)]
        if ident.namespace:
            attrs["namespace"] = [Attribute.property(ident.namespace)]
        return attrs

    def module_entity(self, ident: ModuleIdentifier) -> Entity:
        urn = module_urn(ident.name, ident.revision)
        entity = self.modules.get(urn)
        if entity is None:
            entity = Entity(id=urn, type="Module", attributes=self._identity_attributes(ident))
            self.modules[urn] = entity
        elif ident.namespace and "namespace" not in entity.attributes:
            entity.attributes["namespace"] = [Attribute.property(ident.namespace)]
        return entity

    def add_implementation(self, impl: ModuleImplementation, set_urn: str) -> None:
        entity = self.module_entity(impl.identifier)
        if entity.instance("belongsTo", set_urn) is not None:
            return  # duplicate advertisement within one set
        subs: dict[str, list[Attribute]] = {
            "conformanceType": [Attribute.property(impl.conformance_type)]
        }
        if impl.features:
            subs["features"] = [Attribute.property(list(impl.features))]
        if impl.organization:
            subs["organization"] = [Attribute.property(impl.organization)]
        if impl.deviations:
            subs["deviatedBy"] = []
            for dev in impl.deviations:
                dev_urn = module_urn(dev.name, dev.revision)
                subs["deviatedBy"].append(Attribute.relationship(dev_urn, dataset_id=dev_urn))
                self.deviation_refs.append(dev)
        instance = Attribute(
            kind="Relationship", object=set_urn, dataset_id=set_urn, sub_attributes=subs
        )
        entity.attributes.setdefault("belongsTo", []).append(instance)
        for sub in impl.submodules:
            self.add_submodule(sub, entity.id)

    def add_submodule(self, ident: ModuleIdentifier, parent_urn: str) -> None:
        urn = module_urn(ident.name, ident.revision, submodule=True)
        entity = self.submodules.get(urn)
        if entity is None:
            entity = Entity(id=urn, type="Submodule", attributes=self._identity_attributes(ident))
            self.submodules[urn] = entity
        if entity.instance("isSubmoduleOf", parent_urn) is None:
            entity.attributes.setdefault("isSubmoduleOf", []).append(
                Attribute.relationship(parent_urn, dataset_id=parent_urn)
            )

    def finish(self) -> list[Entity]:
        placeholders: dict[str, Entity] = {}
        for dev in self.deviation_refs:
            urn = module_urn(dev.name, dev.revision)
            if urn in self.modules or urn in placeholders:
                continue
            entity = Entity(id=urn, type="Module", attributes=self._identity_attributes(dev))
            entity.attributes["placeholder"] = [Attribute.property(True)]
            placeholders[urn] = entity
        return list(self.modules.values()) + list(self.submodules.values()) + list(
            placeholders.values()
        )


def _platform_name(platform_id: str) -> str:
    etype, segments = split_urn(platform_id)
    if etype != "Platform":
        raise ValidationError(f"expected a Platform URN, got {platform_id!r}")
    return segments[0]


def _module_set_entity(platform_id: str, set_name: str) -> Entity:
    return Entity(
        id=module_set_urn(_platform_name(platform_id), set_name),
        type="ModuleSet",
        attributes={
            "name": [Attribute.property(set_name)],
            "ofPlatform": [Attribute.relationship(platform_id)],
        },
    )


def map_yang_library_nmda(platform_id: str, doc: YangLibraryDocument) -> list[Entity]:
    doc.validate()
    name = _platform_name(platform_id)
    acc = _ModuleAccumulator()
    entities: list[Entity] = []
    for ms in doc.module_sets:
        set_entity = _module_set_entity(platform_id, ms.name)
        entities.append(set_entity)
        for impl in ms.modules:
            acc.add_implementation(impl, set_entity.id)
    for schema in doc.schemas:
        ent = Entity(
            id=schema_urn(name, schema.name),
            type="Schema",
            attributes={"name": [Attribute.property(schema.name)]},
        )
        if schema.module_set_names:
            ent.attributes["hasModuleSet"] = [
                Attribute.relationship(module_set_urn(name, ref), dataset_id=module_set_urn(name, ref))
                for ref in schema.module_set_names
            ]
        entities.append(ent)
    for ds in doc.datastores:
        entities.append(
            Entity(
                id=datastore_urn(name, ds.name),
                type="Datastore",
                attributes={
                    "name": [Attribute.property(ds.name)],
                    "ofPlatform": [Attribute.relationship(platform_id)],
                    "hasSchema": [Attribute.relationship(schema_urn(name, ds.schema_name))],
                },
            )
        )
    return entities + acc.finish()


def map_modules_state(platform_id: str, doc: ModulesStateDocument) -> list[Entity]:
    doc.validate()
    set_entity = _module_set_entity(platform_id, LEGACY_MODULE_SET)
    acc = _ModuleAccumulator()
    for impl in doc.modules:
        acc.add_implementation(impl, set_entity.id)
    return [set_entity] + acc.finish()


def map_hello_fallback(
    platform_id: str, mods: list[ModuleImplementation], set_name: str = FALLBACK_MODULE_SET
) -> list[Entity]:
    set_entity = _module_set_entity(platform_id, set_name)
    acc = _ModuleAccumulator()
    for impl in mods:
        impl.validate(strict_revision=False)
        unknown = ModuleImplementation(
            identifier=impl.identifier,
            conformance_type="unknown",
            features=impl.features,
            deviations=impl.deviations,
            submodules=impl.submodules,
            organization=impl.organization,
        )
        acc.add_implementation(unknown, set_entity.id)
    return [set_entity] + acc.finish()
