"""Catalog-domain records and their mapping onto Module/Submodule entities.

Catalog metadata and platform-reported implementation data meet on the same
global Module/Submodule entities, so the merge policy partitions attribute
ownership: the catalog may overwrite its own attributes and must never touch
platform-owned ones (belongsTo, namespace).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..context.model import Attribute, Entity
from ..errors import ValidationError
from ..ids import module_urn

# attributes the catalog domain owns on Module/Submodule entities
CATALOG_OWNED_ATTRIBUTES = (
    "organization",
    "schemaUrl",
    "treeType",
    "semanticVersion",
    "reference",
    "maturityLevel",
    "moduleClassification",
    "hasDependencies",
    "hasDependents",
)

PLATFORM_OWNED_ATTRIBUTES = ("belongsTo", "namespace")


@dataclass(frozen=True)
class DependencyRef:
    name: str
    revision: str | None = None

    @property
    def key(self) -> tuple[str, str | None]:
        return (self.name, self.revision)


@dataclass
class CatalogModuleRecord:
    name: str
    revision: str
    organization: str
    schema_url: str | None = None
    tree_type: str | None = None
    semantic_version: str | None = None
    reference: str | None = None
    maturity_level: str | None = None
    module_classification: str | None = None
    dependencies: list[DependencyRef] = field(default_factory=list)
    dependents: list[DependencyRef] = field(default_factory=list)
    module_type: str = "module"  # module | submodule

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("catalog record needs a module name")
        if self.module_type not in ("module", "submodule"):
            raise ValidationError(f"bad moduleType {self.module_type!r}")
        for group, refs in (("dependencies", self.dependencies), ("dependents", self.dependents)):
            keys = [r.key for r in refs]
            if len(keys) != len(set(keys)):
                raise ValidationError(f"{self.name}: duplicate entries in {group}")

    @classmethod
    def from_json(cls, data: dict) -> "CatalogModuleRecord":
        """Parse one record in the catalog wire format (yangcatalog-style keys)."""
        if not isinstance(data, dict):
            raise ValidationError("catalog record must be a JSON object")

        def refs(key: str) -> list[DependencyRef]:
            out = []
            for item in data.get(key) or []:
                if not isinstance(item, dict) or not item.get("name"):
                    raise ValidationError(f"bad {key} entry in record {data.get('name')!r}")
                out.append(DependencyRef(name=item["name"], revision=item.get("revision")))
            return out

        try:
            record = cls(
                name=data["name"],
                revision=data["revision"],
                organization=data["organization"],
                schema_url=data.get("schema"),
                tree_type=data.get("tree-type"),
                semantic_version=data.get("semantic-version"),
                reference=data.get("reference"),
                maturity_level=data.get("maturity-level"),
                module_classification=data.get("module-classification"),
                dependencies=refs("dependencies"),
                dependents=refs("dependents"),
                module_type=data.get("module-type", "module"),
            )
        except KeyError as exc:
            raise ValidationError(f"catalog record missing field {exc.args[0]!r}") from None
        record.validate()
        return record


def map_catalog_record(record: CatalogModuleRecord) -> Entity:
    record.validate()
    submodule = record.module_type == "submodule"
    entity = Entity(
        id=module_urn(record.name, record.revision, submodule=submodule),
        type="Submodule" if submodule else "Module",
        attributes={
            "name": [Attribute.property(record.name)],
            "revision": [Attribute.property(record.revision)],
            "organization": [Attribute.property(record.organization)],
        },
    )
    for attr, value in (
        ("schemaUrl", record.schema_url),
        ("treeType", record.tree_type),
        ("semanticVersion", record.semantic_version),
        ("reference", record.reference),
        ("maturityLevel", record.maturity_level),
        ("moduleClassification", record.module_classification),
    ):
        if value is not None:
            entity.attributes[attr] = [Attribute.property(value)]
    for attr, refs in (("hasDependencies", record.dependencies), ("hasDependents", record.dependents)):
        if refs:
            entity.attributes[attr] = [
                Attribute.relationship(
                    module_urn(ref.name, ref.revision),
                    dataset_id=module_urn(ref.name, ref.revision),
                )
                for ref in refs
            ]
    return entity


@dataclass
class UpsertDirective:
    """Attribute-level merge instruction for one entity.

    ``attributes`` replace the same-named stored attributes wholesale;
    attributes outside the catalog-owned set are never listed here.
    """

    entity_id: str
    entity_type: str
    attributes: dict[str, list[Attribute]]


def merge_policy(record_entity: Entity) -> UpsertDirective:
    catalog_attrs: dict[str, list[Attribute]] = {}
    for name, instances in record_entity.attributes.items():
        if name in PLATFORM_OWNED_ATTRIBUTES:
            continue
        catalog_attrs[name] = instances
    return UpsertDirective(
        entity_id=record_entity.id,
        entity_type=record_entity.type,
        attributes=catalog_attrs,
    )
