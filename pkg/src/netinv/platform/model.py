"""Platform-domain data carried between discovery and the graph mappers."""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field

from ..errors import ValidationError

CONFORMANCE_TYPES = ("implement", "import", "unknown")


def _check_revision(revision: str | None, context: str) -> None:
    if revision is None:
        return
    try:
        datetime.date.fromisoformat(revision)
    except ValueError:
        raise ValidationError(f"{context}: revision {revision!r} is not a calendar date") from None


def revision_is_date(revision: str | None) -> bool:
    if revision is None:
        return False
    try:
        datetime.date.fromisoformat(revision)
        return True
    except ValueError:
        return False


@dataclass(frozen=True)
class ModuleIdentifier:
    name: str
    revision: str | None = None
    namespace: str | None = None
    is_submodule: bool = False

    def validate(self, strict_revision: bool = True) -> None:
        # gNMI model versions ride in the revision slot verbatim, so fallback
        # identifiers skip the calendar-date check
        if not self.name:
            raise ValidationError("module name must be non-empty")
        if strict_revision:
            _check_revision(self.revision, self.name)

    @property
    def key(self) -> tuple[str, str | None]:
        return (self.name, self.revision)


@dataclass
class ModuleImplementation:
    identifier: ModuleIdentifier
    conformance_type: str = "implement"
    features: list[str] = field(default_factory=list)
    deviations: list[ModuleIdentifier] = field(default_factory=list)
    submodules: list[ModuleIdentifier] = field(default_factory=list)
    organization: str | None = None  # only populated by gNMI discovery

    def validate(self, strict_revision: bool = True) -> None:
        self.identifier.validate(strict_revision)
        if self.conformance_type not in CONFORMANCE_TYPES:
            raise ValidationError(
                f"{self.identifier.name}: bad conformance type {self.conformance_type!r}"
            )
        for group, items in (("deviations", self.deviations), ("submodules", self.submodules)):
            keys = [m.key for m in items]
            if len(keys) != len(set(keys)):
                raise ValidationError(f"{self.identifier.name}: duplicate entries in {group}")
            for m in items:
                m.validate(strict_revision)


@dataclass
class ModuleSetDef:
    name: str
    modules: list[ModuleImplementation] = field(default_factory=list)


@dataclass
class SchemaDef:
    name: str
    module_set_names: list[str] = field(default_factory=list)


@dataclass
class DatastoreDef:
    name: str
    schema_name: str


@dataclass
class YangLibraryDocument:
    module_sets: list[ModuleSetDef] = field(default_factory=list)
    schemas: list[SchemaDef] = field(default_factory=list)
    datastores: list[DatastoreDef] = field(default_factory=list)

    def validate(self) -> None:
        set_names = {ms.name for ms in self.module_sets}
        schema_names = {s.name for s in self.schemas}
        for schema in self.schemas:
            for ref in schema.module_set_names:
                if ref not in set_names:
                    raise ValidationError(f"schema {schema.name!r} references unknown module set {ref!r}")
        for ds in self.datastores:
            if ds.schema_name not in schema_names:
                raise ValidationError(f"datastore {ds.name!r} references unknown schema {ds.schema_name!r}")
        for ms in self.module_sets:
            for mod in ms.modules:
                mod.validate()

    @property
    def is_empty(self) -> bool:
        return not (self.module_sets or self.schemas or self.datastores)


@dataclass
class ModulesStateDocument:
    modules: list[ModuleImplementation] = field(default_factory=list)

    def validate(self) -> None:
        for mod in self.modules:
            mod.validate()

    @property
    def is_empty(self) -> bool:
        return not self.modules


@dataclass
class PlatformInfo:
    name: str
    vendor: str | None = None
    model: str | None = None

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("platform name must be non-empty")


@dataclass
class ProtocolInfo:
    kind: str  # netconf | gnmi
    host: str
    port: int
    capabilities: list[str] = field(default_factory=list)
    encodings: list[str] = field(default_factory=list)
    version: str | None = None

    def validate(self) -> None:
        if self.kind not in ("netconf", "gnmi"):
            raise ValidationError(f"bad protocol kind {self.kind!r}")
        if not (1 <= self.port <= 65535):
            raise ValidationError(f"port {self.port} out of range")
