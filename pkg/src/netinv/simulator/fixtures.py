"""Declarative device fixtures: one file describes one simulated platform."""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..errors import ValidationError
from ..gnmi.wire import ENCODING_NUMBERS, ModelRecord
from ..platform.model import (
    DatastoreDef,
    ModuleIdentifier,
    ModuleImplementation,
    ModulesStateDocument,
    ModuleSetDef,
    SchemaDef,
    YangLibraryDocument,
)

TRANSPORT_KINDS = ("netconf-tcp", "netconf-ssh", "gnmi")

DEFAULT_USERNAME = "admin"
DEFAULT_PASSWORD = "admin"


@dataclass
class TransportDef:
    kind: str
    port: int
    username: str = DEFAULT_USERNAME
    password: str = DEFAULT_PASSWORD


@dataclass
class Fixture:
    name: str
    transports: list[TransportDef] = field(default_factory=list)
    hello_capabilities: list[str] = field(default_factory=list)
    yang_library: YangLibraryDocument | None = None
    modules_state: ModulesStateDocument | None = None
    gnmi_models: list[ModelRecord] = field(default_factory=list)
    gnmi_encodings: list[str] = field(default_factory=list)
    gnmi_version: str = "0.7.0"
    gnmi_tls: bool = False

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("fixture needs a name")
        if not self.transports:
            raise ValidationError(f"fixture {self.name}: transports must be non-empty")
        for transport in self.transports:
            if transport.kind not in TRANSPORT_KINDS:
                raise ValidationError(f"fixture {self.name}: unknown transport {transport.kind!r}")
            if not (0 <= transport.port <= 65535):
                raise ValidationError(f"fixture {self.name}: bad port {transport.port}")
        if self.yang_library is not None and self.modules_state is not None:
            raise ValidationError(
                f"fixture {self.name}: yang-library and modules-state are mutually exclusive"
            )
        if self.yang_library is not None:
            self.yang_library.validate()
        if self.modules_state is not None:
            self.modules_state.validate()
        for enc in self.gnmi_encodings:
            if enc not in ENCODING_NUMBERS:
                raise ValidationError(f"fixture {self.name}: unknown gNMI encoding {enc!r}")


def _revision(raw: object) -> str | None:
    # YAML turns unquoted dates into date objects; identifiers carry strings
    return None if raw is None else str(raw)


def _module_identifier(raw: dict) -> ModuleIdentifier:
    return ModuleIdentifier(
        name=raw["name"],
        revision=_revision(raw.get("revision")),
        namespace=raw.get("namespace"),
    )


def _module_implementation(raw: dict, default_conformance: str = "implement") -> ModuleImplementation:
    return ModuleImplementation(
        identifier=_module_identifier(raw),
        conformance_type=raw.get("conformance-type", default_conformance),
        features=list(raw.get("features") or []),
        deviations=[_module_identifier(d) for d in raw.get("deviations") or []],
        submodules=[
            ModuleIdentifier(
                name=s["name"], revision=_revision(s.get("revision")), is_submodule=True
            )
            for s in raw.get("submodules") or []
        ],
    )


def _yang_library(raw: dict) -> YangLibraryDocument:
    return YangLibraryDocument(
        module_sets=[
            ModuleSetDef(
                name=ms["name"],
                modules=[_module_implementation(m) for m in ms.get("modules") or []],
            )
            for ms in raw.get("module-sets") or []
        ],
        schemas=[
            SchemaDef(name=s["name"], module_set_names=list(s.get("module-sets") or []))
            for s in raw.get("schemas") or []
        ],
        datastores=[
            DatastoreDef(name=d["name"], schema_name=d["schema"])
            for d in raw.get("datastores") or []
        ],
    )


def fixture_from_dict(raw: dict) -> Fixture:
    if not isinstance(raw, dict):
        raise ValidationError("fixture file must contain a mapping")
    try:
        fixture = Fixture(
            name=raw["name"],
            transports=[
                TransportDef(
                    kind=t["kind"],
                    port=int(t["port"]),
                    username=t.get("username", DEFAULT_USERNAME),
                    password=t.get("password", DEFAULT_PASSWORD),
                )
                for t in raw.get("transports") or []
            ],
            hello_capabilities=list(raw.get("hello-capabilities") or []),
            yang_library=_yang_library(raw["yang-library"]) if raw.get("yang-library") else None,
            modules_state=(
                ModulesStateDocument(
                    modules=[
                        _module_implementation(m)
                        for m in (raw["modules-state"].get("modules") or [])
                    ]
                )
                if raw.get("modules-state")
                else None
            ),
            gnmi_models=[
                ModelRecord(
                    name=m["name"],
                    organization=m.get("organization", ""),
                    version=m.get("version", ""),
                )
                for m in raw.get("gnmi-models") or []
            ],
            gnmi_encodings=list(raw.get("gnmi-encodings") or []),
            gnmi_version=raw.get("gnmi-version", "0.7.0"),
            gnmi_tls=bool(raw.get("gnmi-tls", False)),
        )
    except KeyError as exc:
        raise ValidationError(f"fixture missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad fixture field: {exc}") from None
    fixture.validate()
    return fixture


def load_fixture(path: str | Path) -> Fixture:
    text = Path(path).read_text(encoding="utf-8")
    raw = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    return fixture_from_dict(raw)


CANONICAL = {
    "f-nmda": "f-nmda.yaml",
    "f-legacy": "f-legacy.yaml",
    "f-bare": "f-bare.yaml",
    "f-gnmi": "f-gnmi.yaml",
    "f-shared": "f-shared.yaml",
}


def canonical_fixture_names() -> list[str]:
    return sorted(CANONICAL)


def canonical_fixture(name: str) -> Fixture:
    key = name.lower()
    if key not in CANONICAL:
        raise ValidationError(f"unknown canonical fixture {name!r}")
    text = (
        importlib.resources.files("netinv.simulator")
        .joinpath("data", CANONICAL[key])
        .read_text(encoding="utf-8")
    )
    return fixture_from_dict(yaml.safe_load(text))
