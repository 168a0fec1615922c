"""Labeled-property-graph entity model and its JSON rendering.

An entity is a typed node whose attributes are either Properties (carry a
JSON value) or Relationships (point at another entity id). An attribute name
maps to a list of instances distinguished by datasetId, and every instance
may carry nested sub-attributes of the same shape.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from ..errors import ValidationError
from ..ids import split_urn

PROPERTY = "Property"
RELATIONSHIP = "Relationship"

# keys with fixed meaning inside an attribute's JSON object; anything else
# is a sub-attribute
_RESERVED_KEYS = {"type", "value", "object", "datasetId"}

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


@dataclass
class Attribute:
    kind: str
    value: Any = None
    object: str | None = None
    dataset_id: str | None = None
    sub_attributes: dict[str, list["Attribute"]] = field(default_factory=dict)

    @classmethod
    def property(cls, value: Any, dataset_id: str | None = None, **subs: "Attribute | list[Attribute]") -> "Attribute":
        return cls(PROPERTY, value=value, dataset_id=dataset_id, sub_attributes=_subs(subs))

    @classmethod
    def relationship(cls, target: str, dataset_id: str | None = None, **subs: "Attribute | list[Attribute]") -> "Attribute":
        return cls(RELATIONSHIP, object=target, dataset_id=dataset_id, sub_attributes=_subs(subs))

    def validate(self, path: str) -> None:
        if self.kind == PROPERTY:
            if self.value is None:
                raise ValidationError(f"{path}: Property instance needs a value")
            if self.object is not None:
                raise ValidationError(f"{path}: Property must not carry an object")
        elif self.kind == RELATIONSHIP:
            if not isinstance(self.object, str) or not self.object:
                raise ValidationError(f"{path}: Relationship instance needs an object id")
            if self.value is not None:
                raise ValidationError(f"{path}: Relationship must not carry a value")
            split_urn(self.object)
        else:
            raise ValidationError(f"{path}: unknown attribute kind {self.kind!r}")
        _validate_attribute_map(self.sub_attributes, path)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"type": self.kind}
        if self.kind == PROPERTY:
            out["value"] = self.value
        else:
            out["object"] = self.object
        if self.dataset_id is not None:
            out["datasetId"] = self.dataset_id
        for name, instances in self.sub_attributes.items():
            out[name] = _instances_to_json(instances)
        return out

    @classmethod
    def from_json(cls, data: Any, path: str) -> "Attribute":
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: attribute instance must be an object")
        kind = data.get("type")
        if kind not in (PROPERTY, RELATIONSHIP):
            raise ValidationError(f"{path}: attribute type must be Property or Relationship")
        subs: dict[str, list[Attribute]] = {}
        for key, raw in data.items():
            if key in _RESERVED_KEYS:
                continue
            subs[key] = _instances_from_json(raw, f"{path}.{key}")
        return cls(
            kind=kind,
            value=data.get("value"),
            object=data.get("object"),
            dataset_id=data.get("datasetId"),
            sub_attributes=subs,
        )

    def copy(self) -> "Attribute":
        return Attribute(
            kind=self.kind,
            value=json.loads(json.dumps(self.value)) if isinstance(self.value, (dict, list)) else self.value,
            object=self.object,
            dataset_id=self.dataset_id,
            sub_attributes={n: [a.copy() for a in insts] for n, insts in self.sub_attributes.items()},
        )


def _subs(raw: dict[str, Attribute | list[Attribute]]) -> dict[str, list[Attribute]]:
    return {name: list(v) if isinstance(v, list) else [v] for name, v in raw.items()}


def _instances_to_json(instances: list[Attribute]) -> Any:
    if len(instances) == 1:
        return instances[0].to_json()
    return [inst.to_json() for inst in instances]


def _instances_from_json(raw: Any, path: str) -> list[Attribute]:
    items = raw if isinstance(raw, list) else [raw]
    return [Attribute.from_json(item, path) for item in items]


def _validate_attribute_map(attrs: dict[str, list[Attribute]], prefix: str) -> None:
    for name, instances in attrs.items():
        path = f"{prefix}.{name}" if prefix else name
        if not _NAME_RE.match(name):
            raise ValidationError(f"{path}: bad attribute name")
        if not instances:
            raise ValidationError(f"{path}: attribute must have at least one instance")
        kinds = {inst.kind for inst in instances}
        if len(kinds) > 1:
            raise ValidationError(f"{path}: instances mix Property and Relationship")
        dataset_ids = [inst.dataset_id for inst in instances]
        defaults = sum(1 for d in dataset_ids if d is None)
        if defaults > 1:
            raise ValidationError(f"{path}: more than one instance without datasetId")
        tagged = [d for d in dataset_ids if d is not None]
        if len(tagged) != len(set(tagged)):
            raise ValidationError(f"{path}: duplicate datasetId")
        for inst in instances:
            inst.validate(path)


@dataclass
class Entity:
    id: str
    type: str
    attributes: dict[str, list[Attribute]] = field(default_factory=dict)

    def validate(self) -> None:
        urn_type, _ = split_urn(self.id)
        if urn_type != self.type:
            raise ValidationError(
                f"entity id {self.id!r} declares type {urn_type!r} but entity.type is {self.type!r}"
            )
        _validate_attribute_map(self.attributes, "")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"id": self.id, "type": self.type}
        for name, instances in self.attributes.items():
            out[name] = _instances_to_json(instances)
        return out

    @classmethod
    def from_json(cls, data: Any) -> "Entity":
        if not isinstance(data, dict):
            raise ValidationError("entity must be a JSON object")
        ent_id = data.get("id")
        ent_type = data.get("type")
        if not isinstance(ent_id, str) or not ent_id:
            raise ValidationError("entity needs a string id")
        if not isinstance(ent_type, str) or not ent_type:
            raise ValidationError("entity needs a string type")
        attrs: dict[str, list[Attribute]] = {}
        for key, raw in data.items():
            if key in ("id", "type"):
                continue
            if key == "@context":
                continue
            attrs[key] = _instances_from_json(raw, key)
        entity = cls(id=ent_id, type=ent_type, attributes=attrs)
        entity.validate()
        return entity

    def copy(self) -> "Entity":
        return Entity(
            id=self.id,
            type=self.type,
            attributes={n: [a.copy() for a in insts] for n, insts in self.attributes.items()},
        )

    def instance(self, name: str, dataset_id: str | None = None) -> Attribute | None:
        for inst in self.attributes.get(name, []):
            if inst.dataset_id == dataset_id:
                return inst
        return None

    def first_value(self, name: str) -> Any:
        """Value of the first instance of a Property attribute, or None."""
        for inst in self.attributes.get(name, []):
            if inst.kind == PROPERTY:
                return inst.value
        return None

    def sorted_canonical(self) -> dict:
        """Deterministic JSON form: attribute names sorted, instances ordered
        by datasetId with the default instance first."""

        def canon_attr(inst: Attribute) -> dict:
            out: dict[str, Any] = {"type": inst.kind}
            if inst.kind == PROPERTY:
                out["value"] = inst.value
            else:
                out["object"] = inst.object
            if inst.dataset_id is not None:
                out["datasetId"] = inst.dataset_id
            for name in sorted(inst.sub_attributes):
                out[name] = [canon_attr(i) for i in _ordered(inst.sub_attributes[name])]
            return out

        def _ordered(instances: list[Attribute]) -> list[Attribute]:
            return sorted(instances, key=lambda i: (i.dataset_id is not None, i.dataset_id or ""))

        doc: dict[str, Any] = {"id": self.id, "type": self.type}
        for name in sorted(self.attributes):
            doc[name] = [canon_attr(i) for i in _ordered(self.attributes[name])]
        return doc


@dataclass
class Query:
    type: str | None = None
    q: str | None = None
    limit: int = 100
    offset: int = 0

    def validate(self) -> None:
        if self.limit <= 0:
            raise ValidationError("limit must be positive")
        if self.offset < 0:
            raise ValidationError("offset must be non-negative")
