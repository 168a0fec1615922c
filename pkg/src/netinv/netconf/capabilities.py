"""Classification of hello capability URIs.

A capability advertising a YANG module carries a ``module=`` query parameter
(optionally revision/features/deviations); everything else is a base or
protocol capability.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import parse_qs, urlsplit

from ..platform.model import ModuleIdentifier, ModuleImplementation


@dataclass(frozen=True)
class BaseCapability:
    uri: str


def parse_capability_uri(uri: str) -> ModuleImplementation | BaseCapability:
    """Total classifier: anything unparseable is a base capability."""
    uri = uri.strip()
    if "?" not in uri:
        return BaseCapability(uri)
    try:
        split = urlsplit(uri)
        params = parse_qs(split.query, keep_blank_values=True)
    except ValueError:
        return BaseCapability(uri)
    names = params.get("module")
    if not names or not names[0]:
        return BaseCapability(uri)
    name = names[0]
    revision = (params.get("revision") or [None])[0] or None
    features = _split_csv(params.get("features"))
    deviations = [ModuleIdentifier(name=d) for d in _split_csv(params.get("deviations"))]
    namespace = uri.split("?", 1)[0]
    return ModuleImplementation(
        identifier=ModuleIdentifier(name=name, revision=revision, namespace=namespace),
        conformance_type="unknown",
        features=features,
        deviations=deviations,
    )


def _split_csv(values: list[str] | None) -> list[str]:
    if not values:
        return []
    out: list[str] = []
    for chunk in values[0].split(","):
        chunk = chunk.strip()
        if chunk and chunk not in out:
            out.append(chunk)
    return out
