"""URN scheme for context-graph entities.

Entity ids have the form ``urn:ngsi-ld:{EntityType}:{segment}[:{segment}...]``.
Segments percent-encode the characters that would break the URN structure
(colon, slash, percent, whitespace); everything else passes through so ids
stay readable.
"""

from __future__ import annotations

from .errors import ValidationError

URN_PREFIX = "urn:ngsi-ld:"

_ENCODE = {":", "/", "%"}


def encode_segment(raw: str) -> str:
    """Percent-encode one URN path segment."""
    out = []
    for ch in raw:
        if ch in _ENCODE or ch.isspace():
            out.extend("%{:02X}".format(b) for b in ch.encode("utf-8"))
        else:
            out.append(ch)
    return "".join(out)


def decode_segment(segment: str) -> str:
    """Reverse encode_segment."""
    buf = bytearray()
    i = 0
    while i < len(segment):
        ch = segment[i]
        if ch == "%":
            if i + 2 >= len(segment) + 1:
                raise ValidationError(f"truncated percent escape in {segment!r}")
            try:
                buf.append(int(segment[i + 1 : i + 3], 16))
            except ValueError:
                raise ValidationError(f"bad percent escape in {segment!r}") from None
            i += 3
        else:
            buf.extend(ch.encode("utf-8"))
            i += 1
    return buf.decode("utf-8")


def make_urn(entity_type: str, *segments: str) -> str:
    if not entity_type or not entity_type[0].isalpha():
        raise ValidationError(f"bad entity type {entity_type!r}")
    if not segments:
        raise ValidationError("URN needs at least one segment")
    return URN_PREFIX + ":".join([entity_type] + [encode_segment(s) for s in segments])


def split_urn(urn: str) -> tuple[str, list[str]]:
    """Return (entity_type, decoded segments) or raise ValidationError."""
    if not urn.startswith(URN_PREFIX):
        raise ValidationError(f"not an ngsi-ld URN: {urn!r}")
    rest = urn[len(URN_PREFIX) :]
    pieces = rest.split(":")
    if len(pieces) < 2 or not pieces[0] or not all(pieces):
        raise ValidationError(f"malformed URN: {urn!r}")
    return pieces[0], [decode_segment(p) for p in pieces[1:]]


def urn_type(urn: str) -> str:
    return split_urn(urn)[0]


UNKNOWN_REVISION = "unknown"


def module_urn(name: str, revision: str | None = None, submodule: bool = False) -> str:
    """Global identity of a YANG module or submodule."""
    if not name:
        raise ValidationError("module name must be non-empty")
    kind = "Submodule" if submodule else "Module"
    return make_urn(kind, name, revision or UNKNOWN_REVISION)


def module_urn_parts(urn: str) -> tuple[str, str | None]:
    """Decode a Module/Submodule URN back to (name, revision-or-None)."""
    etype, segments = split_urn(urn)
    if etype not in ("Module", "Submodule") or len(segments) != 2:
        raise ValidationError(f"not a module URN: {urn!r}")
    name, revision = segments
    return name, None if revision == UNKNOWN_REVISION else revision


def platform_urn(name: str) -> str:
    return make_urn("Platform", name)


def protocol_urn(platform: str, kind: str, host: str, port: int) -> str:
    return make_urn("Protocol", platform, kind, host, str(port))


def datastore_urn(platform: str, datastore: str) -> str:
    return make_urn("Datastore", platform, datastore)


def schema_urn(platform: str, schema: str) -> str:
    return make_urn("Schema", platform, schema)


def module_set_urn(platform: str, module_set: str) -> str:
    return make_urn("ModuleSet", platform, module_set)
