"""Protobuf wire encoding for the gNMI Capabilities exchange.

Only three messages are involved (CapabilityRequest, CapabilityResponse,
ModelData) and no generated stubs are available in this environment, so the
handful of fields is encoded by hand against the public gnmi.proto field
numbers. grpcio carries these bytes on the standard method path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ProtocolError

CAPABILITIES_METHOD = "/gnmi.gNMI/Capabilities"

# Encoding enum values from gnmi.proto
ENCODINGS = {0: "JSON", 1: "BYTES", 2: "PROTO", 3: "ASCII", 4: "JSON_IETF"}
ENCODING_NUMBERS = {name: number for number, name in ENCODINGS.items()}


@dataclass(frozen=True)
class ModelRecord:
    name: str
    organization: str = ""
    version: str = ""


@dataclass(frozen=True)
class CapabilityRequest:
    """Marker for the (effectively empty) request message.

    grpc treats a None deserializer result as failure, so decoding always
    produces an instance of this class."""


@dataclass
class CapabilitiesReply:
    models: list[ModelRecord] = field(default_factory=list)
    encodings: list[str] = field(default_factory=list)
    gnmi_version: str = ""


def _varint(value: int) -> bytes:
    out = bytearray()
    while True:
        piece = value & 0x7F
        value >>= 7
        if value:
            out.append(piece | 0x80)
        else:
            out.append(piece)
            return bytes(out)


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise ProtocolError("truncated varint")
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
        if shift > 63:
            raise ProtocolError("varint too long")


def _length_delimited(field_number: int, payload: bytes) -> bytes:
    return _varint((field_number << 3) | 2) + _varint(len(payload)) + payload


def _string_field(field_number: int, text: str) -> bytes:
    if not text:
        return b""
    return _length_delimited(field_number, text.encode("utf-8"))


def _iter_fields(data: bytes):
    pos = 0
    while pos < len(data):
        tag, pos = _read_varint(data, pos)
        field_number, wire_type = tag >> 3, tag & 0x7
        if wire_type == 0:
            value, pos = _read_varint(data, pos)
        elif wire_type == 2:
            size, pos = _read_varint(data, pos)
            if pos + size > len(data):
                raise ProtocolError("truncated length-delimited field")
            value = data[pos : pos + size]
            pos += size
        elif wire_type == 5:
            value = data[pos : pos + 4]
            pos += 4
        elif wire_type == 1:
            value = data[pos : pos + 8]
            pos += 8
        else:
            raise ProtocolError(f"unsupported wire type {wire_type}")
        yield field_number, wire_type, value


def encode_capability_request(_request: CapabilityRequest | None = None) -> bytes:
    return b""  # every field of CapabilityRequest is optional


def decode_capability_request(data: bytes) -> CapabilityRequest:
    # accept anything well-formed; extensions are irrelevant here
    for _ in _iter_fields(bytes(data)):
        pass
    return CapabilityRequest()


def _encode_model(model: ModelRecord) -> bytes:
    return (
        _string_field(1, model.name)
        + _string_field(2, model.organization)
        + _string_field(3, model.version)
    )


def _decode_model(data: bytes) -> ModelRecord:
    name = organization = version = ""
    for field_number, wire_type, value in _iter_fields(data):
        if wire_type != 2:
            continue
        text = value.decode("utf-8")
        if field_number == 1:
            name = text
        elif field_number == 2:
            organization = text
        elif field_number == 3:
            version = text
    return ModelRecord(name=name, organization=organization, version=version)


def encode_capability_response(reply: CapabilitiesReply) -> bytes:
    out = bytearray()
    for model in reply.models:
        out += _length_delimited(1, _encode_model(model))
    if reply.encodings:
        packed = b"".join(_varint(ENCODING_NUMBERS[name]) for name in reply.encodings)
        out += _length_delimited(2, packed)
    out += _string_field(3, reply.gnmi_version)
    return bytes(out)


def decode_capability_response(data: bytes) -> CapabilitiesReply:
    reply = CapabilitiesReply()
    for field_number, wire_type, value in _iter_fields(data):
        if field_number == 1 and wire_type == 2:
            reply.models.append(_decode_model(value))
        elif field_number == 2:
            if wire_type == 2:  # packed
                pos = 0
                while pos < len(value):
                    number, pos = _read_varint(value, pos)
                    reply.encodings.append(ENCODINGS.get(number, str(number)))
            elif wire_type == 0:
                reply.encodings.append(ENCODINGS.get(value, str(value)))
        elif field_number == 3 and wire_type == 2:
            reply.gnmi_version = value.decode("utf-8")
    return reply
