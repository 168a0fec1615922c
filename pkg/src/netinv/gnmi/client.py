"""gNMI capability discovery over gRPC (Capabilities RPC only)."""

from __future__ import annotations

from pathlib import Path

import grpc

from ..errors import ConnectionFailure, RemoteError, TimeoutFailure, ValidationError
from ..netconf.client import CapabilityDiscovery, ConnectionSpec
from ..platform.model import ModuleIdentifier, ModuleImplementation, ProtocolInfo
from .wire import (
    CAPABILITIES_METHOD,
    CapabilitiesReply,
    decode_capability_response,
    encode_capability_request,
)


def _open_channel(spec: ConnectionSpec) -> grpc.Channel:
    target = f"{spec.host}:{spec.port}"
    if not spec.tls:
        return grpc.insecure_channel(target)
    roots = Path(spec.ca_cert).read_bytes() if spec.ca_cert else None
    return grpc.secure_channel(target, grpc.ssl_channel_credentials(root_certificates=roots))


def _discover_once(spec: ConnectionSpec) -> CapabilityDiscovery:
    channel = _open_channel(spec)
    try:
        call = channel.unary_unary(
            CAPABILITIES_METHOD,
            request_serializer=lambda _req: encode_capability_request(),
            response_deserializer=decode_capability_response,
        )
        metadata = []
        if spec.username:
            metadata = [("username", spec.username), ("password", spec.password or "")]
        try:
            reply: CapabilitiesReply = call(None, timeout=spec.timeout, metadata=metadata)
        except grpc.RpcError as exc:
            code = exc.code()
            if code == grpc.StatusCode.DEADLINE_EXCEEDED:
                raise TimeoutFailure(f"gNMI Capabilities timed out against {spec.host}:{spec.port}") from None
            if code == grpc.StatusCode.UNAVAILABLE:
                raise ConnectionFailure(
                    f"cannot reach gNMI target {spec.host}:{spec.port}: {exc.details()}"
                ) from None
            if code == grpc.StatusCode.UNAUTHENTICATED:
                raise ConnectionFailure(f"gNMI authentication failed: {exc.details()}") from None
            raise RemoteError(f"gNMI Capabilities failed: {code.name}: {exc.details()}") from None

        modules = [
            ModuleImplementation(
                identifier=ModuleIdentifier(name=model.name, revision=model.version or None),
                conformance_type="unknown",
                organization=model.organization or None,
            )
            for model in reply.models
            if model.name
        ]
        protocol = ProtocolInfo(
            kind="gnmi",
            host=spec.host,
            port=spec.port,
            capabilities=[],
            encodings=list(reply.encodings),
            version=reply.gnmi_version or None,
        )
        return CapabilityDiscovery(protocol=protocol, yang_library=None, hello_modules=modules)
    finally:
        channel.close()


def gnmi_discover(spec: ConnectionSpec) -> CapabilityDiscovery:
    """Issue the Capabilities RPC and map the advertised models.

    gNMI carries no YANG revisions, so model versions ride in the revision
    slot verbatim; discovery never reads the yang-library subtree over gNMI.
    """
    spec.validate()
    if spec.transport != "gnmi":
        raise ValidationError(f"gnmi_discover cannot use transport {spec.transport!r}")
    try:
        return _discover_once(spec)
    except TimeoutFailure:
        return _discover_once(spec)
