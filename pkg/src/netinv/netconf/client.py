"""Capability-discovery client for NETCONF over raw TCP or SSH."""

from __future__ import annotations

import socket
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from ..errors import ConnectionFailure, TimeoutFailure, ValidationError
from ..platform.model import (
    ModuleImplementation,
    ModulesStateDocument,
    ProtocolInfo,
    YangLibraryDocument,
)
from ..sshlite import connect_netconf_ssh
from . import messages
from .capabilities import BaseCapability, parse_capability_uri
from .framing import ChunkedDecoder, EOMDecoder, encode_chunked, encode_eom

TRANSPORTS = ("netconf-ssh", "netconf-tcp", "gnmi")


@dataclass
class ConnectionSpec:
    host: str
    port: int
    transport: str
    username: str | None = None
    password: str | None = None
    tls: bool = False           # gnmi only
    ca_cert: str | None = None  # gnmi only: PEM file for verifying a private CA
    timeout: float = 10.0

    def validate(self) -> None:
        if self.transport not in TRANSPORTS:
            raise ValidationError(f"unknown transport {self.transport!r}")
        if not (1 <= self.port <= 65535):
            raise ValidationError(f"port {self.port} out of range")
        if self.transport == "netconf-ssh" and not (self.username and self.password):
            raise ValidationError("netconf-ssh requires username and password")
        if self.timeout <= 0:
            raise ValidationError("timeout must be positive")

    @classmethod
    def from_json(cls, data: dict) -> "ConnectionSpec":
        if not isinstance(data, dict):
            raise ValidationError("connection must be a JSON object")
        try:
            spec = cls(
                host=data["host"],
                port=int(data["port"]),
                transport=data["transport"],
                username=data.get("username"),
                password=data.get("password"),
                tls=bool(data.get("tls", False)),
                ca_cert=data.get("caCert"),
                timeout=float(data.get("timeout", 10.0)),
            )
        except KeyError as exc:
            raise ValidationError(f"connection missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad connection field: {exc}") from None
        spec.validate()
        return spec


@dataclass
class CapabilityDiscovery:
    protocol: ProtocolInfo
    yang_library: YangLibraryDocument | ModulesStateDocument | None = None
    hello_modules: list[ModuleImplementation] = field(default_factory=list)


class MessageTransport:
    """Framed NETCONF messages over anything with sendall/recv/close."""

    def __init__(self, sock):
        self._sock = sock
        self._decoder = EOMDecoder()
        self._chunked = False
        self._queue: list[bytes] = []

    def use_chunked_framing(self) -> None:
        # bytes of the peer's first chunked message may already sit in the
        # hello-phase decoder; carry them over
        residue = self._decoder.take_buffer()
        self._decoder = ChunkedDecoder()
        self._chunked = True
        if residue:
            self._queue.extend(self._decoder.feed(residue))

    def send_message(self, payload: bytes) -> None:
        data = encode_chunked(payload) if self._chunked else encode_eom(payload)
        try:
            self._sock.sendall(data)
        except socket.timeout:
            raise TimeoutFailure("peer timed out") from None
        except OSError as exc:
            raise ConnectionFailure(f"connection lost: {exc}") from None

    def recv_message(self) -> bytes:
        while not self._queue:
            try:
                data = self._sock.recv(65536)
            except socket.timeout:
                raise TimeoutFailure("peer timed out") from None
            except OSError as exc:
                raise ConnectionFailure(f"connection lost: {exc}") from None
            if not data:
                raise ConnectionFailure("connection closed by peer")
            self._queue.extend(self._decoder.feed(data))
        return self._queue.pop(0)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


def _open_stream(spec: ConnectionSpec):
    if spec.transport == "netconf-tcp":
        try:
            sock = socket.create_connection((spec.host, spec.port), timeout=spec.timeout)
            sock.settimeout(spec.timeout)
            return sock
        except socket.timeout:
            raise TimeoutFailure(f"timeout connecting to {spec.host}:{spec.port}") from None
        except OSError as exc:
            raise ConnectionFailure(f"cannot connect to {spec.host}:{spec.port}: {exc}") from None
    return connect_netconf_ssh(
        spec.host, spec.port, spec.username, spec.password, timeout=spec.timeout
    )


class NetconfSession:
    """Client side of one NETCONF session."""

    CLIENT_CAPABILITIES = [messages.CAP_BASE_10, messages.CAP_BASE_11]

    def __init__(self, spec: ConnectionSpec):
        self._transport = MessageTransport(_open_stream(spec))
        self._message_id = 0
        try:
            hello = messages.build_hello(self.CLIENT_CAPABILITIES)
            self._transport.send_message(messages.to_bytes(hello))
            server_hello = messages.parse_xml(self._transport.recv_message())
            self.server_capabilities = messages.parse_hello(server_hello)
            self.base_version = messages.choose_base_version(
                self.CLIENT_CAPABILITIES, self.server_capabilities
            )
            if self.base_version == "1.1":
                self._transport.use_chunked_framing()
        except Exception:
            self._transport.close()
            raise

    def rpc(self, payload: ET.Element) -> ET.Element:
        self._message_id += 1
        message_id = str(self._message_id)
        request = messages.build_rpc(message_id, payload)
        self._transport.send_message(messages.to_bytes(request))
        reply = messages.parse_xml(self._transport.recv_message())
        return messages.parse_rpc_reply(reply, message_id)

    def get_subtree(self, container: str) -> ET.Element | None:
        """<get> with a subtree filter; returns the container or None if absent."""
        reply = self.rpc(messages.build_get(messages.subtree_filter(container)))
        data = messages.reply_data(reply)
        if data is None:
            return None
        return data.find(f"{{{messages.YANGLIB_NS}}}{container}")

    def close(self) -> None:
        try:
            close = ET.Element(f"{{{messages.BASE_NS}}}close-session")
            self.rpc(close)
        except Exception:
            pass
        self._transport.close()


def _classify_capabilities(uris: list[str]) -> list[ModuleImplementation]:
    modules: list[ModuleImplementation] = []
    seen: set = set()
    for uri in uris:
        parsed = parse_capability_uri(uri)
        if isinstance(parsed, BaseCapability):
            continue
        if parsed.identifier.key in seen:
            continue
        seen.add(parsed.identifier.key)
        modules.append(parsed)
    return modules


def _discover_once(spec: ConnectionSpec) -> CapabilityDiscovery:
    session = NetconfSession(spec)
    try:
        hello_modules = _classify_capabilities(session.server_capabilities)
        protocol = ProtocolInfo(
            kind="netconf",
            host=spec.host,
            port=spec.port,
            capabilities=list(session.server_capabilities),
            encodings=["xml"],
            version=session.base_version,
        )
        yang_library = None
        if any(m.identifier.name == messages.YANG_LIBRARY_MODULE for m in hello_modules):
            library_el = session.get_subtree("yang-library")
            if library_el is not None:
                doc = messages.parse_yang_library(library_el)
                if not doc.is_empty:
                    yang_library = doc
            if yang_library is None:
                state_el = session.get_subtree("modules-state")
                if state_el is not None:
                    doc = messages.parse_modules_state(state_el)
                    if not doc.is_empty:
                        yang_library = doc
        return CapabilityDiscovery(
            protocol=protocol, yang_library=yang_library, hello_modules=hello_modules
        )
    finally:
        session.close()


def netconf_discover(spec: ConnectionSpec) -> CapabilityDiscovery:
    """Hello exchange plus module-library retrieval, per the registration flow.

    Retries exactly once on timeout; registration is user-triggered and
    should fail fast.
    """
    spec.validate()
    if spec.transport not in ("netconf-ssh", "netconf-tcp"):
        raise ValidationError(f"netconf_discover cannot use transport {spec.transport!r}")
    try:
        return _discover_once(spec)
    except TimeoutFailure:
        return _discover_once(spec)
