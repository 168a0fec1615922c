"""Fixture-driven simulated platforms: NETCONF (TCP and SSH) and gNMI."""

from __future__ import annotations

import datetime
import itertools
import logging
import socket
import threading
import xml.etree.ElementTree as ET
from concurrent import futures
from dataclasses import dataclass

import grpc
from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import rsa
from cryptography.x509.oid import NameOID

from ..errors import ConnectionFailure, NetinvError, ProtocolError
from ..gnmi.wire import (
    CAPABILITIES_METHOD,
    CapabilitiesReply,
    decode_capability_request,
    encode_capability_response,
)
from ..netconf import messages
from ..netconf.client import MessageTransport
from ..sshlite import SSHServer
from .fixtures import Fixture, TransportDef

log = logging.getLogger(__name__)

_session_counter = itertools.count(1)


class NetconfFixtureSession:
    """Answers hello/<get>/<close-session> for one connection."""

    def __init__(self, fixture: Fixture, stream) -> None:
        self.fixture = fixture
        self.transport = MessageTransport(stream)

    def run(self) -> None:
        try:
            self._handshake()
            self._serve_rpcs()
        except (ConnectionFailure, ProtocolError, OSError):
            pass
        finally:
            self.transport.close()

    def _handshake(self) -> None:
        hello = messages.build_hello(self.fixture.hello_capabilities, next(_session_counter))
        self.transport.send_message(messages.to_bytes(hello))
        client_caps = messages.parse_hello(messages.parse_xml(self.transport.recv_message()))
        version = messages.choose_base_version(client_caps, self.fixture.hello_capabilities)
        if version == "1.1":
            self.transport.use_chunked_framing()

    def _serve_rpcs(self) -> None:
        while True:
            raw = self.transport.recv_message()
            try:
                rpc = messages.parse_xml(raw)
            except ProtocolError:
                self._send(messages.build_rpc_error("0", "malformed-message", "cannot parse rpc"))
                continue
            message_id = rpc.get("message-id", "0")
            operation = next(iter(rpc), None)
            if operation is None:
                self._send(messages.build_rpc_error(message_id, "missing-element", "empty rpc"))
                continue
            local = operation.tag.split("}")[-1]
            if local == "close-session":
                self._send(messages.build_ok_reply(message_id))
                return
            if local == "get":
                self._send(self._answer_get(message_id, operation))
                continue
            self._send(
                messages.build_rpc_error(
                    message_id, "operation-not-supported", f"rpc {local} is not supported"
                )
            )

    def _send(self, element: ET.Element) -> None:
        self.transport.send_message(messages.to_bytes(element))

    def _answer_get(self, message_id: str, get_el: ET.Element) -> ET.Element:
        wanted = self._filter_target(get_el)
        content: ET.Element | None = None
        if wanted in (None, "yang-library") and self.fixture.yang_library is not None:
            content = messages.build_yang_library(
                self.fixture.yang_library, content_id=self.fixture.name
            )
        elif wanted in (None, "modules-state") and self.fixture.modules_state is not None:
            content = messages.build_modules_state(self.fixture.modules_state)
        return messages.build_data_reply(message_id, content)

    @staticmethod
    def _filter_target(get_el: ET.Element) -> str | None:
        filter_el = get_el.find(f"{{{messages.BASE_NS}}}filter")
        if filter_el is None:
            return None
        child = next(iter(filter_el), None)
        if child is None:
            return None
        return child.tag.split("}")[-1]


class _TcpListener:
    def __init__(self, port: int, on_connection) -> None:
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind(("127.0.0.1", port))
        self._sock.listen(16)
        self.port = self._sock.getsockname()[1]
        self._on_connection = on_connection
        self._closing = False
        self._thread = threading.Thread(target=self._accept_loop, daemon=True)
        self._thread.start()

    def _accept_loop(self) -> None:
        while True:
            try:
                conn, _addr = self._sock.accept()
            except OSError:
                return  # listener closed
            conn.settimeout(30.0)
            threading.Thread(
                target=self._on_connection, args=(conn,), daemon=True
            ).start()

    def close(self) -> None:
        self._closing = True
        try:
            self._sock.close()
        except OSError:
            pass


def make_self_signed_cert(hostname: str = "localhost") -> tuple[bytes, bytes]:
    """(key PEM, certificate PEM) for the loopback gNMI endpoint."""
    key = rsa.generate_private_key(public_exponent=65537, key_size=2048)
    name = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, hostname)])
    now = datetime.datetime.now(datetime.timezone.utc)
    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(now - datetime.timedelta(minutes=5))
        .not_valid_after(now + datetime.timedelta(days=7))
        .add_extension(
            x509.SubjectAlternativeName(
                [
                    x509.DNSName(hostname),
                    x509.IPAddress(__import__("ipaddress").ip_address("127.0.0.1")),
                ]
            ),
            critical=False,
        )
        .sign(key, hashes.SHA256())
    )
    key_pem = key.private_bytes(
        serialization.Encoding.PEM,
        serialization.PrivateFormat.TraditionalOpenSSL,
        serialization.NoEncryption(),
    )
    return key_pem, cert.public_bytes(serialization.Encoding.PEM)


@dataclass
class _GnmiEndpoint:
    server: grpc.Server
    port: int
    ca_cert_pem: bytes | None


def _start_gnmi(fixture: Fixture, port: int) -> _GnmiEndpoint:
    def capabilities(_request, _context) -> CapabilitiesReply:
        return CapabilitiesReply(
            models=list(fixture.gnmi_models),
            encodings=list(fixture.gnmi_encodings),
            gnmi_version=fixture.gnmi_version,
        )

    service, method = CAPABILITIES_METHOD.strip("/").split("/")
    handler = grpc.method_handlers_generic_handler(
        service,
        {
            method: grpc.unary_unary_rpc_method_handler(
                capabilities,
                request_deserializer=decode_capability_request,
                response_serializer=encode_capability_response,
            )
        },
    )
    server = grpc.server(futures.ThreadPoolExecutor(max_workers=4))
    server.add_generic_rpc_handlers((handler,))
    ca_cert_pem = None
    if fixture.gnmi_tls:
        key_pem, cert_pem = make_self_signed_cert()
        credentials = grpc.ssl_server_credentials([(key_pem, cert_pem)])
        bound = server.add_secure_port(f"127.0.0.1:{port}", credentials)
        ca_cert_pem = cert_pem
    else:
        bound = server.add_insecure_port(f"127.0.0.1:{port}")
    if bound == 0:
        raise NetinvError(f"cannot bind gNMI port {port}")
    server.start()
    return _GnmiEndpoint(server=server, port=bound, ca_cert_pem=ca_cert_pem)


class DeviceSimulator:
    """All transports of one fixture, bound and serving."""

    def __init__(self, fixture: Fixture, ephemeral_ports: bool = False):
        fixture.validate()
        self.fixture = fixture
        self._ephemeral = ephemeral_ports
        self._listeners: list[_TcpListener] = []
        self._gnmi: list[_GnmiEndpoint] = []
        self.ports: dict[str, int] = {}
        self.ca_cert_pem: bytes | None = None

    def start(self) -> "DeviceSimulator":
        try:
            for transport in self.fixture.transports:
                port = 0 if self._ephemeral else transport.port
                if transport.kind == "gnmi":
                    endpoint = _start_gnmi(self.fixture, port)
                    self._gnmi.append(endpoint)
                    self.ports["gnmi"] = endpoint.port
                    if endpoint.ca_cert_pem:
                        self.ca_cert_pem = endpoint.ca_cert_pem
                elif transport.kind == "netconf-tcp":
                    listener = _TcpListener(port, self._handle_tcp)
                    self._listeners.append(listener)
                    self.ports["netconf-tcp"] = listener.port
                else:
                    listener = _TcpListener(port, self._ssh_handler(transport))
                    self._listeners.append(listener)
                    self.ports["netconf-ssh"] = listener.port
        except OSError as exc:
            self.stop()
            raise NetinvError(f"simulator startup failed: {exc}") from None
        log.info("simulator %s listening on %s", self.fixture.name, self.ports)
        return self

    def _handle_tcp(self, conn: socket.socket) -> None:
        NetconfFixtureSession(self.fixture, conn).run()

    def _ssh_handler(self, transport: TransportDef):
        server = SSHServer(
            handler=lambda channel: NetconfFixtureSession(self.fixture, channel).run(),
            username=transport.username,
            password=transport.password,
        )
        return server.handle_socket

    def stop(self) -> None:
        for listener in self._listeners:
            listener.close()
        for endpoint in self._gnmi:
            endpoint.server.stop(grace=0.2)
        self._listeners = []
        self._gnmi = []

    def __enter__(self) -> "DeviceSimulator":
        return self

    def __exit__(self, *_exc) -> None:
        self.stop()


def serve(fixture: Fixture, ephemeral_ports: bool = False) -> DeviceSimulator:
    return DeviceSimulator(fixture, ephemeral_ports=ephemeral_ports).start()
