"""SSH session layer: password auth, the netconf subsystem channel, server loop."""

from __future__ import annotations

import socket

from cryptography.hazmat.primitives.asymmetric import ed25519

from ..errors import ConnectionFailure, ProtocolError
from . import wire
from .transport import (
    PacketStream,
    VERSION_STRING,
    activate_directional_keys,
    client_key_exchange,
    exchange_versions,
    server_key_exchange,
)
from .wire import Reader

INITIAL_WINDOW = 1 << 30
MAX_CHANNEL_PACKET = 32768
WINDOW_REFRESH = 1 << 20

SERVICE_USERAUTH = "ssh-userauth"
SERVICE_CONNECTION = "ssh-connection"
NETCONF_SUBSYSTEM = "netconf"


class Channel:
    """Socket-like byte stream riding on one SSH session channel.

    Single-threaded by design: recv() pumps the underlying packet stream and
    handles window bookkeeping inline.
    """

    def __init__(self, stream: PacketStream, local_id: int, remote_id: int, remote_window: int, remote_max_packet: int):
        self._stream = stream
        self._local_id = local_id
        self._remote_id = remote_id
        self._remote_window = remote_window
        self._remote_max_packet = min(remote_max_packet, MAX_CHANNEL_PACKET)
        self._buffer = bytearray()
        self._eof = False
        self._closed = False
        self._consumed = 0

    def sendall(self, data: bytes) -> None:
        if self._closed:
            raise ConnectionFailure("SSH channel is closed")
        view = memoryview(data)
        while view:
            while self._remote_window == 0 and not self._eof:
                self._pump_once()
            if self._eof:
                raise ConnectionFailure("SSH channel closed by peer")
            take = min(len(view), self._remote_max_packet, self._remote_window)
            self._stream.send_packet(
                wire.byte(wire.MSG_CHANNEL_DATA)
                + wire.u32(self._remote_id)
                + wire.string(bytes(view[:take]))
            )
            self._remote_window -= take
            view = view[take:]

    def recv(self, n: int) -> bytes:
        while not self._buffer:
            if self._eof:
                return b""
            try:
                self._pump_once()
            except ConnectionFailure:
                self._eof = True
                return b""
        take = min(n, len(self._buffer))
        piece = bytes(self._buffer[:take])
        del self._buffer[:take]
        self._consumed += take
        if self._consumed >= WINDOW_REFRESH and not self._eof:
            self._stream.send_packet(
                wire.byte(wire.MSG_CHANNEL_WINDOW_ADJUST)
                + wire.u32(self._remote_id)
                + wire.u32(self._consumed)
            )
            self._consumed = 0
        return piece

    def _pump_once(self) -> None:
        payload = self._stream.recv_packet()
        msg = payload[0]
        if msg == wire.MSG_CHANNEL_DATA:
            reader = Reader(payload)
            reader.read_byte()
            reader.read_u32()
            self._buffer.extend(reader.read_string())
        elif msg == wire.MSG_CHANNEL_WINDOW_ADJUST:
            reader = Reader(payload)
            reader.read_byte()
            reader.read_u32()
            self._remote_window += reader.read_u32()
        elif msg in (wire.MSG_CHANNEL_EOF, wire.MSG_CHANNEL_CLOSE):
            self._eof = True
            if msg == wire.MSG_CHANNEL_CLOSE and not self._closed:
                self._closed = True
                try:
                    self._stream.send_packet(
                        wire.byte(wire.MSG_CHANNEL_CLOSE) + wire.u32(self._remote_id)
                    )
                except ConnectionFailure:
                    pass
        elif msg == wire.MSG_CHANNEL_EXTENDED_DATA:
            pass  # stderr-style data is irrelevant to netconf
        elif msg in (wire.MSG_IGNORE, wire.MSG_DEBUG, wire.MSG_UNIMPLEMENTED):
            pass
        elif msg == wire.MSG_CHANNEL_REQUEST:
            reader = Reader(payload)
            reader.read_byte()
            reader.read_u32()
            reader.read_text()
            if reader.read_boolean():
                self._stream.send_packet(
                    wire.byte(wire.MSG_CHANNEL_FAILURE) + wire.u32(self._remote_id)
                )
        elif msg == wire.MSG_GLOBAL_REQUEST:
            reader = Reader(payload)
            reader.read_byte()
            reader.read_text()
            if reader.read_boolean():
                self._stream.send_packet(wire.byte(wire.MSG_REQUEST_FAILURE))
        elif msg == wire.MSG_DISCONNECT:
            self._eof = True
        else:
            raise ProtocolError(f"unexpected SSH message {msg} on open channel")

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._stream.send_packet(wire.byte(wire.MSG_CHANNEL_EOF) + wire.u32(self._remote_id))
            self._stream.send_packet(wire.byte(wire.MSG_CHANNEL_CLOSE) + wire.u32(self._remote_id))
        except (ConnectionFailure, OSError):
            pass
        try:
            self._stream.sock.close()
        except OSError:
            pass


def connect_netconf_ssh(
    host: str, port: int, username: str, password: str, timeout: float = 10.0
) -> Channel:
    """Open a TCP connection, run the SSH handshake, start the netconf subsystem."""
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except socket.timeout:
        raise ConnectionFailure(f"timeout connecting to {host}:{port}") from None
    except OSError as exc:
        raise ConnectionFailure(f"cannot connect to {host}:{port}: {exc}") from None
    try:
        v_server = exchange_versions(sock, timeout)
        stream = PacketStream(sock)
        shared, digest = client_key_exchange(stream, VERSION_STRING, v_server)
        activate_directional_keys(stream, shared, digest, digest, is_client=True)

        stream.send_packet(wire.byte(wire.MSG_SERVICE_REQUEST) + wire.string(SERVICE_USERAUTH))
        reply = _next_meaningful(stream)
        if reply[0] != wire.MSG_SERVICE_ACCEPT:
            raise ProtocolError("userauth service rejected")

        stream.send_packet(
            wire.byte(wire.MSG_USERAUTH_REQUEST)
            + wire.string(username)
            + wire.string(SERVICE_CONNECTION)
            + wire.string("password")
            + wire.boolean(False)
            + wire.string(password)
        )
        while True:
            reply = _next_meaningful(stream)
            if reply[0] == wire.MSG_USERAUTH_BANNER:
                continue
            break
        if reply[0] == wire.MSG_USERAUTH_FAILURE:
            raise ConnectionFailure(f"authentication failed for user {username!r}")
        if reply[0] != wire.MSG_USERAUTH_SUCCESS:
            raise ProtocolError(f"unexpected userauth reply {reply[0]}")

        local_id = 0
        stream.send_packet(
            wire.byte(wire.MSG_CHANNEL_OPEN)
            + wire.string("session")
            + wire.u32(local_id)
            + wire.u32(INITIAL_WINDOW)
            + wire.u32(MAX_CHANNEL_PACKET)
        )
        reply = _next_meaningful(stream)
        if reply[0] == wire.MSG_CHANNEL_OPEN_FAILURE:
            raise ConnectionFailure("SSH session channel rejected")
        if reply[0] != wire.MSG_CHANNEL_OPEN_CONFIRMATION:
            raise ProtocolError(f"unexpected channel-open reply {reply[0]}")
        reader = Reader(reply)
        reader.read_byte()
        reader.read_u32()  # our id echoed back
        remote_id = reader.read_u32()
        remote_window = reader.read_u32()
        remote_max_packet = reader.read_u32()
        channel = Channel(stream, local_id, remote_id, remote_window, remote_max_packet)

        stream.send_packet(
            wire.byte(wire.MSG_CHANNEL_REQUEST)
            + wire.u32(remote_id)
            + wire.string("subsystem")
            + wire.boolean(True)
            + wire.string(NETCONF_SUBSYSTEM)
        )
        reply = _next_meaningful(stream)
        if reply[0] == wire.MSG_CHANNEL_FAILURE:
            raise ConnectionFailure("netconf subsystem rejected")
        if reply[0] != wire.MSG_CHANNEL_SUCCESS:
            raise ProtocolError(f"unexpected subsystem reply {reply[0]}")
        return channel
    except Exception:
        try:
            sock.close()
        except OSError:
            pass
        raise


def _next_meaningful(stream: PacketStream) -> bytes:
    while True:
        payload = stream.recv_packet()
        if payload[0] in (wire.MSG_IGNORE, wire.MSG_DEBUG):
            continue
        if payload[0] == wire.MSG_DISCONNECT:
            reader = Reader(payload)
            reader.read_byte()
            reader.read_u32()
            raise ConnectionFailure(f"SSH disconnect: {reader.read_text()}")
        return payload


class SSHServer:
    """Accept loop hosting the netconf subsystem for the device simulator."""

    def __init__(self, handler, username: str, password: str, host_key: ed25519.Ed25519PrivateKey | None = None):
        # handler(channel) runs the application protocol and returns when done
        self._handler = handler
        self._username = username
        self._password = password
        self._host_key = host_key or ed25519.Ed25519PrivateKey.generate()

    def handle_socket(self, sock: socket.socket) -> None:
        """Run one SSH session on an accepted socket (blocking)."""
        try:
            self._serve(sock)
        except (ConnectionFailure, ProtocolError):
            pass
        finally:
            try:
                sock.close()
            except OSError:
                pass

    def _serve(self, sock: socket.socket) -> None:
        sock.settimeout(30.0)
        v_client = exchange_versions(sock, 30.0)
        stream = PacketStream(sock)
        shared, digest = server_key_exchange(stream, self._host_key, v_client, VERSION_STRING)
        activate_directional_keys(stream, shared, digest, digest, is_client=False)

        payload = _next_meaningful(stream)
        reader = Reader(payload)
        if reader.read_byte() != wire.MSG_SERVICE_REQUEST or reader.read_text() != SERVICE_USERAUTH:
            raise ProtocolError("expected ssh-userauth service request")
        stream.send_packet(wire.byte(wire.MSG_SERVICE_ACCEPT) + wire.string(SERVICE_USERAUTH))

        if not self._authenticate(stream):
            return

        channel = self._open_channel(stream)
        if channel is None:
            return
        self._handler(channel)
        channel.close()

    def _authenticate(self, stream: PacketStream) -> bool:
        for _ in range(5):
            payload = _next_meaningful(stream)
            reader = Reader(payload)
            if reader.read_byte() != wire.MSG_USERAUTH_REQUEST:
                raise ProtocolError("expected userauth request")
            user = reader.read_text()
            reader.read_text()  # service
            method = reader.read_text()
            if method == "password":
                reader.read_boolean()
                password = reader.read_text()
                if user == self._username and password == self._password:
                    stream.send_packet(wire.byte(wire.MSG_USERAUTH_SUCCESS))
                    return True
            stream.send_packet(
                wire.byte(wire.MSG_USERAUTH_FAILURE)
                + wire.name_list(["password"])
                + wire.boolean(False)
            )
        return False

    def _open_channel(self, stream: PacketStream) -> Channel | None:
        payload = _next_meaningful(stream)
        reader = Reader(payload)
        if reader.read_byte() != wire.MSG_CHANNEL_OPEN:
            raise ProtocolError("expected channel open")
        channel_type = reader.read_text()
        remote_id = reader.read_u32()
        remote_window = reader.read_u32()
        remote_max_packet = reader.read_u32()
        if channel_type != "session":
            stream.send_packet(
                wire.byte(wire.MSG_CHANNEL_OPEN_FAILURE)
                + wire.u32(remote_id)
                + wire.u32(1)
                + wire.string("only session channels are supported")
                + wire.string("en")
            )
            return None
        local_id = 0
        stream.send_packet(
            wire.byte(wire.MSG_CHANNEL_OPEN_CONFIRMATION)
            + wire.u32(remote_id)
            + wire.u32(local_id)
            + wire.u32(INITIAL_WINDOW)
            + wire.u32(MAX_CHANNEL_PACKET)
        )
        payload = _next_meaningful(stream)
        reader = Reader(payload)
        if reader.read_byte() != wire.MSG_CHANNEL_REQUEST:
            raise ProtocolError("expected channel request")
        reader.read_u32()
        request = reader.read_text()
        want_reply = reader.read_boolean()
        subsystem = reader.read_text() if request == "subsystem" else ""
        if request != "subsystem" or subsystem != NETCONF_SUBSYSTEM:
            if want_reply:
                stream.send_packet(wire.byte(wire.MSG_CHANNEL_FAILURE) + wire.u32(remote_id))
            return None
        if want_reply:
            stream.send_packet(wire.byte(wire.MSG_CHANNEL_SUCCESS) + wire.u32(remote_id))
        return Channel(stream, local_id, remote_id, remote_window, remote_max_packet)
