"""SSH transport layer: version exchange, binary packets, key exchange.

Implements exactly one algorithm suite. The packet stream runs unencrypted
until NEWKEYS, then switches to aes128-ctr with hmac-sha2-256 in the classic
MAC-then-encrypt arrangement.
"""

from __future__ import annotations

import hashlib
import hmac as hmac_mod
import os
import socket
import struct

from cryptography.hazmat.primitives.asymmetric import ed25519, x25519
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from ..errors import ConnectionFailure, ProtocolError, TimeoutFailure
from . import wire
from .wire import Reader

VERSION_STRING = "SSH-2.0-netinv_0.1"

KEX_ALGORITHM = "curve25519-sha256"
HOST_KEY_ALGORITHM = "ssh-ed25519"
CIPHER = "aes128-ctr"
MAC = "hmac-sha2-256"
COMPRESSION = "none"

MAX_PACKET = 256 * 1024


def generate_host_key() -> ed25519.Ed25519PrivateKey:
    return ed25519.Ed25519PrivateKey.generate()


def host_key_blob(key: ed25519.Ed25519PrivateKey) -> bytes:
    raw = key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    return wire.string(HOST_KEY_ALGORITHM) + wire.string(raw)


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        try:
            piece = sock.recv(n - len(buf))
        except socket.timeout:
            raise TimeoutFailure("SSH peer timed out") from None
        except OSError as exc:
            raise ConnectionFailure(f"SSH connection lost: {exc}") from None
        if not piece:
            raise ConnectionFailure("SSH connection closed by peer")
        buf.extend(piece)
    return bytes(buf)


class PacketStream:
    """Sequenced SSH binary packets over a socket, with optional crypto."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self._seq_out = 0
        self._seq_in = 0
        self._encryptor = None
        self._decryptor = None
        self._mac_out: bytes | None = None
        self._mac_in: bytes | None = None

    def activate_keys(self, iv_out, key_out, mac_out, iv_in, key_in, mac_in) -> None:
        self._encryptor = Cipher(algorithms.AES(key_out), modes.CTR(iv_out)).encryptor()
        self._decryptor = Cipher(algorithms.AES(key_in), modes.CTR(iv_in)).decryptor()
        self._mac_out = mac_out
        self._mac_in = mac_in

    def send_packet(self, payload: bytes) -> None:
        block = 16 if self._encryptor else 8
        pad_len = block - ((len(payload) + 5) % block)
        if pad_len < 4:
            pad_len += block
        packet = struct.pack(">IB", len(payload) + pad_len + 1, pad_len)
        packet += payload + os.urandom(pad_len)
        if self._encryptor:
            mac = hmac_mod.new(
                self._mac_out, wire.u32(self._seq_out) + packet, hashlib.sha256
            ).digest()
            data = self._encryptor.update(packet) + mac
        else:
            data = packet
        try:
            self.sock.sendall(data)
        except socket.timeout:
            raise TimeoutFailure("SSH peer timed out") from None
        except OSError as exc:
            raise ConnectionFailure(f"SSH connection lost: {exc}") from None
        self._seq_out = (self._seq_out + 1) & 0xFFFFFFFF

    def recv_packet(self) -> bytes:
        if self._decryptor:
            first = self._decryptor.update(_recv_exact(self.sock, 16))
            packet_len = struct.unpack(">I", first[:4])[0]
            if not (1 <= packet_len <= MAX_PACKET):
                raise ProtocolError(f"bad SSH packet length {packet_len}")
            rest_len = packet_len + 4 - 16
            rest = self._decryptor.update(_recv_exact(self.sock, rest_len)) if rest_len else b""
            packet = first + rest
            mac = _recv_exact(self.sock, 32)
            expect = hmac_mod.new(
                self._mac_in, wire.u32(self._seq_in) + packet, hashlib.sha256
            ).digest()
            if not hmac_mod.compare_digest(mac, expect):
                raise ProtocolError("SSH MAC verification failed")
        else:
            header = _recv_exact(self.sock, 4)
            packet_len = struct.unpack(">I", header)[0]
            if not (1 <= packet_len <= MAX_PACKET):
                raise ProtocolError(f"bad SSH packet length {packet_len}")
            packet = header + _recv_exact(self.sock, packet_len)
        pad_len = packet[4]
        if pad_len < 4 or pad_len + 1 > packet_len:
            raise ProtocolError("bad SSH padding")
        payload = packet[5 : 4 + packet_len - pad_len]
        self._seq_in = (self._seq_in + 1) & 0xFFFFFFFF
        return payload


def exchange_versions(sock: socket.socket, timeout: float) -> str:
    """Send our identification line, return the peer's (sans CRLF)."""
    sock.settimeout(timeout)
    try:
        sock.sendall((VERSION_STRING + "\r\n").encode("ascii"))
    except OSError as exc:
        raise ConnectionFailure(f"SSH connection lost: {exc}") from None
    for _ in range(32):  # peers may send banner lines before the version
        line = bytearray()
        while not line.endswith(b"\n"):
            ch = _recv_exact(sock, 1)
            line.extend(ch)
            if len(line) > 1024:
                raise ProtocolError("oversized SSH identification line")
        text = bytes(line).rstrip(b"\r\n").decode("ascii", "replace")
        if text.startswith("SSH-"):
            if not (text.startswith("SSH-2.0-") or text.startswith("SSH-1.99-")):
                raise ProtocolError(f"unsupported SSH version {text!r}")
            return text
    raise ProtocolError("no SSH identification line received")


def build_kexinit() -> bytes:
    payload = wire.byte(wire.MSG_KEXINIT) + os.urandom(16)
    for names in (
        [KEX_ALGORITHM],
        [HOST_KEY_ALGORITHM],
        [CIPHER],
        [CIPHER],
        [MAC],
        [MAC],
        [COMPRESSION],
        [COMPRESSION],
        [],
        [],
    ):
        payload += wire.name_list(names)
    payload += wire.boolean(False) + wire.u32(0)
    return payload


def check_kexinit(payload: bytes) -> None:
    reader = Reader(payload)
    if reader.read_byte() != wire.MSG_KEXINIT:
        raise ProtocolError("expected KEXINIT")
    reader.skip(16)  # cookie
    lists = [reader.read_name_list() for _ in range(10)]
    for ours, theirs, label in (
        (KEX_ALGORITHM, lists[0], "kex"),
        (HOST_KEY_ALGORITHM, lists[1], "host key"),
        (CIPHER, lists[2], "cipher c->s"),
        (CIPHER, lists[3], "cipher s->c"),
        (MAC, lists[4], "mac c->s"),
        (MAC, lists[5], "mac s->c"),
        (COMPRESSION, lists[6], "compression c->s"),
        (COMPRESSION, lists[7], "compression s->c"),
    ):
        if ours not in theirs:
            raise ProtocolError(f"peer does not support {label} {ours}")


def exchange_hash(
    v_client: str,
    v_server: str,
    kexinit_client: bytes,
    kexinit_server: bytes,
    host_key: bytes,
    q_client: bytes,
    q_server: bytes,
    shared: bytes,
) -> bytes:
    blob = (
        wire.string(v_client)
        + wire.string(v_server)
        + wire.string(kexinit_client)
        + wire.string(kexinit_server)
        + wire.string(host_key)
        + wire.string(q_client)
        + wire.string(q_server)
        + wire.mpint_from_bytes(shared)
    )
    return hashlib.sha256(blob).digest()


def derive_key(shared: bytes, session_hash: bytes, session_id: bytes, letter: bytes, size: int) -> bytes:
    k = wire.mpint_from_bytes(shared)
    out = hashlib.sha256(k + session_hash + letter + session_id).digest()
    while len(out) < size:
        out += hashlib.sha256(k + session_hash + out).digest()
    return out[:size]


def activate_directional_keys(
    stream: PacketStream, shared: bytes, session_hash: bytes, session_id: bytes, is_client: bool
) -> None:
    def key(letter: str, size: int) -> bytes:
        return derive_key(shared, session_hash, session_id, letter.encode(), size)

    # letters per RFC 4253 7.2: A/B IVs, C/D cipher keys, E/F MAC keys (c->s first)
    if is_client:
        stream.activate_keys(
            key("A", 16), key("C", 16), key("E", 32), key("B", 16), key("D", 16), key("F", 32)
        )
    else:
        stream.activate_keys(
            key("B", 16), key("D", 16), key("F", 32), key("A", 16), key("C", 16), key("E", 32)
        )


def client_key_exchange(
    stream: PacketStream, v_client: str, v_server: str
) -> tuple[bytes, bytes]:
    """Run the full kex from the client side; returns (shared, exchange hash)."""
    our_kexinit = build_kexinit()
    stream.send_packet(our_kexinit)
    peer_kexinit = stream.recv_packet()
    check_kexinit(peer_kexinit)

    eph = x25519.X25519PrivateKey.generate()
    q_c = eph.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    stream.send_packet(wire.byte(wire.MSG_KEX_ECDH_INIT) + wire.string(q_c))

    reader = Reader(stream.recv_packet())
    if reader.read_byte() != wire.MSG_KEX_ECDH_REPLY:
        raise ProtocolError("expected KEX_ECDH_REPLY")
    host_blob = reader.read_string()
    q_s = reader.read_string()
    signature_blob = reader.read_string()

    shared = eph.exchange(x25519.X25519PublicKey.from_public_bytes(q_s))
    digest = exchange_hash(v_client, v_server, our_kexinit, peer_kexinit, host_blob, q_c, q_s, shared)

    key_reader = Reader(host_blob)
    if key_reader.read_text() != HOST_KEY_ALGORITHM:
        raise ProtocolError("unexpected host key type")
    public = ed25519.Ed25519PublicKey.from_public_bytes(key_reader.read_string())
    sig_reader = Reader(signature_blob)
    if sig_reader.read_text() != HOST_KEY_ALGORITHM:
        raise ProtocolError("unexpected signature type")
    try:
        public.verify(sig_reader.read_string(), digest)
    except Exception:
        raise ProtocolError("host key signature verification failed") from None

    stream.send_packet(wire.byte(wire.MSG_NEWKEYS))
    if stream.recv_packet() != wire.byte(wire.MSG_NEWKEYS):
        raise ProtocolError("expected NEWKEYS")
    return shared, digest


def server_key_exchange(
    stream: PacketStream, host_key: ed25519.Ed25519PrivateKey, v_client: str, v_server: str
) -> tuple[bytes, bytes]:
    our_kexinit = build_kexinit()
    stream.send_packet(our_kexinit)
    peer_kexinit = stream.recv_packet()
    check_kexinit(peer_kexinit)

    reader = Reader(stream.recv_packet())
    if reader.read_byte() != wire.MSG_KEX_ECDH_INIT:
        raise ProtocolError("expected KEX_ECDH_INIT")
    q_c = reader.read_string()

    eph = x25519.X25519PrivateKey.generate()
    q_s = eph.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    shared = eph.exchange(x25519.X25519PublicKey.from_public_bytes(q_c))
    blob = host_key_blob(host_key)
    digest = exchange_hash(v_client, v_server, peer_kexinit, our_kexinit, blob, q_c, q_s, shared)
    signature = wire.string(HOST_KEY_ALGORITHM) + wire.string(host_key.sign(digest))

    stream.send_packet(
        wire.byte(wire.MSG_KEX_ECDH_REPLY)
        + wire.string(blob)
        + wire.string(q_s)
        + wire.string(signature)
    )
    stream.send_packet(wire.byte(wire.MSG_NEWKEYS))
    if stream.recv_packet() != wire.byte(wire.MSG_NEWKEYS):
        raise ProtocolError("expected NEWKEYS")
    return shared, digest
