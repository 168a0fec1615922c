"""SSH wire primitives: message numbers and the field encodings of RFC 4251."""

from __future__ import annotations

import struct

from ..errors import ProtocolError

MSG_DISCONNECT = 1
MSG_IGNORE = 2
MSG_UNIMPLEMENTED = 3
MSG_DEBUG = 4
MSG_SERVICE_REQUEST = 5
MSG_SERVICE_ACCEPT = 6
MSG_KEXINIT = 20
MSG_NEWKEYS = 21
MSG_KEX_ECDH_INIT = 30
MSG_KEX_ECDH_REPLY = 31
MSG_USERAUTH_REQUEST = 50
MSG_USERAUTH_FAILURE = 51
MSG_USERAUTH_SUCCESS = 52
MSG_USERAUTH_BANNER = 53
MSG_GLOBAL_REQUEST = 80
MSG_REQUEST_SUCCESS = 81
MSG_REQUEST_FAILURE = 82
MSG_CHANNEL_OPEN = 90
MSG_CHANNEL_OPEN_CONFIRMATION = 91
MSG_CHANNEL_OPEN_FAILURE = 92
MSG_CHANNEL_WINDOW_ADJUST = 93
MSG_CHANNEL_DATA = 94
MSG_CHANNEL_EXTENDED_DATA = 95
MSG_CHANNEL_EOF = 96
MSG_CHANNEL_CLOSE = 97
MSG_CHANNEL_REQUEST = 98
MSG_CHANNEL_SUCCESS = 99
MSG_CHANNEL_FAILURE = 100

DISCONNECT_PROTOCOL_ERROR = 2
DISCONNECT_BY_APPLICATION = 11


def u32(value: int) -> bytes:
    return struct.pack(">I", value)


def byte(value: int) -> bytes:
    return struct.pack(">B", value)


def boolean(value: bool) -> bytes:
    return b"\x01" if value else b"\x00"


def string(data: bytes | str) -> bytes:
    raw = data.encode("utf-8") if isinstance(data, str) else data
    return u32(len(raw)) + raw


def name_list(names: list[str]) -> bytes:
    return string(",".join(names))


def mpint(value: int) -> bytes:
    if value == 0:
        return u32(0)
    if value < 0:
        raise ProtocolError("negative mpint not supported")
    raw = value.to_bytes((value.bit_length() + 7) // 8, "big")
    if raw[0] & 0x80:
        raw = b"\x00" + raw
    return string(raw)


def mpint_from_bytes(raw: bytes) -> bytes:
    """Encode a fixed-length big-endian secret as an mpint."""
    return mpint(int.from_bytes(raw, "big"))


class Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise ProtocolError("truncated SSH message")
        piece = self._data[self._pos : self._pos + n]
        self._pos += n
        return piece

    def read_byte(self) -> int:
        return self._take(1)[0]

    def skip(self, n: int) -> None:
        self._take(n)

    def read_boolean(self) -> bool:
        return self._take(1)[0] != 0

    def read_u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def read_string(self) -> bytes:
        return self._take(self.read_u32())

    def read_text(self) -> str:
        return self.read_string().decode("utf-8")

    def read_name_list(self) -> list[str]:
        text = self.read_text()
        return text.split(",") if text else []

    def remainder(self) -> bytes:
        return self._data[self._pos :]

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._data)
