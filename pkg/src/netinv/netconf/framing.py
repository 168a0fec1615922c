"""NETCONF message framing.

Two codecs exist: the 1.0 end-of-message delimiter (``]]>]]>``) used for the
hello exchange and base:1.0 sessions, and the 1.1 chunked encoding used once
both peers advertise base:1.1. Decoders are incremental so they can sit on a
byte stream that delivers arbitrary fragments.
"""

from __future__ import annotations

from ..errors import ProtocolError

EOM = b"]]>]]>"

MAX_CHUNK_SIZE = 4294967295  # chunk-size field is at most 10 digits per the framing rules
MAX_MESSAGE_SIZE = 64 * 1024 * 1024  # guard against a runaway peer


def encode_eom(message: bytes) -> bytes:
    if EOM in message:
        raise ProtocolError("message contains the end-of-message delimiter")
    return message + EOM


class EOMDecoder:
    def __init__(self) -> None:
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[bytes]:
        self._buffer.extend(data)
        if len(self._buffer) > MAX_MESSAGE_SIZE:
            raise ProtocolError("message exceeds the size limit")
        messages = []
        while True:
            idx = self._buffer.find(EOM)
            if idx < 0:
                return messages
            messages.append(bytes(self._buffer[:idx]))
            del self._buffer[: idx + len(EOM)]

    @property
    def pending(self) -> bool:
        return bool(self._buffer)

    def take_buffer(self) -> bytes:
        """Hand over undecoded residue (bytes of a message in the next framing)."""
        residue = bytes(self._buffer)
        self._buffer.clear()
        return residue


def encode_chunked(message: bytes, chunk_size: int | None = None) -> bytes:
    """Encode one message; chunk_size forces splitting (exercised by tests)."""
    if not message:
        raise ProtocolError("cannot frame an empty message")
    size = chunk_size or len(message)
    if not (0 < size <= MAX_CHUNK_SIZE):
        raise ProtocolError(f"bad chunk size {size}")
    out = bytearray()
    for start in range(0, len(message), size):
        piece = message[start : start + size]
        out.extend(b"\n#%d\n" % len(piece))
        out.extend(piece)
    out.extend(b"\n##\n")
    return bytes(out)


class ChunkedDecoder:
    """Incremental RFC-style chunked decoder.

    States: expecting a chunk header, consuming chunk data, or done with a
    message once the end-of-chunks marker arrives.
    """

    def __init__(self) -> None:
        self._buffer = bytearray()
        self._message = bytearray()
        self._remaining = 0  # bytes still owed to the current chunk

    def feed(self, data: bytes) -> list[bytes]:
        self._buffer.extend(data)
        messages: list[bytes] = []
        while True:
            if self._remaining:
                take = min(self._remaining, len(self._buffer))
                if not take:
                    return messages
                self._message.extend(self._buffer[:take])
                del self._buffer[:take]
                self._remaining -= take
                continue
            header = self._parse_header()
            if header is None:
                return messages
            if header == 0:  # end-of-chunks
                if not self._message:
                    raise ProtocolError("chunked message with no content")
                messages.append(bytes(self._message))
                self._message = bytearray()
            else:
                self._remaining = header
                if len(self._message) + self._remaining > MAX_MESSAGE_SIZE:
                    raise ProtocolError("message exceeds the size limit")

    def _parse_header(self) -> int | None:
        """Returns chunk size, 0 for end-of-chunks, None when incomplete."""
        buf = self._buffer
        if len(buf) < 4:  # shortest frame is \n##\n
            return None
        if not buf.startswith(b"\n#"):
            raise ProtocolError("bad chunk header start")
        if buf.startswith(b"\n##\n"):
            del buf[:4]
            return 0
        end = buf.find(b"\n", 2)
        if end < 0:
            if len(buf) > 13:  # \n# + 10 digits + \n
                raise ProtocolError("oversized chunk header")
            return None
        digits = bytes(buf[2:end])
        if not digits.isdigit() or digits.startswith(b"0") or len(digits) > 10:
            raise ProtocolError(f"bad chunk size field {digits!r}")
        size = int(digits)
        if size > MAX_CHUNK_SIZE:
            raise ProtocolError(f"chunk size {size} too large")
        del buf[: end + 1]
        return size

    @property
    def pending(self) -> bool:
        return bool(self._buffer) or bool(self._message) or self._remaining > 0
