"""Exception taxonomy shared across the inventory service."""

from __future__ import annotations


class NetinvError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NetinvError):
    """Input violates a documented invariant (bad entity, bad event, bad regex)."""


class QuerySyntaxError(ValidationError):
    """Malformed q expression; carries the character position of the failure."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotFoundError(NetinvError):
    """Referenced entity, platform, or module does not exist."""


class AlreadyExistsError(NetinvError):
    """Create-only operation hit an existing entity."""


class ConnectionFailure(NetinvError):
    """Could not reach or authenticate with a device or external service."""


class ProtocolError(NetinvError):
    """Peer spoke the protocol incorrectly (bad hello, bad framing, bad XML)."""


class RemoteError(NetinvError):
    """Device or service replied with an explicit error message."""


class TimeoutFailure(ConnectionFailure):
    """Operation did not complete within the configured timeout."""


class RegistrationFailure(NetinvError):
    """Platform registration could not produce any graph content."""
