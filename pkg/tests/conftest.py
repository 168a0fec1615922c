"""Shared fixtures: in-process service, simulators, port helpers."""

from __future__ import annotations

import socket
import threading
import time

import pytest
import uvicorn

SESSION_START = time.monotonic()


def pytest_collection_modifyitems(config, items):
    """Run the acceptance module last so its wall-clock check covers the suite."""
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class UvicornThread:
    """A uvicorn server on an ephemeral port, stoppable from the test thread."""

    def __init__(self, app):
        self._config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
        self._server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self) -> "UvicornThread":
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("uvicorn did not start in time")
            time.sleep(0.01)
        return self

    @property
    def port(self) -> int:
        return self._server.servers[0].sockets[0].getsockname()[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=5)


@pytest.fixture
def http_server():
    """Factory fixture: start apps on ephemeral ports, stop them afterwards."""
    servers: list[UvicornThread] = []

    def start(app) -> UvicornThread:
        server = UvicornThread(app).start()
        servers.append(server)
        return server

    yield start
    for server in servers:
        server.stop()
