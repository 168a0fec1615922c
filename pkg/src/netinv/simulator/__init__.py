from .fixtures import Fixture, canonical_fixture, canonical_fixture_names, load_fixture
from .server import DeviceSimulator, serve

__all__ = [
    "DeviceSimulator",
    "Fixture",
    "canonical_fixture",
    "canonical_fixture_names",
    "load_fixture",
    "serve",
]
