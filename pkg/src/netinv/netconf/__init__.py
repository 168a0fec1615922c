from .capabilities import BaseCapability, parse_capability_uri
from .client import CapabilityDiscovery, ConnectionSpec, netconf_discover

__all__ = [
    "BaseCapability",
    "CapabilityDiscovery",
    "ConnectionSpec",
    "netconf_discover",
    "parse_capability_uri",
]
