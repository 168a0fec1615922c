"""Self-contained SSHv2 subset for the NETCONF transport.

One algorithm suite (curve25519-sha256, ssh-ed25519 host keys, aes128-ctr,
hmac-sha2-256), password authentication, and the "netconf" subsystem. The
discovery client and the device simulator are the two peers; host keys are
accepted without verification, which is acceptable for the desk-scale test
tooling this transport exists for.
"""

from .session import SSHServer, connect_netconf_ssh
from .transport import generate_host_key

__all__ = ["SSHServer", "connect_netconf_ssh", "generate_host_key"]
