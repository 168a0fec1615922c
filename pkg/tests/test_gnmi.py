import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netinv.errors import ConnectionFailure, ValidationError
from netinv.gnmi.client import gnmi_discover
from netinv.gnmi.wire import (
    CapabilitiesReply,
    ModelRecord,
    decode_capability_request,
    decode_capability_response,
    encode_capability_request,
    encode_capability_response,
)
from netinv.netconf.client import ConnectionSpec
from netinv.simulator.fixtures import canonical_fixture, fixture_from_dict
from netinv.simulator.server import serve


def gnmi_spec(sim, **kwargs) -> ConnectionSpec:
    defaults = dict(host="127.0.0.1", port=sim.ports["gnmi"], transport="gnmi", timeout=5.0)
    defaults.update(kwargs)
    return ConnectionSpec(**defaults)


# -- wire codec ---------------------------------------------------------------------


def test_capability_request_is_empty():
    from netinv.gnmi.wire import CapabilityRequest

    assert encode_capability_request() == b""
    assert decode_capability_request(b"") == CapabilityRequest()
    # unknown fields (extensions) are tolerated
    assert decode_capability_request(b"\x0a\x03abc") == CapabilityRequest()


names = st.text(
    alphabet=st.characters(whitelist_categories=["Ll", "Lu", "Nd"], whitelist_characters="-_."),
    min_size=0,
    max_size=30,
)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.builds(ModelRecord, name=names, organization=names, version=names), max_size=5),
    st.lists(st.sampled_from(["JSON", "BYTES", "PROTO", "ASCII", "JSON_IETF"]), max_size=4),
    names,
)
def test_capability_response_round_trip(models, encodings, version):
    reply = CapabilitiesReply(models=models, encodings=encodings, gnmi_version=version)
    decoded = decode_capability_response(encode_capability_response(reply))
    assert decoded.models == models
    assert decoded.encodings == encodings
    assert decoded.gnmi_version == version


def test_decode_accepts_unpacked_enums():
    # same field written one varint at a time (tag 0x10 = field 2, wire type 0)
    data = b"\x10\x04\x10\x02"
    decoded = decode_capability_response(data)
    assert decoded.encodings == ["JSON_IETF", "PROTO"]


def test_decode_skips_unknown_fields():
    reply = CapabilitiesReply(gnmi_version="0.7.0")
    payload = encode_capability_response(reply) + b"\x22\x03abc"  # field 4: extensions
    assert decode_capability_response(payload).gnmi_version == "0.7.0"


# -- loopback -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def gnmi_sim():
    with serve(canonical_fixture("f-gnmi"), ephemeral_ports=True) as sim:
        yield sim


def test_gnmi_discovery_of_fixture(gnmi_sim):
    discovery = gnmi_discover(gnmi_spec(gnmi_sim))
    assert discovery.yang_library is None
    assert [m.identifier.name for m in discovery.hello_modules] == ["openconfig-interfaces"]
    module = discovery.hello_modules[0]
    assert module.identifier.revision == "2.5.0"
    assert module.organization == "OpenConfig working group"
    assert module.conformance_type == "unknown"
    assert discovery.protocol.encodings == ["JSON_IETF", "PROTO"]
    assert discovery.protocol.version == "0.7.0"
    assert discovery.protocol.kind == "gnmi"


def test_gnmi_empty_model_list():
    fixture = fixture_from_dict(
        {
            "name": "simx-gnmi-empty",
            "transports": [{"kind": "gnmi", "port": 0}],
            "gnmi-encodings": ["JSON"],
        }
    )
    with serve(fixture, ephemeral_ports=True) as sim:
        discovery = gnmi_discover(gnmi_spec(sim))
        assert discovery.hello_modules == []
        assert discovery.protocol.encodings == ["JSON"]


def test_gnmi_unreachable_port_is_connection_failure():
    import socket

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        free = probe.getsockname()[1]
    spec = ConnectionSpec(host="127.0.0.1", port=free, transport="gnmi", timeout=1.5)
    with pytest.raises(ConnectionFailure):
        gnmi_discover(spec)


def test_gnmi_rejects_non_gnmi_transport():
    spec = ConnectionSpec(host="127.0.0.1", port=1, transport="netconf-tcp")
    with pytest.raises(ValidationError):
        gnmi_discover(spec)


# -- TLS ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def tls_sim():
    fixture = canonical_fixture("f-gnmi")
    fixture.name = "simx-gnmi-tls"
    fixture.gnmi_tls = True
    with serve(fixture, ephemeral_ports=True) as sim:
        yield sim


def test_tls_server_with_plaintext_client_fails(tls_sim):
    with pytest.raises(ConnectionFailure):
        gnmi_discover(gnmi_spec(tls_sim, tls=False, timeout=2.0))


def test_tls_with_pinned_ca_succeeds(tls_sim, tmp_path):
    ca = tmp_path / "ca.pem"
    ca.write_bytes(tls_sim.ca_cert_pem)
    discovery = gnmi_discover(gnmi_spec(tls_sim, tls=True, ca_cert=str(ca)))
    assert discovery.protocol.encodings == ["JSON_IETF", "PROTO"]


def test_tls_without_trust_anchor_fails(tls_sim):
    with pytest.raises(ConnectionFailure):
        gnmi_discover(gnmi_spec(tls_sim, tls=True, timeout=2.0))
