from hypothesis import given, settings
from hypothesis import strategies as st

from netinv.netconf.capabilities import BaseCapability, parse_capability_uri
from netinv.platform.model import ModuleImplementation


def test_base_capability():
    parsed = parse_capability_uri("urn:ietf:params:netconf:base:1.1")
    assert parsed == BaseCapability("urn:ietf:params:netconf:base:1.1")


def test_module_advertisement():
    parsed = parse_capability_uri(
        "urn:ietf:params:xml:ns:yang:ietf-interfaces?module=ietf-interfaces&revision=2014-05-08"
    )
    assert isinstance(parsed, ModuleImplementation)
    assert parsed.identifier.name == "ietf-interfaces"
    assert parsed.identifier.revision == "2014-05-08"
    assert parsed.identifier.namespace == "urn:ietf:params:xml:ns:yang:ietf-interfaces"
    assert parsed.conformance_type == "unknown"


def test_features_comma_split():
    parsed = parse_capability_uri(
        "urn:ietf:params:xml:ns:netconf:base:1.0?module=ietf-netconf&revision=2011-06-01"
        "&features=candidate,validate"
    )
    assert parsed.features == ["candidate", "validate"]


def test_deviations_become_identifiers():
    parsed = parse_capability_uri(
        "urn:x?module=base-mod&revision=2020-01-01&deviations=dev-a,dev-b"
    )
    assert [d.name for d in parsed.deviations] == ["dev-a", "dev-b"]


def test_query_without_module_parameter_is_base():
    parsed = parse_capability_uri("urn:ietf:params:netconf:capability:xpath:1.0?also=this")
    assert isinstance(parsed, BaseCapability)


def test_empty_module_parameter_is_base():
    assert isinstance(parse_capability_uri("urn:x?module="), BaseCapability)


def test_revision_absent():
    parsed = parse_capability_uri("urn:x?module=bare-mod")
    assert parsed.identifier.revision is None


@settings(max_examples=100, deadline=None)
@given(st.text(max_size=120))
def test_parser_is_total(raw):
    parsed = parse_capability_uri(raw)
    assert isinstance(parsed, (BaseCapability, ModuleImplementation))


def advertisement(name, revision=None, features=(), deviations=()):
    uri = f"urn:ns:{name}?module={name}"
    if revision:
        uri += f"&revision={revision}"
    if features:
        uri += "&features=" + ",".join(features)
    if deviations:
        uri += "&deviations=" + ",".join(deviations)
    return uri


def test_round_trip_of_simulator_style_advertisements():
    # the serializer above mirrors how fixtures advertise modules
    uri = advertisement("m-one", "2020-01-01", ["f1", "f2"], ["d1"])
    parsed = parse_capability_uri(uri)
    assert parsed.identifier.name == "m-one"
    assert parsed.identifier.revision == "2020-01-01"
    assert parsed.features == ["f1", "f2"]
    assert [d.name for d in parsed.deviations] == ["d1"]
    assert parse_capability_uri(advertisement("m-one", "2020-01-01", ["f1", "f2"], ["d1"])) == parsed
