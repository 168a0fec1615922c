from collections import Counter

import pytest

from netinv.context.store import ContextStore
from netinv.errors import ValidationError
from netinv.ids import platform_urn
from netinv.platform.mappers import (
    map_hello_fallback,
    map_modules_state,
    map_platform,
    map_yang_library_nmda,
)
from netinv.platform.model import (
    ModuleIdentifier,
    ModuleImplementation,
    ModulesStateDocument,
    ModuleSetDef,
    PlatformInfo,
    ProtocolInfo,
    YangLibraryDocument,
)
from netinv.simulator.fixtures import canonical_fixture

PID = platform_urn("simx-nmda")


def by_type(entity_list) -> Counter:
    return Counter(e.type for e in entity_list)


def find(entity_list, entity_id):
    for entity in entity_list:
        if entity.id == entity_id:
            return entity
    raise AssertionError(f"{entity_id} not in mapper output")


def test_map_platform_single_netconf():
    entities = map_platform(
        PlatformInfo(name="simx-nmda"),
        [ProtocolInfo(kind="netconf", host="127.0.0.1", port=8300)],
    )
    assert [e.id for e in entities] == [
        "urn:ngsi-ld:Platform:simx-nmda",
        "urn:ngsi-ld:Protocol:simx-nmda:netconf:127.0.0.1:8300",
    ]


def test_map_platform_without_protocols():
    entities = map_platform(PlatformInfo(name="bare"), [])
    assert len(entities) == 1
    assert entities[0].type == "Platform"


def test_map_platform_two_protocols_share_target():
    entities = map_platform(
        PlatformInfo(name="dual", vendor="acme", model="rx-1"),
        [
            ProtocolInfo(kind="netconf", host="10.0.0.1", port=830),
            ProtocolInfo(kind="gnmi", host="10.0.0.1", port=57400),
        ],
    )
    assert len(entities) == 3
    platform_id = entities[0].id
    for proto in entities[1:]:
        assert proto.instance("ofPlatform").object == platform_id
    assert entities[0].first_value("vendor") == "acme"
    assert entities[0].first_value("model") == "rx-1"


def test_nmda_fixture_counts():
    # hand-trace of the NMDA fixture: 2 datastores over 1 schema over 1 set,
    # 5 modules of which one is import-only, plus 1 submodule
    doc = canonical_fixture("f-nmda").yang_library
    entities = map_yang_library_nmda(PID, doc)
    counts = by_type(entities)
    assert counts == Counter(
        {"Datastore": 2, "Schema": 1, "ModuleSet": 1, "Module": 5, "Submodule": 1}
    )
    inet = find(entities, "urn:ngsi-ld:Module:ietf-inet-types:2013-07-15")
    inst = inet.instance("belongsTo", "urn:ngsi-ld:ModuleSet:simx-nmda:common")
    assert inst.sub_attributes["conformanceType"][0].value == "import"


def test_nmda_empty_document_maps_to_nothing():
    assert map_yang_library_nmda(PID, YangLibraryDocument()) == []


def test_nmda_shared_module_across_sets():
    shared = ModuleImplementation(
        identifier=ModuleIdentifier("ietf-interfaces", "2018-02-20")
    )
    doc = YangLibraryDocument(
        module_sets=[
            ModuleSetDef(name="s1", modules=[shared]),
            ModuleSetDef(name="s2", modules=[shared]),
        ]
    )
    entities = map_yang_library_nmda(PID, doc)
    modules = [e for e in entities if e.type == "Module"]
    assert len(modules) == 1
    dataset_ids = {i.dataset_id for i in modules[0].attributes["belongsTo"]}
    assert dataset_ids == {
        "urn:ngsi-ld:ModuleSet:simx-nmda:s1",
        "urn:ngsi-ld:ModuleSet:simx-nmda:s2",
    }


def test_nmda_relationship_closure():
    doc = canonical_fixture("f-nmda").yang_library
    entities = map_yang_library_nmda(PID, doc)
    ids = {e.id for e in entities}
    for entity in entities:
        if entity.type == "Datastore":
            assert entity.instance("hasSchema").object in ids
        if entity.type == "Schema":
            for inst in entity.attributes["hasModuleSet"]:
                assert inst.object in ids
        for inst in entity.attributes.get("belongsTo", []):
            assert inst.dataset_id == inst.object
            assert inst.object in ids


def test_nmda_datastore_and_moduleset_point_at_platform():
    doc = canonical_fixture("f-nmda").yang_library
    entities = map_yang_library_nmda(PID, doc)
    for entity in entities:
        if entity.type in ("Datastore", "ModuleSet"):
            assert entity.instance("ofPlatform").object == PID


def test_nmda_submodule_links_to_parent():
    doc = canonical_fixture("f-nmda").yang_library
    entities = map_yang_library_nmda(PID, doc)
    sub = find(entities, "urn:ngsi-ld:Submodule:ietf-snmp-common:2014-12-10")
    parent = "urn:ngsi-ld:Module:ietf-snmp:2014-12-10"
    assert sub.instance("isSubmoduleOf", parent).object == parent


def test_nmda_rejects_invalid_document():
    doc = YangLibraryDocument(
        module_sets=[],
        schemas=[],
        datastores=[{"name": "running", "schema_name": "nosuch"}],
    )
    from netinv.platform.model import DatastoreDef

    doc.datastores = [DatastoreDef(name="running", schema_name="nosuch")]
    with pytest.raises(ValidationError):
        map_yang_library_nmda(PID, doc)


def test_legacy_fixture_counts():
    doc = canonical_fixture("f-legacy").modules_state
    pid = platform_urn("simx-legacy")
    entities = map_modules_state(pid, doc)
    counts = by_type(entities)
    assert counts == Counter({"ModuleSet": 1, "Module": 3})
    yang_types = find(entities, "urn:ngsi-ld:Module:ietf-yang-types:2013-07-15")
    inst = yang_types.instance("belongsTo", "urn:ngsi-ld:ModuleSet:simx-legacy:modules-state")
    assert inst.sub_attributes["conformanceType"][0].value == "import"


def test_legacy_empty_module_list():
    entities = map_modules_state(PID, ModulesStateDocument())
    assert by_type(entities) == Counter({"ModuleSet": 1})
    assert entities[0].first_value("name") == "modules-state"


def test_legacy_deviation_emits_relationship_and_placeholder():
    doc = ModulesStateDocument(
        modules=[
            ModuleImplementation(
                identifier=ModuleIdentifier("ietf-interfaces", "2014-05-08"),
                deviations=[ModuleIdentifier("vendorx-if-dev", "2020-01-01")],
            )
        ]
    )
    entities = map_modules_state(PID, doc)
    mod = find(entities, "urn:ngsi-ld:Module:ietf-interfaces:2014-05-08")
    inst = mod.attributes["belongsTo"][0]
    dev_urn = "urn:ngsi-ld:Module:vendorx-if-dev:2020-01-01"
    assert inst.sub_attributes["deviatedBy"][0].object == dev_urn
    placeholder = find(entities, dev_urn)
    assert placeholder.first_value("placeholder") is True


def test_fallback_fixture_counts_and_conformance():
    from netinv.netconf.capabilities import parse_capability_uri

    fixture = canonical_fixture("f-bare")
    mods = [
        parsed
        for parsed in (parse_capability_uri(u) for u in fixture.hello_capabilities)
        if isinstance(parsed, ModuleImplementation)
    ]
    entities = map_hello_fallback(platform_urn("simx-bare"), mods)
    assert by_type(entities) == Counter({"ModuleSet": 1, "Module": 2})
    for entity in entities:
        for inst in entity.attributes.get("belongsTo", []):
            assert inst.sub_attributes["conformanceType"][0].value == "unknown"


def test_fallback_empty_capability_list():
    entities = map_hello_fallback(PID, [])
    assert by_type(entities) == Counter({"ModuleSet": 1})


def test_fallback_deduplicates_same_name_revision():
    impl = ModuleImplementation(identifier=ModuleIdentifier("dup-mod", "2020-01-01"))
    entities = map_hello_fallback(PID, [impl, impl])
    modules = [e for e in entities if e.type == "Module"]
    assert len(modules) == 1
    assert len(modules[0].attributes["belongsTo"]) == 1


def test_fallback_keeps_gnmi_organization_and_version_revision():
    impl = ModuleImplementation(
        identifier=ModuleIdentifier("openconfig-interfaces", "2.5.0"),
        organization="OpenConfig working group",
    )
    entities = map_hello_fallback(PID, [impl])
    mod = find(entities, "urn:ngsi-ld:Module:openconfig-interfaces:2.5.0")
    assert mod.first_value("revisionKnown") is False
    inst = mod.attributes["belongsTo"][0]
    assert inst.sub_attributes["organization"][0].value == "OpenConfig working group"


def test_mappers_are_deterministic():
    doc = canonical_fixture("f-nmda").yang_library
    first = [e.sorted_canonical() for e in map_yang_library_nmda(PID, doc)]
    second = [e.sorted_canonical() for e in map_yang_library_nmda(PID, doc)]
    assert first == second


def test_global_module_identity_per_output():
    doc = canonical_fixture("f-nmda").yang_library
    entities = map_yang_library_nmda(PID, doc)
    keys = [
        (e.first_value("name"), e.first_value("revision"))
        for e in entities
        if e.type == "Module"
    ]
    assert len(keys) == len(set(keys))


def test_non_nmda_outputs_exclude_datastores_and_schemas():
    legacy = map_modules_state(PID, canonical_fixture("f-legacy").modules_state)
    fallback = map_hello_fallback(PID, [])
    for entities in (legacy, fallback):
        assert not [e for e in entities if e.type in ("Datastore", "Schema")]


def test_reregistration_merge_is_idempotent():
    doc = canonical_fixture("f-nmda").yang_library
    store = ContextStore()
    store.batch_upsert(map_yang_library_nmda(PID, doc), mode="merge")
    before = store.canonical_bytes()
    store.batch_upsert(map_yang_library_nmda(PID, doc), mode="merge")
    assert store.canonical_bytes() == before


def test_features_mapped_when_present():
    doc = ModulesStateDocument(
        modules=[
            ModuleImplementation(
                identifier=ModuleIdentifier("ietf-netconf", "2011-06-01"),
                features=["candidate", "validate"],
            )
        ]
    )
    entities = map_modules_state(PID, doc)
    mod = find(entities, "urn:ngsi-ld:Module:ietf-netconf:2011-06-01")
    inst = mod.attributes["belongsTo"][0]
    assert inst.sub_attributes["features"][0].value == ["candidate", "validate"]
