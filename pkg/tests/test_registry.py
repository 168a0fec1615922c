import pytest
from fastapi.testclient import TestClient

from netinv.context.model import Query
from netinv.context.store import ContextStore
from netinv.errors import NotFoundError, RegistrationFailure
from netinv.netconf.client import ConnectionSpec
from netinv.registry.service import PlatformRegistry, RegistrationEvent
from netinv.service import create_app
from netinv.simulator.fixtures import canonical_fixture, fixture_from_dict
from netinv.simulator.server import serve


@pytest.fixture(scope="module")
def sims():
    handles = {}
    for name in ("f-nmda", "f-legacy", "f-bare", "f-gnmi", "f-shared"):
        handles[name] = serve(canonical_fixture(name), ephemeral_ports=True)
    yield handles
    for sim in handles.values():
        sim.stop()


def tcp_event(platform: str, sim, **kwargs) -> RegistrationEvent:
    return RegistrationEvent(
        platform_name=platform,
        connections=[
            ConnectionSpec(
                host="127.0.0.1",
                port=sim.ports["netconf-tcp"],
                transport="netconf-tcp",
                timeout=5.0,
            )
        ],
        **kwargs,
    )


def gnmi_event(platform: str, sim) -> RegistrationEvent:
    return RegistrationEvent(
        platform_name=platform,
        connections=[
            ConnectionSpec(
                host="127.0.0.1", port=sim.ports["gnmi"], transport="gnmi", timeout=5.0
            )
        ],
    )


def fresh() -> tuple[ContextStore, PlatformRegistry]:
    store = ContextStore()
    return store, PlatformRegistry(store)


def test_nmda_registration_counts(sims):
    store, registry = fresh()
    report = registry.register(tcp_event("simx-nmda", sims["f-nmda"], vendor="simvendor"))
    assert report.mode == "nmda"
    assert report.counts == {
        "datastores": 2,
        "schemas": 1,
        "moduleSets": 1,
        "modules": 5,
        "submodules": 1,
    }
    assert report.platform_id == "urn:ngsi-ld:Platform:simx-nmda"
    assert report.warnings == []
    inet = store.get_entity("urn:ngsi-ld:Module:ietf-inet-types:2013-07-15")
    inst = inet.instance("belongsTo", "urn:ngsi-ld:ModuleSet:simx-nmda:common")
    assert inst.sub_attributes["conformanceType"][0].value == "import"
    assert store.check_referential_integrity() == []


def test_legacy_registration_counts(sims):
    store, registry = fresh()
    report = registry.register(tcp_event("simx-legacy", sims["f-legacy"]))
    assert report.mode == "non-nmda"
    assert report.counts == {
        "datastores": 0,
        "schemas": 0,
        "moduleSets": 1,
        "modules": 3,
        "submodules": 0,
    }
    assert store.query_entities(Query(type="Datastore")) == []
    assert store.query_entities(Query(type="Schema")) == []


def test_bare_registration_is_fallback_with_unknown_conformance(sims):
    store, registry = fresh()
    report = registry.register(tcp_event("simx-bare", sims["f-bare"]))
    assert report.mode == "fallback"
    assert report.counts["modules"] == 2
    assert report.counts["datastores"] == 0
    for module in store.query_all(type="Module"):
        for inst in module.attributes.get("belongsTo", []):
            assert inst.sub_attributes["conformanceType"][0].value == "unknown"


def test_gnmi_registration_records_protocol_and_module(sims):
    store, registry = fresh()
    report = registry.register(gnmi_event("simx-gnmi", sims["f-gnmi"]))
    assert report.mode == "fallback"
    assert report.counts["modules"] == 1
    protocols = store.query_all(type="Protocol")
    assert len(protocols) == 1
    assert protocols[0].first_value("encodings") == ["JSON_IETF", "PROTO"]
    assert protocols[0].first_value("kind") == "gnmi"


def test_all_connections_failed_means_no_writes(sims):
    import socket

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        dead_port = probe.getsockname()[1]
    store, registry = fresh()
    event = RegistrationEvent(
        platform_name="ghost",
        connections=[
            ConnectionSpec(host="127.0.0.1", port=dead_port, transport="netconf-tcp", timeout=1.0)
        ],
    )
    with pytest.raises(RegistrationFailure):
        registry.register(event)
    assert store.entity_ids() == []


def test_partial_failure_registers_with_warning(sims):
    import socket

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        dead_port = probe.getsockname()[1]
    store, registry = fresh()
    event = RegistrationEvent(
        platform_name="simx-nmda",
        connections=[
            ConnectionSpec(
                host="127.0.0.1",
                port=sims["f-nmda"].ports["netconf-tcp"],
                transport="netconf-tcp",
                timeout=5.0,
            ),
            ConnectionSpec(host="127.0.0.1", port=dead_port, transport="gnmi", timeout=1.0),
        ],
    )
    report = registry.register(event)
    assert report.mode == "nmda"
    assert len(report.warnings) == 1
    outcomes = {p["kind"]: p["outcome"] for p in report.per_protocol}
    assert outcomes["netconf"] == "ok"
    assert outcomes["gnmi"] != "ok"
    assert len(store.query_all(type="Protocol")) == 1


def test_mixed_netconf_gnmi_adds_extras_to_hello_set(sims):
    store, registry = fresh()
    event = RegistrationEvent(
        platform_name="simx-mixed",
        connections=[
            ConnectionSpec(
                host="127.0.0.1",
                port=sims["f-nmda"].ports["netconf-tcp"],
                transport="netconf-tcp",
                timeout=5.0,
            ),
            ConnectionSpec(
                host="127.0.0.1", port=sims["f-gnmi"].ports["gnmi"], transport="gnmi", timeout=5.0
            ),
        ],
    )
    report = registry.register(event)
    assert report.mode == "nmda"
    # openconfig-interfaces is already known from NETCONF by name, so gNMI
    # contributes no extra modules, only its Protocol entity
    assert report.counts["modules"] == 5
    assert report.counts["moduleSets"] == 1
    assert len(store.query_all(type="Protocol")) == 2


def test_gnmi_extra_module_lands_in_hello_set(sims):
    gnmi_only = fixture_from_dict(
        {
            "name": "simx-gnmi-extra",
            "transports": [{"kind": "gnmi", "port": 0}],
            "gnmi-models": [
                {"name": "vendorz-telemetry", "organization": "vendorz", "version": "1.0.0"}
            ],
            "gnmi-encodings": ["PROTO"],
        }
    )
    with serve(gnmi_only, ephemeral_ports=True) as extra_sim:
        store, registry = fresh()
        event = RegistrationEvent(
            platform_name="simx-mixed2",
            connections=[
                ConnectionSpec(
                    host="127.0.0.1",
                    port=sims["f-nmda"].ports["netconf-tcp"],
                    transport="netconf-tcp",
                    timeout=5.0,
                ),
                ConnectionSpec(
                    host="127.0.0.1",
                    port=extra_sim.ports["gnmi"],
                    transport="gnmi",
                    timeout=5.0,
                ),
            ],
        )
        report = registry.register(event)
        assert report.mode == "nmda"
        assert report.counts["modules"] == 6
        assert report.counts["moduleSets"] == 2
        hello_set = store.get_entity("urn:ngsi-ld:ModuleSet:simx-mixed2:hello")
        assert hello_set.first_value("name") == "hello"
        extra = store.get_entity("urn:ngsi-ld:Module:vendorz-telemetry:1.0.0")
        inst = extra.instance("belongsTo", hello_set.id)
        assert inst.sub_attributes["conformanceType"][0].value == "unknown"


def test_reregistration_converges(sims):
    store, registry = fresh()
    registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    once = store.canonical_bytes()
    report = registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    assert report.mode == "nmda"
    assert store.canonical_bytes() == once


def test_refresh_uses_remembered_event(sims):
    store, registry = fresh()
    registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    once = store.canonical_bytes()
    report = registry.refresh("simx-nmda")
    assert report.mode == "nmda"
    assert store.canonical_bytes() == once
    with pytest.raises(NotFoundError):
        registry.refresh("never-registered")


def test_refresh_sweeps_stale_scoped_entities_and_instances(sims):
    # first registration sees the NMDA library; the device then "loses" a
    # module and a datastore, and re-registration must drop exactly those
    raw = {
        "name": "simx-shrink",
        "transports": [{"kind": "netconf-tcp", "port": 0}],
        "hello-capabilities": [
            "urn:ietf:params:netconf:base:1.1",
            "urn:ietf:params:xml:ns:yang:ietf-yang-library?module=ietf-yang-library&revision=2019-01-04",
        ],
        "yang-library": {
            "module-sets": [
                {
                    "name": "common",
                    "modules": [
                        {"name": "keeper", "revision": "2020-01-01", "conformance-type": "implement"},
                        {"name": "goner", "revision": "2020-01-01", "conformance-type": "implement"},
                    ],
                }
            ],
            "schemas": [{"name": "complete", "module-sets": ["common"]}],
            "datastores": [
                {"name": "running", "schema": "complete"},
                {"name": "candidate", "schema": "complete"},
            ],
        },
    }
    store, registry = fresh()
    with serve(fixture_from_dict(raw), ephemeral_ports=True) as sim:
        registry.register(tcp_event("simx-shrink", sim))
    assert store.has_entity("urn:ngsi-ld:Datastore:simx-shrink:candidate")

    shrunk = dict(raw)
    shrunk["yang-library"] = {
        "module-sets": [
            {
                "name": "common",
                "modules": [
                    {"name": "keeper", "revision": "2020-01-01", "conformance-type": "implement"}
                ],
            }
        ],
        "schemas": [{"name": "complete", "module-sets": ["common"]}],
        "datastores": [{"name": "running", "schema": "complete"}],
    }
    with serve(fixture_from_dict(shrunk), ephemeral_ports=True) as sim:
        report = registry.register(tcp_event("simx-shrink", sim))
    assert report.counts["datastores"] == 1
    assert not store.has_entity("urn:ngsi-ld:Datastore:simx-shrink:candidate")
    # global module entity survives, its stale belongsTo instance does not
    goner = store.get_entity("urn:ngsi-ld:Module:goner:2020-01-01")
    assert "belongsTo" not in goner.attributes
    keeper = store.get_entity("urn:ngsi-ld:Module:keeper:2020-01-01")
    assert len(keeper.attributes["belongsTo"]) == 1
    assert store.check_referential_integrity() == []


def test_shared_module_two_platforms(sims):
    store, registry = fresh()
    registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    registry.register(tcp_event("simx-nmda2", sims["f-shared"]))
    shared = store.get_entity("urn:ngsi-ld:Module:ietf-interfaces:2018-02-20")
    dataset_ids = {i.dataset_id for i in shared.attributes["belongsTo"]}
    assert dataset_ids == {
        "urn:ngsi-ld:ModuleSet:simx-nmda:common",
        "urn:ngsi-ld:ModuleSet:simx-nmda2:common",
    }
    # one Module entity per (name, revision) across both platforms
    keys = [
        (m.first_value("name"), m.first_value("revision"))
        for m in store.query_all(type="Module")
    ]
    assert len(keys) == len(set(keys))


def test_deregister_keeps_shared_modules(sims):
    store, registry = fresh()
    registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    registry.register(tcp_event("simx-nmda2", sims["f-shared"]))
    removed = registry.deregister("simx-nmda2")
    assert removed == 6  # platform + protocol + 2 datastores + schema + module set
    shared = store.get_entity("urn:ngsi-ld:Module:ietf-interfaces:2018-02-20")
    dataset_ids = [i.dataset_id for i in shared.attributes["belongsTo"]]
    assert dataset_ids == ["urn:ngsi-ld:ModuleSet:simx-nmda:common"]
    assert store.check_referential_integrity() == []


def test_deregister_counts_and_retains_modules(sims):
    store, registry = fresh()
    registry.register(tcp_event("simx-nmda", sims["f-nmda"]))
    removed = registry.deregister("simx-nmda")
    assert removed == 6
    assert len(store.query_all(type="Module")) == 5
    assert len(store.query_all(type="Submodule")) == 1
    assert store.query_all(type="Platform") == []


def test_deregister_unknown_platform(sims):
    _store, registry = fresh()
    with pytest.raises(NotFoundError):
        registry.deregister("nosuch")


def test_namespace_conflict_keeps_first_writer(sims):
    def fixture_with_namespace(platform: str, namespace: str):
        return fixture_from_dict(
            {
                "name": platform,
                "transports": [{"kind": "netconf-tcp", "port": 0}],
                "hello-capabilities": [
                    "urn:ietf:params:netconf:base:1.1",
                    "urn:ietf:params:xml:ns:yang:ietf-yang-library?module=ietf-yang-library&revision=2019-01-04",
                ],
                "yang-library": {
                    "module-sets": [
                        {
                            "name": "main",
                            "modules": [
                                {
                                    "name": "clash-mod",
                                    "revision": "2020-01-01",
                                    "namespace": namespace,
                                    "conformance-type": "implement",
                                }
                            ],
                        }
                    ],
                    "schemas": [{"name": "s", "module-sets": ["main"]}],
                    "datastores": [{"name": "running", "schema": "s"}],
                },
            }
        )

    store, registry = fresh()
    with serve(fixture_with_namespace("plat-a", "urn:first"), ephemeral_ports=True) as sim:
        registry.register(tcp_event("plat-a", sim))
    with serve(fixture_with_namespace("plat-b", "urn:second"), ephemeral_ports=True) as sim:
        report = registry.register(tcp_event("plat-b", sim))
    assert any("namespace conflict" in w for w in report.warnings)
    stored = store.get_entity("urn:ngsi-ld:Module:clash-mod:2020-01-01")
    assert stored.first_value("namespace") == "urn:first"
    assert len(stored.attributes["belongsTo"]) == 2


def test_yang_library_without_datastores_takes_legacy_path(sims):
    # a library advertising module sets but no datastores is not NMDA-usable
    raw = {
        "name": "simx-nods",
        "transports": [{"kind": "netconf-tcp", "port": 0}],
        "hello-capabilities": [
            "urn:ietf:params:netconf:base:1.1",
            "urn:ietf:params:xml:ns:yang:ietf-yang-library?module=ietf-yang-library&revision=2019-01-04",
        ],
        "yang-library": {
            "module-sets": [
                {
                    "name": "partial",
                    "modules": [
                        {"name": "lonely-mod", "revision": "2020-01-01", "conformance-type": "implement"}
                    ],
                }
            ]
        },
    }
    store, registry = fresh()
    with serve(fixture_from_dict(raw), ephemeral_ports=True) as sim:
        report = registry.register(tcp_event("simx-nods", sim))
    assert report.mode == "non-nmda"
    assert report.counts["datastores"] == 0
    assert report.counts["modules"] == 1
    assert store.query_all(type="Datastore") == []


def test_credentials_never_enter_the_graph(sims):
    from netinv.simulator.fixtures import TransportDef

    fixture = canonical_fixture("f-legacy")
    fixture.name = "simx-cred"
    fixture.transports = [
        TransportDef(kind="netconf-ssh", port=0, username="oper", password="sup3r-secret")
    ]
    store, registry = fresh()
    with serve(fixture, ephemeral_ports=True) as sim:
        event = RegistrationEvent(
            platform_name="simx-cred",
            connections=[
                ConnectionSpec(
                    host="127.0.0.1",
                    port=sim.ports["netconf-ssh"],
                    transport="netconf-ssh",
                    username="oper",
                    password="sup3r-secret",
                    timeout=5.0,
                )
            ],
        )
        registry.register(event)
    dump = store.canonical_bytes().decode("utf-8")
    assert "sup3r-secret" not in dump
    assert '"oper"' not in dump


def test_concurrent_registrations_of_distinct_platforms(sims):
    import threading

    store, registry = fresh()
    errors = []

    def run(platform, fixture_name):
        try:
            registry.register(tcp_event(platform, sims[fixture_name]))
        except Exception as exc:  # surfaced through the errors list
            errors.append(exc)

    threads = [
        threading.Thread(target=run, args=("simx-nmda", "f-nmda")),
        threading.Thread(target=run, args=("simx-legacy", "f-legacy")),
        threading.Thread(target=run, args=("simx-bare", "f-bare")),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(store.query_all(type="Platform")) == 3
    assert store.check_referential_integrity() == []


def test_registration_clears_stale_placeholder_marker(sims, http_server):
    # a catalog sync that runs before any registration materializes
    # ietf-yang-types as a placeholder; the legacy platform then lists it
    from netinv.catalog.connector import CatalogConnector, ConnectorConfig
    from netinv.catalog.mock_server import create_mock_catalog_app, load_catalog_records

    catalog = http_server(create_mock_catalog_app(load_catalog_records()))
    store, registry = fresh()
    CatalogConnector(store, ConnectorConfig(base_url=catalog.url, interval=3600)).sync()
    urn = "urn:ngsi-ld:Module:ietf-yang-types:2013-07-15"
    assert store.get_entity(urn).first_value("placeholder") is True

    registry.register(tcp_event("simx-legacy", sims["f-legacy"]))
    stored = store.get_entity(urn)
    assert stored.first_value("placeholder") is None
    assert len(stored.attributes["belongsTo"]) == 1


# -- HTTP surface -----------------------------------------------------------------


def test_http_registration_roundtrip(sims, tmp_path):
    client = TestClient(create_app(data_dir=tmp_path))
    body = {
        "platformName": "simx-nmda",
        "connections": [
            {
                "transport": "netconf-tcp",
                "host": "127.0.0.1",
                "port": sims["f-nmda"].ports["netconf-tcp"],
                "timeout": 5.0,
            }
        ],
    }
    response = client.post("/registry/platforms", json=body)
    assert response.status_code == 201
    report = response.json()
    assert report["mode"] == "nmda"
    assert report["counts"]["modules"] == 5

    refreshed = client.post("/registry/platforms/simx-nmda/refresh")
    assert refreshed.status_code == 200

    deleted = client.delete("/registry/platforms/simx-nmda")
    assert deleted.status_code == 200
    assert deleted.json()["removedEntities"] == 6
    assert client.delete("/registry/platforms/simx-nmda").status_code == 404


def test_http_validation_error(sims):
    client = TestClient(create_app())
    response = client.post("/registry/platforms", json={"platformName": "x"})
    assert response.status_code == 400


def test_http_total_discovery_failure_is_502(sims):
    import socket

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        dead_port = probe.getsockname()[1]
    client = TestClient(create_app())
    body = {
        "platformName": "ghost",
        "connections": [
            {"transport": "netconf-tcp", "host": "127.0.0.1", "port": dead_port, "timeout": 1.0}
        ],
    }
    response = client.post("/registry/platforms", json=body)
    assert response.status_code == 502
