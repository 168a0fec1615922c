import json

import pytest
import requests
from click.testing import CliRunner

from netinv.catalog.connector import ConnectorConfig
from netinv.catalog.mock_server import create_mock_catalog_app, load_catalog_records
from netinv.cli import main
from netinv.service import InventoryApp
from netinv.simulator.fixtures import canonical_fixture
from netinv.simulator.server import serve
from conftest import UvicornThread


@pytest.fixture(scope="module")
def env():
    """Running service + simulators + mock catalog, registered via the CLI."""
    sims = {
        name: serve(canonical_fixture(name), ephemeral_ports=True)
        for name in ("f-nmda", "f-legacy", "f-gnmi")
    }
    catalog = UvicornThread(create_mock_catalog_app(load_catalog_records())).start()
    service = InventoryApp(catalog_config=ConnectorConfig(base_url=catalog.url, interval=3600))
    server = UvicornThread(service.build()).start()
    runner = CliRunner()

    def cli(*args: str):
        return runner.invoke(main, ["--server", server.url, *args])

    result = cli(
        "register",
        "--name",
        "simx-nmda",
        "--netconf-tcp",
        f"127.0.0.1:{sims['f-nmda'].ports['netconf-tcp']}",
    )
    assert result.exit_code == 0, result.output
    result = cli(
        "register",
        "--name",
        "simx-legacy",
        "--netconf-tcp",
        f"127.0.0.1:{sims['f-legacy'].ports['netconf-tcp']}",
    )
    assert result.exit_code == 0, result.output
    result = cli("sync-catalog")
    assert result.exit_code == 0, result.output

    yield {"cli": cli, "server": server, "sims": sims}

    server.stop()
    catalog.stop()
    for sim in sims.values():
        sim.stop()


def test_register_json_reports_mode(env):
    result = env["cli"](
        "register",
        "--name",
        "simx-gnmi",
        "--gnmi",
        f"127.0.0.1:{env['sims']['f-gnmi'].ports['gnmi']}",
        "--json",
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["mode"] == "fallback"
    assert report["counts"]["modules"] == 1


def test_modules_match_interface_json(env):
    result = env["cli"]("modules", "simx-nmda", "--match", "interface", "--json")
    assert result.exit_code == 0
    rows = json.loads(result.output)
    assert len(rows) == 2
    assert [r["name"] for r in rows] == ["ietf-interfaces", "openconfig-interfaces"]


def test_datastores_legacy_empty_table_exit_zero(env):
    result = env["cli"]("datastores", "simx-legacy")
    assert result.exit_code == 0
    assert "(no rows)" in result.output


def test_datastores_nmda_human_table(env):
    result = env["cli"]("datastores", "simx-nmda")
    assert result.exit_code == 0
    assert "running" in result.output
    assert "complete" in result.output


def test_unknown_module_exits_2(env):
    result = env["cli"]("module", "nosuch", "2020-01-01")
    assert result.exit_code == 2


def test_unknown_platform_exits_2(env):
    result = env["cli"]("datastores", "nosuch")
    assert result.exit_code == 2


def test_validation_error_exits_1(env):
    result = env["cli"]("modules", "simx-nmda", "--match", "[")
    assert result.exit_code == 1


def test_unreachable_server_exits_2():
    runner = CliRunner()
    result = runner.invoke(main, ["--server", "http://127.0.0.1:1", "platforms"])
    assert result.exit_code == 2


def test_cli_json_equals_http_body(env):
    url = env["server"].url
    for args, path in [
        (("modules", "simx-nmda", "--match", "interface"), "/inventory/platforms/simx-nmda/modules?match=interface"),
        (("datastores", "simx-nmda"), "/inventory/platforms/simx-nmda/datastores"),
        (("protocols", "simx-legacy"), "/inventory/platforms/simx-legacy/protocols"),
        (("module", "ietf-interfaces", "2018-02-20"), "/inventory/modules/ietf-interfaces/2018-02-20"),
        (("deps", "ietf-interfaces", "2018-02-20", "--depth", "2"), "/inventory/modules/ietf-interfaces/2018-02-20/dependencies?depth=2"),
        (("platforms",), "/inventory/platforms"),
        (("graph-check",), "/graph/integrity"),
    ]:
        result = env["cli"](*args, "--json")
        assert result.exit_code == 0, result.output
        assert json.loads(result.output) == requests.get(url + path, timeout=10).json()


def test_cli_json_output_is_stable(env):
    first = env["cli"]("module", "ietf-interfaces", "2018-02-20", "--json").output
    second = env["cli"]("module", "ietf-interfaces", "2018-02-20", "--json").output
    assert first == second


def test_protocols_human_output_shows_xpath(env):
    result = env["cli"]("protocols", "simx-legacy")
    assert result.exit_code == 0
    assert "yes" in result.output  # xpathFilter column


def test_module_human_output(env):
    result = env["cli"]("module", "ietf-interfaces", "2018-02-20")
    assert result.exit_code == 0
    assert "implemented by" in result.output
    assert "simx-nmda" in result.output
    assert "RFC 8343" in result.output


def test_graph_check_clean(env):
    result = env["cli"]("graph-check")
    assert result.exit_code == 0
    assert "clean" in result.output


def test_sync_catalog_idempotent_rerun(env):
    result = env["cli"]("sync-catalog", "--json")
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["fetched"] == 2
    assert report["unchanged"] == 2


def test_register_requires_some_connection(env):
    result = env["cli"]("register", "--name", "empty")
    assert result.exit_code == 1


def test_deregister_unknown_exits_2(env):
    result = env["cli"]("deregister", "never-was")
    assert result.exit_code == 2


def test_register_event_file(env, tmp_path):
    event = {
        "platformName": "simx-file",
        "connections": [
            {
                "transport": "netconf-tcp",
                "host": "127.0.0.1",
                "port": env["sims"]["f-legacy"].ports["netconf-tcp"],
                "timeout": 5.0,
            }
        ],
    }
    path = tmp_path / "event.json"
    path.write_text(json.dumps(event))
    result = env["cli"]("register", "--event-file", str(path), "--name", "ignored-by-file")
    assert result.exit_code == 0
    assert "mode=non-nmda" in result.output
    result = env["cli"]("deregister", "simx-file")
    assert result.exit_code == 0
