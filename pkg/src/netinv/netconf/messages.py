"""XML payloads: hello, rpc/rpc-reply, and the module-library documents.

Builders are used by the device simulator, parsers by the discovery client;
round-tripping a fixture through both is the echo-fidelity property.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from ..errors import ProtocolError, RemoteError
from ..platform.model import (
    DatastoreDef,
    ModuleIdentifier,
    ModuleImplementation,
    ModulesStateDocument,
    ModuleSetDef,
    SchemaDef,
    YangLibraryDocument,
)

BASE_NS = "urn:ietf:params:xml:ns:netconf:base:1.0"
YANGLIB_NS = "urn:ietf:params:xml:ns:yang:ietf-yang-library"
DATASTORES_NS = "urn:ietf:params:xml:ns:yang:ietf-datastores"

CAP_BASE_10 = "urn:ietf:params:netconf:base:1.0"
CAP_BASE_11 = "urn:ietf:params:netconf:base:1.1"
CAP_XPATH = "urn:ietf:params:netconf:capability:xpath:1.0"

YANG_LIBRARY_MODULE = "ietf-yang-library"


def _q(ns: str, tag: str) -> str:
    return f"{{{ns}}}{tag}"


def parse_xml(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise ProtocolError(f"malformed XML: {exc}") from None


def to_bytes(element: ET.Element) -> bytes:
    return ET.tostring(element, encoding="utf-8", xml_declaration=True)


# -- hello -------------------------------------------------------------------

def build_hello(capabilities: list[str], session_id: int | None = None) -> ET.Element:
    hello = ET.Element(_q(BASE_NS, "hello"))
    caps = ET.SubElement(hello, _q(BASE_NS, "capabilities"))
    for uri in capabilities:
        ET.SubElement(caps, _q(BASE_NS, "capability")).text = uri
    if session_id is not None:
        ET.SubElement(hello, _q(BASE_NS, "session-id")).text = str(session_id)
    return hello


def parse_hello(element: ET.Element) -> list[str]:
    if element.tag != _q(BASE_NS, "hello"):
        raise ProtocolError(f"expected hello, got {element.tag}")
    caps = [
        (cap.text or "").strip()
        for cap in element.iter(_q(BASE_NS, "capability"))
    ]
    caps = [c for c in caps if c]
    if not any(c.startswith("urn:ietf:params:netconf:base:") for c in caps):
        raise ProtocolError("hello advertises no base capability")
    return caps


def choose_base_version(client_caps: list[str], server_caps: list[str]) -> str:
    if CAP_BASE_11 in client_caps and CAP_BASE_11 in server_caps:
        return "1.1"
    if CAP_BASE_10 in client_caps and CAP_BASE_10 in server_caps:
        return "1.0"
    raise ProtocolError("no common NETCONF base version")


# -- rpc / rpc-reply -----------------------------------------------------------

def build_rpc(message_id: str, payload: ET.Element) -> ET.Element:
    rpc = ET.Element(_q(BASE_NS, "rpc"), {"message-id": message_id})
    rpc.append(payload)
    return rpc


def build_get(subtree: ET.Element | None) -> ET.Element:
    get = ET.Element(_q(BASE_NS, "get"))
    if subtree is not None:
        filt = ET.SubElement(get, _q(BASE_NS, "filter"), {"type": "subtree"})
        filt.append(subtree)
    return get


def build_rpc_reply(message_id: str, body: ET.Element) -> ET.Element:
    reply = ET.Element(_q(BASE_NS, "rpc-reply"), {"message-id": message_id})
    reply.append(body)
    return reply


def build_data_reply(message_id: str, content: ET.Element | None) -> ET.Element:
    data = ET.Element(_q(BASE_NS, "data"))
    if content is not None:
        data.append(content)
    return build_rpc_reply(message_id, data)


def build_ok_reply(message_id: str) -> ET.Element:
    return build_rpc_reply(message_id, ET.Element(_q(BASE_NS, "ok")))


def build_rpc_error(message_id: str, tag: str, message: str) -> ET.Element:
    err = ET.Element(_q(BASE_NS, "rpc-error"))
    ET.SubElement(err, _q(BASE_NS, "error-type")).text = "protocol"
    ET.SubElement(err, _q(BASE_NS, "error-tag")).text = tag
    ET.SubElement(err, _q(BASE_NS, "error-severity")).text = "error"
    ET.SubElement(err, _q(BASE_NS, "error-message")).text = message
    return build_rpc_reply(message_id, err)


def parse_rpc_reply(element: ET.Element, expected_id: str) -> ET.Element:
    if element.tag != _q(BASE_NS, "rpc-reply"):
        raise ProtocolError(f"expected rpc-reply, got {element.tag}")
    got_id = element.get("message-id")
    if got_id != expected_id:
        raise ProtocolError(f"reply message-id {got_id!r} != {expected_id!r}")
    error = element.find(_q(BASE_NS, "rpc-error"))
    if error is not None:
        message = error.findtext(_q(BASE_NS, "error-message")) or "rpc-error"
        tag = error.findtext(_q(BASE_NS, "error-tag")) or "operation-failed"
        raise RemoteError(f"{tag}: {message.strip()}")
    return element


def reply_data(reply: ET.Element) -> ET.Element | None:
    return reply.find(_q(BASE_NS, "data"))


# -- yang-library (NMDA form) ---------------------------------------------------

def _module_identifier_xml(parent: ET.Element, tag: str, ident: ModuleIdentifier) -> ET.Element:
    el = ET.SubElement(parent, _q(YANGLIB_NS, tag))
    ET.SubElement(el, _q(YANGLIB_NS, "name")).text = ident.name
    if ident.revision:
        ET.SubElement(el, _q(YANGLIB_NS, "revision")).text = ident.revision
    if ident.namespace:
        ET.SubElement(el, _q(YANGLIB_NS, "namespace")).text = ident.namespace
    return el


def build_yang_library(doc: YangLibraryDocument, content_id: str = "1") -> ET.Element:
    root = ET.Element(_q(YANGLIB_NS, "yang-library"))
    for ms in doc.module_sets:
        ms_el = ET.SubElement(root, _q(YANGLIB_NS, "module-set"))
        ET.SubElement(ms_el, _q(YANGLIB_NS, "name")).text = ms.name
        for impl in ms.modules:
            tag = "import-only-module" if impl.conformance_type == "import" else "module"
            mod_el = _module_identifier_xml(ms_el, tag, impl.identifier)
            for feature in impl.features:
                ET.SubElement(mod_el, _q(YANGLIB_NS, "feature")).text = feature
            for dev in impl.deviations:
                # NMDA deviations reference the deviating module by name
                ET.SubElement(mod_el, _q(YANGLIB_NS, "deviation")).text = dev.name
            for sub in impl.submodules:
                _module_identifier_xml(mod_el, "submodule", sub)
    for schema in doc.schemas:
        s_el = ET.SubElement(root, _q(YANGLIB_NS, "schema"))
        ET.SubElement(s_el, _q(YANGLIB_NS, "name")).text = schema.name
        for ref in schema.module_set_names:
            ET.SubElement(s_el, _q(YANGLIB_NS, "module-set")).text = ref
    for ds in doc.datastores:
        ds_el = ET.SubElement(root, _q(YANGLIB_NS, "datastore"))
        name_el = ET.SubElement(ds_el, _q(YANGLIB_NS, "name"))
        # datastore names are identityrefs; declare the prefix inline
        name_el.set("xmlns:ds", DATASTORES_NS)
        name_el.text = f"ds:{ds.name}"
        ET.SubElement(ds_el, _q(YANGLIB_NS, "schema")).text = ds.schema_name
    ET.SubElement(root, _q(YANGLIB_NS, "content-id")).text = content_id
    return root


def _strip_prefix(text: str) -> str:
    return text.split(":", 1)[1] if ":" in text else text


def _parse_module_element(el: ET.Element, conformance: str, deviation_revisions: bool) -> ModuleImplementation:
    name = el.findtext(_q(YANGLIB_NS, "name"))
    if not name:
        raise ProtocolError("module entry without a name")
    revision = el.findtext(_q(YANGLIB_NS, "revision")) or None
    namespace = el.findtext(_q(YANGLIB_NS, "namespace")) or None
    features = [f.text.strip() for f in el.findall(_q(YANGLIB_NS, "feature")) if f.text]
    deviations: list[ModuleIdentifier] = []
    for dev in el.findall(_q(YANGLIB_NS, "deviation")):
        if deviation_revisions:
            dev_name = dev.findtext(_q(YANGLIB_NS, "name"))
            dev_rev = dev.findtext(_q(YANGLIB_NS, "revision")) or None
            if dev_name:
                deviations.append(ModuleIdentifier(name=dev_name, revision=dev_rev))
        elif dev.text and dev.text.strip():
            deviations.append(ModuleIdentifier(name=dev.text.strip()))
    submodules = []
    for sub in el.findall(_q(YANGLIB_NS, "submodule")):
        sub_name = sub.findtext(_q(YANGLIB_NS, "name"))
        if sub_name:
            submodules.append(
                ModuleIdentifier(
                    name=sub_name,
                    revision=sub.findtext(_q(YANGLIB_NS, "revision")) or None,
                    is_submodule=True,
                )
            )
    return ModuleImplementation(
        identifier=ModuleIdentifier(name=name, revision=revision, namespace=namespace),
        conformance_type=conformance,
        features=features,
        deviations=deviations,
        submodules=submodules,
    )


def parse_yang_library(root: ET.Element) -> YangLibraryDocument:
    if root.tag != _q(YANGLIB_NS, "yang-library"):
        raise ProtocolError(f"expected yang-library, got {root.tag}")
    doc = YangLibraryDocument()
    for ms_el in root.findall(_q(YANGLIB_NS, "module-set")):
        ms = ModuleSetDef(name=ms_el.findtext(_q(YANGLIB_NS, "name")) or "")
        for el in ms_el.findall(_q(YANGLIB_NS, "module")):
            ms.modules.append(_parse_module_element(el, "implement", deviation_revisions=False))
        for el in ms_el.findall(_q(YANGLIB_NS, "import-only-module")):
            ms.modules.append(_parse_module_element(el, "import", deviation_revisions=False))
        doc.module_sets.append(ms)
    for s_el in root.findall(_q(YANGLIB_NS, "schema")):
        doc.schemas.append(
            SchemaDef(
                name=s_el.findtext(_q(YANGLIB_NS, "name")) or "",
                module_set_names=[
                    el.text.strip() for el in s_el.findall(_q(YANGLIB_NS, "module-set")) if el.text
                ],
            )
        )
    for ds_el in root.findall(_q(YANGLIB_NS, "datastore")):
        name = ds_el.findtext(_q(YANGLIB_NS, "name")) or ""
        doc.datastores.append(
            DatastoreDef(
                name=_strip_prefix(name.strip()),
                schema_name=ds_el.findtext(_q(YANGLIB_NS, "schema")) or "",
            )
        )
    return doc


# -- modules-state (legacy form) --------------------------------------------------

def build_modules_state(doc: ModulesStateDocument, module_set_id: str = "1") -> ET.Element:
    root = ET.Element(_q(YANGLIB_NS, "modules-state"))
    ET.SubElement(root, _q(YANGLIB_NS, "module-set-id")).text = module_set_id
    for impl in doc.modules:
        mod_el = _module_identifier_xml(root, "module", impl.identifier)
        for feature in impl.features:
            ET.SubElement(mod_el, _q(YANGLIB_NS, "feature")).text = feature
        for dev in impl.deviations:
            dev_el = ET.SubElement(mod_el, _q(YANGLIB_NS, "deviation"))
            ET.SubElement(dev_el, _q(YANGLIB_NS, "name")).text = dev.name
            if dev.revision:
                ET.SubElement(dev_el, _q(YANGLIB_NS, "revision")).text = dev.revision
        for sub in impl.submodules:
            _module_identifier_xml(mod_el, "submodule", sub)
        ET.SubElement(mod_el, _q(YANGLIB_NS, "conformance-type")).text = impl.conformance_type
    return root


def parse_modules_state(root: ET.Element) -> ModulesStateDocument:
    if root.tag != _q(YANGLIB_NS, "modules-state"):
        raise ProtocolError(f"expected modules-state, got {root.tag}")
    doc = ModulesStateDocument()
    for el in root.findall(_q(YANGLIB_NS, "module")):
        conformance = el.findtext(_q(YANGLIB_NS, "conformance-type")) or "implement"
        doc.modules.append(_parse_module_element(el, conformance.strip(), deviation_revisions=True))
    return doc


def subtree_filter(container: str) -> ET.Element:
    return ET.Element(_q(YANGLIB_NS, container))
