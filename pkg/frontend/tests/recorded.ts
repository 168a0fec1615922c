// Response bodies recorded from the inventory service running the fixture
// battery (simx-nmda NMDA-registered, simx-legacy legacy-registered,
// catalog synced). The mocked-fetch tests replay these shapes.

import type {
  DatastoreRow,
  DependencyGraph,
  ModuleInfo,
  ModuleSummary,
  PlatformRow,
  ProtocolRow,
  RegistrationReport,
} from "../src/api.js";

export const platforms: PlatformRow[] = [
  { name: "simx-legacy", vendor: null, model: null, id: "urn:ngsi-ld:Platform:simx-legacy" },
  { name: "simx-nmda", vendor: null, model: null, id: "urn:ngsi-ld:Platform:simx-nmda" },
];

export const nmdaDatastores: DatastoreRow[] = [
  { datastoreName: "operational", schemaName: "complete" },
  { datastoreName: "running", schemaName: "complete" },
];

export const nmdaProtocols: ProtocolRow[] = [
  {
    kind: "netconf",
    address: "127.0.0.1",
    port: 8300,
    capabilities: [
      "urn:ietf:params:netconf:base:1.0",
      "urn:ietf:params:netconf:base:1.1",
      "urn:ietf:params:netconf:capability:writable-running:1.0",
    ],
    encodings: ["xml"],
    version: "1.1",
    xpathFilter: false,
  },
];

export const legacyProtocols: ProtocolRow[] = [
  {
    kind: "netconf",
    address: "127.0.0.1",
    port: 8301,
    capabilities: [
      "urn:ietf:params:netconf:base:1.0",
      "urn:ietf:params:netconf:base:1.1",
      "urn:ietf:params:netconf:capability:xpath:1.0",
    ],
    encodings: ["xml"],
    version: "1.1",
    xpathFilter: true,
  },
];

export const interfaceModules: ModuleSummary[] = [
  {
    name: "ietf-interfaces",
    revision: "2018-02-20",
    conformanceType: "implement",
    moduleSet: "common",
    catalogEnriched: true,
    schemaUrl:
      "https://raw.githubusercontent.com/YangModels/yang/main/standard/ietf/RFC/ietf-interfaces%402018-02-20.yang",
    treeType: "nmda-compatible",
  },
  {
    name: "openconfig-interfaces",
    revision: "2021-04-06",
    conformanceType: "implement",
    moduleSet: "common",
    catalogEnriched: true,
    schemaUrl:
      "https://raw.githubusercontent.com/openconfig/public/master/release/models/interfaces/openconfig-interfaces.yang",
    treeType: "openconfig",
  },
];

export const ietfInterfacesInfo: ModuleInfo = {
  name: "ietf-interfaces",
  revision: "2018-02-20",
  type: "Module",
  namespace: "urn:ietf:params:xml:ns:yang:ietf-interfaces",
  placeholder: false,
  implementedBy: [
    { platform: "simx-nmda", moduleSet: "common", conformanceType: "implement", features: [] },
  ],
  catalogEnriched: true,
  organization: "ietf",
  schemaUrl:
    "https://raw.githubusercontent.com/YangModels/yang/main/standard/ietf/RFC/ietf-interfaces%402018-02-20.yang",
  treeType: "nmda-compatible",
  semanticVersion: null,
  reference: "RFC 8343",
  maturityLevel: null,
  moduleClassification: null,
  dependencies: [{ name: "ietf-yang-types", revision: "2013-07-15" }],
  dependents: [],
};

export const ietfInterfacesDeps: DependencyGraph = {
  root: { name: "ietf-interfaces", revision: "2018-02-20" },
  depth: 1,
  edges: [
    {
      source: { name: "ietf-interfaces", revision: "2018-02-20" },
      target: { name: "ietf-yang-types", revision: "2013-07-15" },
      placeholder: true,
    },
  ],
};

export const nmdaModuleSets = [
  {
    id: "urn:ngsi-ld:ModuleSet:simx-nmda:common",
    type: "ModuleSet",
    name: { type: "Property", value: "common" },
    ofPlatform: { type: "Relationship", object: "urn:ngsi-ld:Platform:simx-nmda" },
  },
];

export const bareRegistrationReport: RegistrationReport = {
  platformId: "urn:ngsi-ld:Platform:simx-bare",
  mode: "fallback",
  perProtocol: [{ kind: "netconf", endpoint: "127.0.0.1:8302", outcome: "ok" }],
  counts: { datastores: 0, schemas: 0, moduleSets: 1, modules: 2, submodules: 0 },
  warnings: [],
};
