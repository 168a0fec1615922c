// Typed client for the inventory service REST API. The browser renders only
// what these endpoints return; it never derives graph content on its own.

export interface PlatformRow {
  name: string;
  vendor: string | null;
  model: string | null;
  id: string;
}

export interface DatastoreRow {
  datastoreName: string;
  schemaName: string | null;
}

export interface ModuleSummary {
  name: string;
  revision: string | null;
  conformanceType: string | null;
  moduleSet: string | null;
  catalogEnriched: boolean;
  schemaUrl: string | null;
  treeType: string | null;
}

export interface ProtocolRow {
  kind: string;
  address: string;
  port: number;
  capabilities: string[];
  encodings: string[];
  version: string | null;
  xpathFilter: boolean;
}

export interface ModuleRef {
  name: string;
  revision: string | null;
}

export interface ImplementedBy {
  platform: string | null;
  moduleSet: string | null;
  conformanceType: string | null;
  features: string[];
}

export interface ModuleInfo {
  name: string;
  revision: string | null;
  type: string;
  namespace: string | null;
  placeholder: boolean;
  implementedBy: ImplementedBy[];
  catalogEnriched: boolean;
  organization: string | null;
  schemaUrl: string | null;
  treeType: string | null;
  semanticVersion: string | null;
  reference: string | null;
  maturityLevel: string | null;
  moduleClassification: string | null;
  dependencies: ModuleRef[];
  dependents: ModuleRef[];
}

export interface DependencyEdge {
  source: ModuleRef;
  target: ModuleRef;
  placeholder: boolean;
}

export interface DependencyGraph {
  root: ModuleRef;
  depth: number;
  edges: DependencyEdge[];
}

export interface ConnectionInput {
  transport: string;
  host: string;
  port: number;
  username?: string | null;
  password?: string | null;
  tls?: boolean;
  timeout?: number;
}

export interface RegistrationInput {
  platformName: string;
  vendor?: string | null;
  model?: string | null;
  connections: ConnectionInput[];
}

export interface RegistrationReport {
  platformId: string;
  mode: string;
  perProtocol: { kind: string; endpoint: string; outcome: string }[];
  counts: {
    datastores: number;
    schemas: number;
    moduleSets: number;
    modules: number;
    submodules: number;
  };
  warnings: string[];
}

export interface SyncReport {
  fetched: number;
  upserted: number;
  unchanged: number;
  failed: number;
  startedAt: string;
  finishedAt: string;
  errors: string[];
}

interface NgsiEntity {
  id: string;
  type: string;
  [attribute: string]: unknown;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string; title?: string };
    detail = body.detail ?? body.title ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class InventoryApi {
  constructor(readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  listPlatforms(): Promise<PlatformRow[]> {
    return this.get("/inventory/platforms");
  }

  datastores(platform: string): Promise<DatastoreRow[]> {
    return this.get(`/inventory/platforms/${encodeURIComponent(platform)}/datastores`);
  }

  modules(platform: string, match: string): Promise<ModuleSummary[]> {
    const query = new URLSearchParams({ match });
    return this.get(`/inventory/platforms/${encodeURIComponent(platform)}/modules?${query}`);
  }

  protocols(platform: string): Promise<ProtocolRow[]> {
    return this.get(`/inventory/platforms/${encodeURIComponent(platform)}/protocols`);
  }

  moduleInfo(name: string, revision: string | null): Promise<ModuleInfo> {
    const rev = encodeURIComponent(revision ?? "unknown");
    return this.get(`/inventory/modules/${encodeURIComponent(name)}/${rev}`);
  }

  dependencies(name: string, revision: string | null, depth: number): Promise<DependencyGraph> {
    const rev = encodeURIComponent(revision ?? "unknown");
    return this.get(
      `/inventory/modules/${encodeURIComponent(name)}/${rev}/dependencies?depth=${depth}`,
    );
  }

  /** ModuleSet names of one platform, via the NGSI-LD query surface. */
  async moduleSets(platformId: string): Promise<string[]> {
    const query = new URLSearchParams({
      type: "ModuleSet",
      q: `ofPlatform=="${platformId}"`,
    });
    const entities = await this.get<NgsiEntity[]>(`/ngsi-ld/v1/entities?${query}`);
    return entities
      .map((entity) => {
        const name = entity["name"] as { value?: string } | undefined;
        return name?.value ?? entity.id;
      })
      .sort();
  }

  register(event: RegistrationInput): Promise<RegistrationReport> {
    return this.post("/registry/platforms", event);
  }

  syncCatalog(): Promise<SyncReport> {
    return this.post("/catalog/sync", {});
  }
}
