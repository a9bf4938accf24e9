// Typed client for the expertsearch query API. The UI performs no ranking
// or scoring of its own; everything displayed comes from these payloads.

export interface EvidenceRow {
  doc_id: string;
  url: string;
  title: string;
  source: string;
  base_weight: number;
  type_factor: number;
  final_weight: number;
  provenance: string;
  seed_url: string | null;
  fragment_score?: number;
}

export interface Expert {
  person_id: string;
  display_name: string;
  roles: string[];
  score: number;
  evidence: EvidenceRow[];
}

export interface SearchResponse {
  query: string;
  role_filter: string | null;
  k: number;
  total_matched: number;
  experts: Expert[];
}

export interface RoleInfo {
  role_id: string;
  title: string;
}

export interface CoMember {
  person_id: string;
  display_name: string;
  roles: string[];
}

export interface UnitPanel {
  unit_id: string;
  title: string;
  unit_type: string;
  co_members: CoMember[];
}

export interface ProjectPanel {
  project_id: string;
  title: string;
  co_members: CoMember[];
}

export interface RelationshipEdge {
  person_id: string;
  via: string;
  id: string;
}

export interface RelationshipResponse {
  person_id: string;
  display_name: string;
  units: UnitPanel[];
  projects: ProjectPanel[];
  edges: RelationshipEdge[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path);
    } catch {
      throw new ApiError(0, "service unreachable");
    }
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const message =
        body && typeof body === "object" && "error" in body
          ? String((body as { error: unknown }).error)
          : `request failed with status ${response.status}`;
      throw new ApiError(response.status, message);
    }
    return body as T;
  }

  search(query: string, k: number, role?: string): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, k: String(k) });
    if (role) {
      params.set("role", role);
    }
    return this.get<SearchResponse>(`/api/search?${params.toString()}`);
  }

  async roles(): Promise<RoleInfo[]> {
    const payload = await this.get<{ roles: RoleInfo[] }>("/api/roles");
    return payload.roles;
  }

  relationships(personId: string): Promise<RelationshipResponse> {
    return this.get<RelationshipResponse>(
      `/api/person/${encodeURIComponent(personId)}/relationships`,
    );
  }
}
