// Canned API payloads matching the query service's JSON contract.

import type { RelationshipResponse, SearchResponse } from "../src/api.js";

export const searchPayload: SearchResponse = {
  query: "wavelet morphology",
  role_filter: null,
  k: 10,
  total_matched: 2,
  experts: [
    {
      person_id: "p02",
      display_name: "Alice Ashford",
      roles: ["scientist"],
      score: 14.25,
      evidence: [
        {
          doc_id: "home-p02",
          url: "http://extranet.example/people/alice-ashford/",
          title: "Alice Ashford",
          source: "extranet",
          base_weight: 1,
          type_factor: 10,
          final_weight: 10,
          provenance: "seed_self",
          seed_url: "http://extranet.example/people/alice-ashford/",
          fragment_score: 11.5,
        },
        {
          doc_id: "page-t01-notes",
          url: "http://extranet.example/people/alice-ashford/wavelet-notes.html",
          title: "wavelet notes",
          source: "extranet",
          base_weight: 0.5,
          type_factor: 1,
          final_weight: 0.5,
          provenance: "seed_propagated",
          seed_url: "http://extranet.example/people/alice-ashford/",
          fragment_score: 2.75,
        },
      ],
    },
    {
      person_id: "p07",
      display_name: "Brian Chen",
      roles: ["engineer"],
      score: 3.5,
      evidence: [
        {
          doc_id: "db-pub-001",
          url: "db://publications/pub-001",
          title: "wavelet study",
          source: "db",
          base_weight: 1,
          type_factor: 1,
          final_weight: 1,
          provenance: "db_record",
          seed_url: null,
          fragment_score: 3.5,
        },
      ],
    },
  ],
};

export const emptySearchPayload: SearchResponse = {
  query: "nothing here",
  role_filter: null,
  k: 10,
  total_matched: 0,
  experts: [],
};

export const relationshipPayload: RelationshipResponse = {
  person_id: "p02",
  display_name: "Alice Ashford",
  units: [
    {
      unit_id: "g1",
      title: "G1 Research Group",
      unit_type: "group",
      co_members: [{ person_id: "p05", display_name: "Keiko Novak", roles: ["developer"] }],
    },
  ],
  projects: [
    {
      project_id: "aurora",
      title: "Project Aurora",
      co_members: [
        { person_id: "p07", display_name: "Brian Chen", roles: ["engineer"] },
        { person_id: "p12", display_name: "Marta Okafor", roles: ["scientist"] },
      ],
    },
  ],
  edges: [
    { person_id: "p05", via: "unit", id: "g1" },
    { person_id: "p07", via: "project", id: "aurora" },
    { person_id: "p12", via: "project", id: "aurora" },
  ],
};

export const lonerRelationshipPayload: RelationshipResponse = {
  person_id: "p19",
  display_name: "Olga Barros",
  units: [],
  projects: [],
  edges: [],
};

export const rolesPayload = {
  roles: [
    { role_id: "developer", title: "Developer" },
    { role_id: "engineer", title: "Engineer" },
    { role_id: "scientist", title: "Scientist" },
  ],
};

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
