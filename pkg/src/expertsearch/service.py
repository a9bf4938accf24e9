"""HTTP query service over an immutable index snapshot.

Endpoints (all JSON over GET):
  /api/health                       status and manifest content hash
  /api/roles                        role vocabulary for filter dropdowns
  /api/search?q=&k=&role=           ranked experts with evidence rows
  /api/person/{id}                  person profile with full evidence set
  /api/person/{id}/relationships    co-members grouped by shared unit/project
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlsplit

from .pipeline import LoadedArtifacts, load_artifacts
from .retrieval import rank_experts

logger = logging.getLogger(__name__)

DEFAULT_BIND = "127.0.0.1:8765"


class RequestError(ValueError):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _evidence_row(loaded: LoadedArtifacts, person_id: str, doc_id: str, fragment_score: float | None) -> dict:
    fragment = loaded.index.fragment_lookup[(person_id, doc_id)]
    info = loaded.index.documents[doc_id]
    row = {
        "doc_id": doc_id,
        "url": info.url,
        "title": info.title,
        "source": info.source,
        "base_weight": fragment.base_weight,
        "type_factor": fragment.type_factor,
        "final_weight": fragment.final_weight,
        "provenance": fragment.provenance,
        "seed_url": fragment.seed_url,
    }
    if fragment_score is not None:
        row["fragment_score"] = fragment_score
    return row


def search_response(loaded: LoadedArtifacts, query: str, k: int, role: str | None = None) -> dict:
    """Ranked experts with expanded evidence; mirrors rank_experts exactly."""
    if not query.strip():
        raise RequestError(400, "query must not be empty")
    if k <= 0:
        raise RequestError(400, f"k must be positive, got {k}")
    pool = max(k, len(loaded.index.person_ids), 1)
    ranked = rank_experts(query, pool, loaded.index, loaded.org, role)
    experts = []
    for result in ranked[:k]:
        person = loaded.org.persons.get(result.person_id)
        experts.append(
            {
                "person_id": result.person_id,
                "display_name": person.display_name if person else result.person_id,
                "roles": list(person.roles) if person else [],
                "score": result.score,
                "evidence": [
                    _evidence_row(loaded, result.person_id, doc_id, fragment_score)
                    for doc_id, fragment_score in result.fragments
                ],
            }
        )
    return {
        "query": query,
        "role_filter": role,
        "k": k,
        "total_matched": len(ranked),
        "experts": experts,
    }


def person_response(loaded: LoadedArtifacts, person_id: str) -> dict:
    person = loaded.org.persons.get(person_id)
    if person is None:
        raise RequestError(404, f"unknown person {person_id}")
    evidence = [
        _evidence_row(loaded, person_id, fragment.doc_id, None)
        for fragment in loaded.index.fragments
        if fragment.person_id == person_id
    ]
    evidence.sort(key=lambda row: (-row["final_weight"], row["doc_id"]))
    return {
        "person_id": person_id,
        "display_name": person.display_name,
        "name_aliases": list(person.name_aliases),
        "roles": list(person.roles),
        "homepage_urls": list(person.homepage_urls),
        "units": [u.unit_id for u in loaded.org.units_of(person_id)],
        "projects": [p.project_id for p in loaded.org.projects_of(person_id)],
        "evidence": evidence,
    }


def relationships_response(loaded: LoadedArtifacts, person_id: str) -> dict:
    person = loaded.org.persons.get(person_id)
    if person is None:
        raise RequestError(404, f"unknown person {person_id}")

    def member_entry(pid: str) -> dict:
        other = loaded.org.persons.get(pid)
        return {
            "person_id": pid,
            "display_name": other.display_name if other else pid,
            "roles": list(other.roles) if other else [],
        }

    units = []
    projects = []
    edges = []
    for unit in loaded.org.units_of(person_id):
        co_members = [pid for pid in unit.member_ids() if pid != person_id]
        units.append(
            {
                "unit_id": unit.unit_id,
                "title": unit.title,
                "unit_type": unit.unit_type,
                "co_members": [member_entry(pid) for pid in sorted(co_members)],
            }
        )
        edges.extend(
            {"person_id": pid, "via": "unit", "id": unit.unit_id} for pid in sorted(co_members)
        )
    for project in loaded.org.projects_of(person_id):
        co_members = [pid for pid in project.members if pid != person_id]
        projects.append(
            {
                "project_id": project.project_id,
                "title": project.title,
                "co_members": [member_entry(pid) for pid in sorted(co_members)],
            }
        )
        edges.extend(
            {"person_id": pid, "via": "project", "id": project.project_id}
            for pid in sorted(co_members)
        )
    return {
        "person_id": person_id,
        "display_name": person.display_name,
        "units": units,
        "projects": projects,
        "edges": edges,
    }


def health_response(loaded: LoadedArtifacts) -> dict:
    return {
        "status": "ok",
        "content_hash": loaded.content_hash,
        "run_tag": loaded.manifest.get("run_tag"),
        "stats": loaded.manifest.get("stats", {}),
    }


def roles_response(loaded: LoadedArtifacts) -> dict:
    return {
        "roles": [
            {"role_id": role.role_id, "title": role.title}
            for _, role in sorted(loaded.org.roles.items())
        ]
    }


def _handle(loaded: LoadedArtifacts, path: str, params: dict[str, list[str]]) -> dict:
    if path == "/api/health":
        return health_response(loaded)
    if path == "/api/roles":
        return roles_response(loaded)
    if path == "/api/search":
        query = params.get("q", [""])[0]
        k_text = params.get("k", ["10"])[0]
        try:
            k = int(k_text)
        except ValueError:
            raise RequestError(400, f"bad k value {k_text!r}") from None
        role = params.get("role", [None])[0] or None
        return search_response(loaded, query, k, role)
    parts = [p for p in path.split("/") if p]
    if len(parts) >= 2 and parts[0] == "api" and parts[1] == "person":
        if len(parts) == 3:
            return person_response(loaded, unquote(parts[2]))
        if len(parts) == 4 and parts[3] == "relationships":
            return relationships_response(loaded, unquote(parts[2]))
    raise RequestError(404, f"no such endpoint: {path}")


def make_handler(loaded: LoadedArtifacts):
    class Handler(BaseHTTPRequestHandler):
        def _send(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self) -> None:  # noqa: N802 (http.server API)
            parsed = urlsplit(self.path)
            try:
                payload = _handle(loaded, parsed.path, parse_qs(parsed.query))
            except RequestError as exc:
                self._send(exc.status, {"error": str(exc)})
                return
            except Exception:  # pragma: no cover - defensive
                logger.exception("request failed: %s", self.path)
                self._send(500, {"error": "internal error"})
                return
            self._send(200, payload)

        def log_message(self, fmt: str, *args) -> None:
            logger.debug("%s " + fmt, self.client_address[0], *args)

    return Handler


def make_server(index_dir, host: str = "127.0.0.1", port: int = 8765) -> ThreadingHTTPServer:
    """Load the index snapshot once and bind a threading HTTP server to it."""
    loaded = load_artifacts(index_dir)
    server = ThreadingHTTPServer((host, port), make_handler(loaded))
    return server


def serve(index_dir, bind: str = DEFAULT_BIND) -> None:
    host, _, port_text = bind.partition(":")
    server = make_server(index_dir, host or "127.0.0.1", int(port_text or "8765"))
    host, port = server.server_address[:2]
    logger.info("serving index %s on http://%s:%s", index_dir, host, port)
    print(f"serving on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
