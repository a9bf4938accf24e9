// DOM rendering for the ranked expert list and its expandable evidence rows.
// Experts render in exactly the order the API returned them; scores are the
// API numbers stringified, never recomputed.

import type { EvidenceRow, Expert, SearchResponse } from "./api.js";

export interface ResultCallbacks {
  onSelectPerson: (personId: string) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function provenanceBadge(provenance: string): HTMLSpanElement {
  const label: Record<string, string> = {
    seed_self: "seed page",
    seed_propagated: "near seed",
    name_mention: "name mention",
    db_record: "db record",
  };
  const badge = el("span", `badge badge-${provenance}`, label[provenance] ?? provenance);
  badge.dataset.provenance = provenance;
  return badge;
}

function evidenceTable(rows: EvidenceRow[]): HTMLTableElement {
  const table = el("table", "evidence");
  const head = table.createTHead().insertRow();
  for (const title of ["document", "score", "weight", "evidence type"]) {
    head.appendChild(el("th", undefined, title));
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    tr.className = "evidence-row";

    const docCell = tr.insertCell();
    const link = el("a", "doc-link", row.title || row.url);
    link.href = row.url;
    link.title = row.url;
    docCell.appendChild(link);

    tr.insertCell().textContent =
      row.fragment_score !== undefined ? String(row.fragment_score) : "";
    tr.insertCell().textContent = String(row.final_weight);
    tr.insertCell().appendChild(provenanceBadge(row.provenance));
  }
  return table;
}

function expertItem(
  expert: Expert,
  rank: number,
  callbacks: ResultCallbacks,
): HTMLLIElement {
  const item = el("li", "expert");
  item.dataset.personId = expert.person_id;

  const header = el("button", "expert-header");
  header.type = "button";
  header.setAttribute("aria-expanded", "false");
  header.appendChild(el("span", "rank", String(rank)));
  header.appendChild(el("span", "name", expert.display_name));
  header.appendChild(el("span", "roles", expert.roles.join(", ")));
  header.appendChild(el("span", "score", String(expert.score)));
  item.appendChild(header);

  const details = el("div", "expert-details");
  details.hidden = true;
  details.appendChild(evidenceTable(expert.evidence));
  const relationsButton = el("button", "show-relations", "relationships");
  relationsButton.type = "button";
  relationsButton.addEventListener("click", (event) => {
    event.stopPropagation();
    callbacks.onSelectPerson(expert.person_id);
  });
  details.appendChild(relationsButton);
  item.appendChild(details);

  header.addEventListener("click", () => {
    details.hidden = !details.hidden;
    item.classList.toggle("expanded", !details.hidden);
    header.setAttribute("aria-expanded", String(!details.hidden));
  });
  return item;
}

export function renderResults(
  container: HTMLElement,
  response: SearchResponse,
  callbacks: ResultCallbacks,
): void {
  container.replaceChildren();
  if (response.experts.length === 0) {
    container.appendChild(el("p", "empty-state", "No experts found."));
    return;
  }
  const summary = el(
    "p",
    "result-summary",
    `${response.total_matched} expert${response.total_matched === 1 ? "" : "s"} matched`,
  );
  container.appendChild(summary);
  const list = el("ol", "expert-list");
  response.experts.forEach((expert, index) => {
    list.appendChild(expertItem(expert, index + 1, callbacks));
  });
  container.appendChild(list);
}

export function renderError(banner: HTMLElement, message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

export function clearError(banner: HTMLElement): void {
  banner.textContent = "";
  banner.hidden = true;
}
