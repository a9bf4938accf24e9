// Relationship panel: the selected person's units and projects with
// co-members grouped by the shared container. Co-members re-center the
// panel when clicked.

import type { CoMember, RelationshipResponse } from "./api.js";

export interface RelationshipCallbacks {
  onRecenter: (personId: string) => void;
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

function memberList(members: CoMember[], callbacks: RelationshipCallbacks): HTMLUListElement {
  const list = el("ul", "co-members");
  for (const member of members) {
    const item = el("li");
    const button = el("button", "co-member", member.display_name);
    button.type = "button";
    button.dataset.personId = member.person_id;
    button.addEventListener("click", () => callbacks.onRecenter(member.person_id));
    item.appendChild(button);
    if (member.roles.length > 0) {
      item.appendChild(el("span", "member-roles", ` (${member.roles.join(", ")})`));
    }
    list.appendChild(item);
  }
  return list;
}

export function renderRelationships(
  container: HTMLElement,
  response: RelationshipResponse,
  callbacks: RelationshipCallbacks,
): void {
  container.replaceChildren();
  container.appendChild(el("h2", "panel-title", response.display_name));

  if (response.units.length === 0 && response.projects.length === 0) {
    container.appendChild(el("p", "empty-state", "No unit or project memberships."));
    return;
  }
  for (const unit of response.units) {
    const section = el("section", "container-group");
    section.dataset.containerId = unit.unit_id;
    section.appendChild(el("h3", undefined, `${unit.title || unit.unit_id} (${unit.unit_type})`));
    if (unit.co_members.length === 0) {
      section.appendChild(el("p", "empty-state", "No co-members."));
    } else {
      section.appendChild(memberList(unit.co_members, callbacks));
    }
    container.appendChild(section);
  }
  for (const project of response.projects) {
    const section = el("section", "container-group");
    section.dataset.containerId = project.project_id;
    section.appendChild(el("h3", undefined, `${project.title || project.project_id} (project)`));
    if (project.co_members.length === 0) {
      section.appendChild(el("p", "empty-state", "No co-members."));
    } else {
      section.appendChild(memberList(project.co_members, callbacks));
    }
    container.appendChild(section);
  }
}

export function renderRelationshipError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  container.appendChild(el("p", "not-found", message));
}
