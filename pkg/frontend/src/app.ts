// Application wiring: search form, role dropdown, results list, relationship
// panel, and error states. In-flight responses for superseded queries are
// discarded, so the view always reflects the last completed request for the
// latest query.

import { ApiClient, ApiError } from "./api.js";
import { renderRelationshipError, renderRelationships } from "./relationship.js";
import { clearError, renderError, renderResults } from "./views.js";

export interface App {
  search(query: string, k: number, role?: string): Promise<void>;
  showRelationships(personId: string): Promise<void>;
}

export function initApp(root: HTMLElement, api: ApiClient): App {
  root.innerHTML = `
    <header class="topbar">
      <h1>Expert search</h1>
      <form class="search-form">
        <input type="search" name="q" placeholder="topic, e.g. xml protocols" required />
        <select name="role"><option value="">any role</option></select>
        <input type="number" name="k" value="10" min="1" max="100" />
        <button type="submit">Search</button>
      </form>
      <div class="error-banner" hidden></div>
    </header>
    <main class="panes">
      <section class="results" aria-label="results"></section>
      <aside class="relationships" aria-label="relationships" hidden></aside>
    </main>
  `;

  const form = root.querySelector<HTMLFormElement>(".search-form")!;
  const queryInput = root.querySelector<HTMLInputElement>("input[name=q]")!;
  const roleSelect = root.querySelector<HTMLSelectElement>("select[name=role]")!;
  const kInput = root.querySelector<HTMLInputElement>("input[name=k]")!;
  const banner = root.querySelector<HTMLElement>(".error-banner")!;
  const results = root.querySelector<HTMLElement>(".results")!;
  const relationshipPane = root.querySelector<HTMLElement>(".relationships")!;

  let searchTicket = 0;
  let relationTicket = 0;

  async function search(query: string, k: number, role?: string): Promise<void> {
    const ticket = ++searchTicket;
    try {
      const response = await api.search(query, k, role);
      if (ticket !== searchTicket) {
        return; // superseded by a newer query
      }
      clearError(banner);
      renderResults(results, response, { onSelectPerson: showRelationships });
    } catch (err) {
      if (ticket !== searchTicket) {
        return;
      }
      const message = err instanceof ApiError ? err.message : "unexpected error";
      renderError(banner, message);
    }
  }

  async function showRelationships(personId: string): Promise<void> {
    const ticket = ++relationTicket;
    relationshipPane.hidden = false;
    try {
      const response = await api.relationships(personId);
      if (ticket !== relationTicket) {
        return;
      }
      renderRelationships(relationshipPane, response, { onRecenter: showRelationships });
    } catch (err) {
      if (ticket !== relationTicket) {
        return;
      }
      const message = err instanceof ApiError ? err.message : "unexpected error";
      renderRelationshipError(relationshipPane, message);
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const k = Number.parseInt(kInput.value, 10) || 10;
    void search(queryInput.value, k, roleSelect.value || undefined);
  });

  void api
    .roles()
    .then((roles) => {
      for (const role of roles) {
        const option = document.createElement("option");
        option.value = role.role_id;
        option.textContent = role.title || role.role_id;
        roleSelect.appendChild(option);
      }
    })
    .catch(() => {
      // role filtering stays available as free text on the API; the
      // dropdown just offers no suggestions when the vocabulary call fails
    });

  return { search, showRelationships };
}
