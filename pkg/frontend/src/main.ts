import { ApiClient } from "./api.js";
import { initApp } from "./app.js";

// same-origin by default; override with ?api=http://host:port for a service
// running elsewhere (the service sends Access-Control-Allow-Origin: *)
const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
initApp(root, new ApiClient(apiBase));
