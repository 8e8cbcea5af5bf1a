import { ApiClient } from "./client.js";
import { App } from "./app.js";

const baseUrl =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8080";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

const app = new App(root, new ApiClient(baseUrl));
app.rerender();
