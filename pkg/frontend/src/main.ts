/** Bootstrap: wire API, local state, controller and UI together. */

import { ApiClient } from "./api.js";
import { AssistantController } from "./controller.js";
import { PreferenceState } from "./state.js";
import { AssistantUi } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8080";

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const api = new ApiClient(baseUrl, (url, init) => fetch(url, init));
  const state = new PreferenceState(window.localStorage);
  const controller = new AssistantController(api, state);
  const ui = new AssistantUi(root, controller);

  try {
    await controller.init();
  } catch {
    ui.setOffline(true);
    return;
  }
  ui.renderPreferences();

  // category stands in for shelf proximity: the user picks where they are
  const page = await api.products(undefined, 1, 500);
  const categories = [...new Set(page.items.map((p) => p.category_id))].sort();
  ui.renderCategories(categories, (category) => {
    controller
      .browseCategory(category)
      .then((ranked) => {
        ui.setOffline(false);
        ui.renderProducts(ranked);
      })
      .catch(() => ui.setOffline(true));
  });
}

void start();
