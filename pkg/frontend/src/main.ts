/**
 * Page entry point: boot the controller from the URL fragment, keep the
 * fragment in sync with every state change, and honor back/forward
 * navigation by re-initializing from the fragment it restores.
 */

import { ApiClient } from "./api.js";
import { ensureSkeleton, update, wire } from "./render.js";
import { Dashboard } from "./state.js";

export function boot(root: HTMLElement): Dashboard {
  ensureSkeleton(root);
  const api = new ApiClient();
  let applyingHistory = false;

  const dash = new Dashboard(api, (state) => {
    update(root, state);
    if (!state.pending && !applyingHistory) {
      const fragment = dash.fragment();
      const target = fragment ? `#${fragment}` : window.location.pathname;
      if (window.location.hash.replace(/^#/, "") !== fragment) {
        window.history.replaceState(null, "", target);
      }
    }
  });

  wire(root, dash);

  window.addEventListener("hashchange", () => {
    applyingHistory = true;
    void dash.init(window.location.hash).finally(() => {
      applyingHistory = false;
    });
  });

  void dash.init(window.location.hash);
  return dash;
}

const rootElement = document.getElementById("app");
if (rootElement) boot(rootElement);
