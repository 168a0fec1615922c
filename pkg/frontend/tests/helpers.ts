// Shared DOM-test helpers: fetch routing and async settling.

import { expect } from "vitest";

export type Route = (url: URL, init?: RequestInit) => unknown | { status: number; body: unknown };

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": status >= 400 ? "application/problem+json" : "application/json" },
  });
}

/** fetch stub keyed by "METHOD pathname"; throws on unrouted requests. */
export function routedFetch(routes: Record<string, Route>): typeof fetch {
  return async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), "http://service.test");
    const method = init?.method ?? "GET";
    const route = routes[`${method} ${url.pathname}`];
    if (!route) {
      throw new Error(`unrouted request: ${method} ${url.pathname}`);
    }
    const result = route(url, init);
    if (result && typeof result === "object" && "status" in (result as object) && "body" in (result as object)) {
      const { status, body } = result as { status: number; body: unknown };
      return jsonResponse(body, status);
    }
    return jsonResponse(result);
  };
}

export async function waitFor<T>(probe: () => T | null | undefined, what: string, timeoutMs = 5000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) {
      expect.fail(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 20));
  }
}

export function click(node: Element): void {
  node.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}
