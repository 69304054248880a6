/** Scripted fetch for model tests: a route table plus a request log. */

export interface Recorded {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: string | null;
}

type Handler = (req: Recorded) => Response;

export function jsonResponse(
  status: number,
  body: unknown,
  headers?: Record<string, string>,
): Response {
  return new Response(status === 304 ? null : JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json", ...headers },
  });
}

export class ScriptedFetch {
  requests: Recorded[] = [];
  private routes: { method: string; path: string; handler: Handler }[] = [];

  on(method: string, path: string, handler: Handler): this {
    this.routes.push({ method: method.toUpperCase(), path, handler });
    return this;
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const headers: Record<string, string> = {};
    for (const [key, value] of Object.entries(init?.headers ?? {})) {
      headers[key.toLowerCase()] = value as string;
    }
    const recorded: Recorded = {
      url,
      method,
      headers,
      body: typeof init?.body === "string" ? init.body : null,
    };
    this.requests.push(recorded);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const route = this.routes.find(
      (r) => r.method === method && r.path === path,
    );
    if (!route) {
      return jsonResponse(404, { detail: `no scripted route ${method} ${path}` });
    }
    return route.handler(recorded);
  };
}
