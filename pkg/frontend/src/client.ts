/** Thin typed client for the dispatching server. */

import type { SnapshotDoc } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function unwrap(res: Response): Promise<SnapshotDoc> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      detail = (await res.json()).detail ?? detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<SnapshotDoc>;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async createSession(instanceJson: string): Promise<SnapshotDoc> {
    const res = await this.fetchFn(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: instanceJson,
    });
    return unwrap(res);
  }

  async applyAction(
    sessionId: string,
    train: string,
    elementaryRoute: string,
  ): Promise<SnapshotDoc> {
    const res = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/actions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ train, elementary_route: elementaryRoute }),
    });
    return unwrap(res);
  }

  async getSession(sessionId: string): Promise<SnapshotDoc> {
    return unwrap(await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}`));
  }

  async undo(sessionId: string): Promise<SnapshotDoc> {
    const res = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/undo`, {
      method: "POST",
    });
    return unwrap(res);
  }
}
