import { GroupInfo, MediatorState, WindowStats } from "./types.js";

export type FetchFn = (url: string) => Promise<Response>;

/** Thin client over the hub REST API; fetch is injectable for tests. */
export class HubClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchFn = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!res.ok) {
      throw new Error(`GET ${path} failed: ${res.status}`);
    }
    return (await res.json()) as T;
  }

  groups(): Promise<GroupInfo[]> {
    return this.get<GroupInfo[]>("/groups");
  }

  stats(groupId: string, fromTs: number, toTs: number): Promise<WindowStats> {
    return this.get<WindowStats>(
      `/groups/${groupId}/stats?from=${fromTs}&to=${toTs}`,
    );
  }

  mediator(groupId: string, fromTs: number, toTs: number): Promise<MediatorState> {
    return this.get<MediatorState>(
      `/groups/${groupId}/mediator?from=${fromTs}&to=${toTs}`,
    );
  }
}
