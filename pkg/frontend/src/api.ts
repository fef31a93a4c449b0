/** Typed client for the engine API; all UI mutations go through here. */

import {
  CatalogEntry,
  ExplanationResponse,
  KnowledgeEntry,
  Rating,
  ScenarioResponse,
  SessionDocument,
  SkeletalRecording,
  StageResponse,
  TeachingScenario,
} from './types';

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = typeof fetch;

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'HttpError';
  let message = `${response.status}`;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(code, message, response.status);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (...args) => fetch(...args)
  ) {}

  private post(path: string, body: unknown): Promise<Response> {
    return this.fetchFn(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  async createSession(groupLabel?: string): Promise<{ id: string }> {
    return unwrap(await this.post('/sessions', { group_label: groupLabel ?? null }));
  }

  async getSession(id: string): Promise<SessionDocument> {
    return unwrap(await this.fetchFn(`${this.baseUrl}/sessions/${id}`));
  }

  async listScenarios(): Promise<CatalogEntry[]> {
    const body = await unwrap<{ scenarios: CatalogEntry[] }>(
      await this.fetchFn(`${this.baseUrl}/scenarios`)
    );
    return body.scenarios;
  }

  async getKnowledge(kind: 'gesture_types' | 'intentions', key: string): Promise<KnowledgeEntry> {
    return unwrap(await this.fetchFn(`${this.baseUrl}/knowledge/${kind}/${key}`));
  }

  async postCatalogScenario(sessionId: string, catalogId: string): Promise<ScenarioResponse> {
    return unwrap(await this.post(`/sessions/${sessionId}/scenario`, { catalog_id: catalogId }));
  }

  async postCustomScenario(
    sessionId: string,
    scenario: Partial<TeachingScenario>
  ): Promise<ScenarioResponse> {
    return unwrap(
      await this.post(`/sessions/${sessionId}/scenario`, {
        scenario: { ...scenario, source: 'custom' },
      })
    );
  }

  async postRatings(sessionId: string, ratings: Rating[]): Promise<StageResponse> {
    return unwrap(await this.post(`/sessions/${sessionId}/ratings`, { ratings }));
  }

  async postDemonstration(
    sessionId: string,
    recording: SkeletalRecording
  ): Promise<StageResponse> {
    return unwrap(await this.post(`/sessions/${sessionId}/demonstration`, { recording }));
  }

  async postExplanation(sessionId: string, text: string): Promise<ExplanationResponse> {
    return unwrap(await this.post(`/sessions/${sessionId}/explanation`, { text }));
  }
}

/** Parse a server-sent-events body into its JSON data events. */
export function parseSse(text: string): { type: string; [key: string]: unknown }[] {
  const events: { type: string; [key: string]: unknown }[] = [];
  for (const line of text.split('\n')) {
    if (line.startsWith('data: ')) {
      events.push(JSON.parse(line.slice('data: '.length)));
    }
  }
  return events;
}
