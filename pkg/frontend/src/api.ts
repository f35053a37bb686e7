import type { DialogueRequest, DialogueResponse, ModelView, TreeSnapshot } from './types';

/** Error body returned by the service; status distinguishes a negative
 * classification (422) from genuine request errors. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }

  get isNegativeClassification(): boolean {
    return this.status === 422 && this.code === 'not_entailed';
  }
}

export interface Api {
  createSession(): Promise<string>;
  sendRequest(sessionId: string, request: DialogueRequest): Promise<DialogueResponse>;
  fetchTree(sessionId: string): Promise<TreeSnapshot>;
  fetchModel(): Promise<ModelView>;
  health(): Promise<boolean>;
  mediaUrl(path: string): string;
}

async function parseError(response: Response): Promise<ApiError> {
  let code = 'unknown';
  let message = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.code === 'string') code = body.code;
    if (body && typeof body.message === 'string') message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export function createApi(baseUrl: string): Api {
  const root = baseUrl.replace(/\/$/, '');

  async function request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${root}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return response.json() as Promise<T>;
  }

  return {
    async createSession(): Promise<string> {
      const body = await request<{ session_id: string }>('/api/sessions', {
        method: 'POST',
      });
      return body.session_id;
    },

    sendRequest(sessionId: string, req: DialogueRequest): Promise<DialogueResponse> {
      return request<DialogueResponse>(`/api/sessions/${sessionId}/requests`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(req),
      });
    },

    fetchTree(sessionId: string): Promise<TreeSnapshot> {
      return request<TreeSnapshot>(`/api/tree/${sessionId}`);
    },

    fetchModel(): Promise<ModelView> {
      return request<ModelView>('/api/model');
    },

    async health(): Promise<boolean> {
      try {
        const body = await request<{ status: string }>('/api/health');
        return body.status === 'ok';
      } catch {
        return false;
      }
    },

    mediaUrl(path: string): string {
      return path.startsWith('/') ? `${root}${path}` : path;
    },
  };
}
