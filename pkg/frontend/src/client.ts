// Thin fetch wrapper around the session API.

import type {
  AnswerAck,
  AnswerBody,
  CreateSessionBody,
  QuestionResponse,
  SessionResult,
  SessionStatus,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface ApiClient {
  createSession(body: CreateSessionBody): Promise<{ id: string }>;
  getStatus(id: string): Promise<SessionStatus>;
  getQuestion(id: string, waitS: number): Promise<QuestionResponse>;
  postAnswer(id: string, body: AnswerBody): Promise<AnswerAck>;
  abort(id: string): Promise<void>;
  getResult(id: string): Promise<SessionResult>;
}

export class HttpClient implements ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
  }

  createSession(body: CreateSessionBody): Promise<{ id: string }> {
    return this.post("/sessions", body);
  }

  getStatus(id: string): Promise<SessionStatus> {
    return this.request(`/sessions/${id}`);
  }

  getQuestion(id: string, waitS: number): Promise<QuestionResponse> {
    return this.request(`/sessions/${id}/question?wait=${waitS}`);
  }

  postAnswer(id: string, body: AnswerBody): Promise<AnswerAck> {
    return this.post(`/sessions/${id}/answer`, body);
  }

  async abort(id: string): Promise<void> {
    await this.post(`/sessions/${id}/abort`);
  }

  getResult(id: string): Promise<SessionResult> {
    return this.request(`/sessions/${id}/result`);
  }
}
