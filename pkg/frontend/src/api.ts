// Typed client for the assistant service. The fetch implementation is
// injectable so tests can run without a network or a browser.

import type {
  DocumentRecord,
  ProjectState,
  Question,
  Recommendation,
  Triple,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.base + path, init);
    const data = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const err = data as { error?: string; detail?: string };
      throw new ApiError(
        resp.status,
        err.error ?? `HTTP ${resp.status}`,
        err.detail ?? "request failed",
      );
    }
    return data as T;
  }

  createProject(body: {
    documents: DocumentRecord[];
    components?: string[];
    level?: string;
    attributes?: Record<string, string>;
    project_id?: string;
  }): Promise<{ project_id: string; revision: number }> {
    return this.request("POST", "/projects", body);
  }

  getProject(projectId: string): Promise<ProjectState> {
    return this.request("GET", `/projects/${projectId}`);
  }

  analyze(projectId: string): Promise<{
    recommendations: Recommendation[];
    questions: Question[];
    revision: number;
  }> {
    return this.request("POST", `/projects/${projectId}/analyze`);
  }

  getRecommendations(
    projectId: string,
    status?: string,
  ): Promise<{ recommendations: Recommendation[] }> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request("GET", `/projects/${projectId}/recommendations${query}`);
  }

  decide(
    projectId: string,
    recId: string,
    decision: "accept" | "reject",
  ): Promise<{ recommendation: Recommendation; project: ProjectState }> {
    return this.request(
      "POST",
      `/projects/${projectId}/recommendations/${recId}`,
      { decision },
    );
  }

  getQuestions(
    projectId: string,
    status?: string,
  ): Promise<{ questions: Question[] }> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request("GET", `/projects/${projectId}/questions${query}`);
  }

  answer(
    projectId: string,
    questionId: string,
    value: string,
  ): Promise<{ question: Question; project: ProjectState }> {
    return this.request(
      "POST",
      `/projects/${projectId}/questions/${questionId}`,
      { value },
    );
  }

  knowledge(pattern: {
    s?: string;
    p?: string;
    o?: string;
  } = {}): Promise<{ triples: Triple[] }> {
    const params = new URLSearchParams();
    if (pattern.s) params.set("s", pattern.s);
    if (pattern.p) params.set("p", pattern.p);
    if (pattern.o) params.set("o", pattern.o);
    const query = params.toString();
    return this.request("GET", `/knowledge${query ? "?" + query : ""}`);
  }

  health(): Promise<{ status: string; models_loaded: boolean }> {
    return this.request("GET", "/healthz");
  }
}
