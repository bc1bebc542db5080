/** Thin typed client over the documented /v1 endpoints. */

import type {
  HealthResponse,
  InterpretRequest,
  InterpretResponse,
  MetricsResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async interpret(request: InterpretRequest): Promise<InterpretResponse> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url("/v1/interpret"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
      });
    } catch (cause) {
      throw new ServiceError(`service unreachable: ${String(cause)}`);
    }
    if (!response.ok) {
      throw new ServiceError(`interpret failed (${response.status})`, response.status);
    }
    return (await response.json()) as InterpretResponse;
  }

  async health(): Promise<HealthResponse> {
    const response = await this.fetchImpl(this.url("/v1/health"));
    if (!response.ok) {
      throw new ServiceError(`health failed (${response.status})`, response.status);
    }
    return (await response.json()) as HealthResponse;
  }

  async metrics(): Promise<MetricsResponse> {
    const response = await this.fetchImpl(this.url("/v1/metrics"));
    if (!response.ok) {
      throw new ServiceError(`metrics failed (${response.status})`, response.status);
    }
    return (await response.json()) as MetricsResponse;
  }
}
