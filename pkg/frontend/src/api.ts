/**
 * HTTP client for the completion service wire contract.
 *
 * All failures degrade to "no suggestions" / "feedback dropped": the
 * extension must never surface network errors into the editing flow.
 */

export interface Suggestion {
  text: string;
  model_id: string;
}

export interface CompletionRequestBody {
  user_token: string;
  ide: string;
  plugin_version: string;
  language: string;
  left_context: string;
  right_context: string;
  trigger_kind: "auto" | "manual";
  store_context: boolean;
}

export interface CompletionResponse {
  request_id: string;
  suggestions: Suggestion[];
}

export interface FeedbackBody {
  request_id: string;
  chosen_text?: string;
  ground_truth_line: string;
}

export interface FetchResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body: string }
) => Promise<FetchResponseLike>;

const JSON_HEADERS = { "content-type": "application/json" };

export class ApiClient {
  constructor(
    private readonly serverUrl: string,
    private readonly fetchFn: FetchLike = globalThis.fetch as unknown as FetchLike
  ) {}

  /** Null on any failure; callers treat that as "stay silent". */
  async requestCompletion(body: CompletionRequestBody): Promise<CompletionResponse | null> {
    try {
      const response = await this.fetchFn(`${this.serverUrl}/api/v1/completion`, {
        method: "POST",
        headers: JSON_HEADERS,
        body: JSON.stringify(body),
      });
      if (!response.ok) {
        return null;
      }
      return (await response.json()) as CompletionResponse;
    } catch {
      return null;
    }
  }

  /** One retry on failure, then the report is dropped. */
  async sendFeedback(body: FeedbackBody): Promise<boolean> {
    for (let attempt = 0; attempt < 2; attempt++) {
      try {
        const response = await this.fetchFn(`${this.serverUrl}/api/v1/feedback`, {
          method: "POST",
          headers: JSON_HEADERS,
          body: JSON.stringify(body),
        });
        if (response.ok) {
          return true;
        }
      } catch {
        // fall through to the retry
      }
    }
    return false;
  }
}
