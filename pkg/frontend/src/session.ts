/**
 * Editor-agnostic completion session logic.
 *
 * The controller turns text changes into completion requests (applying
 * the same trigger rules as the server), remembers which served
 * suggestion the user accepted, and pushes the ground-truth line back
 * once the configured delay has elapsed (or immediately when the
 * document closes).  Each served request produces at most one feedback
 * POST, ever.
 */

import { ApiClient, CompletionRequestBody, Suggestion } from "./api";
import { ClientConfig } from "./config";
import { detectTrigger } from "./triggers";

/** Minimal view of an open document; adapters wrap the real editor API. */
export interface DocumentView {
  readonly id: string;
  readonly languageId: string;
  lineText(line: number): string;
}

export interface TimerHost {
  setTimeout(fn: () => void, ms: number): unknown;
  clearTimeout(handle: unknown): void;
}

interface PendingFeedback {
  requestId: string;
  doc: DocumentView;
  /** Invocation line, kept current by the adapter through edits. */
  line: number;
  chosenText: string | null;
  sent: boolean;
  timer: unknown;
}

export interface ServedCompletion {
  requestId: string;
  suggestions: Suggestion[];
}

export class CompletionController {
  private readonly pending = new Map<string, PendingFeedback>();

  constructor(
    private readonly config: ClientConfig,
    private readonly api: ApiClient,
    private readonly timers: TimerHost
  ) {}

  /**
   * Called on typing (kind "auto") or the manual keybind.  Automatic
   * invocations only fire when the left context ends at a trigger
   * token; network problems yield an empty result and never block.
   */
  async handleTextChange(
    doc: DocumentView,
    line: number,
    character: number,
    kind: "auto" | "manual",
    leftContext: string,
    rightContext: string
  ): Promise<ServedCompletion | null> {
    const languages = this.config.supportedLanguages;
    if (languages !== null && !languages.has(doc.languageId)) {
      return null;
    }
    if (kind === "auto" && detectTrigger(leftContext) === null) {
      return null;
    }
    const body: CompletionRequestBody = {
      user_token: this.config.userToken,
      ide: this.config.ide,
      plugin_version: this.config.pluginVersion,
      language: doc.languageId,
      left_context: leftContext,
      right_context: rightContext,
      trigger_kind: kind,
      store_context: this.config.storeContext,
    };
    const response = await this.api.requestCompletion(body);
    if (response === null) {
      return null;
    }
    const entry: PendingFeedback = {
      requestId: response.request_id,
      doc,
      line,
      chosenText: null,
      sent: false,
      timer: null,
    };
    entry.timer = this.timers.setTimeout(() => {
      void this.flushGroundTruth(response.request_id);
    }, this.config.groundTruthDelayS * 1000);
    this.pending.set(response.request_id, entry);
    return { requestId: response.request_id, suggestions: response.suggestions };
  }

  /** The user inserted one of our served suggestions. */
  recordAcceptance(requestId: string, suggestionText: string): void {
    const entry = this.pending.get(requestId);
    if (entry && !entry.sent) {
      entry.chosenText = suggestionText;
    }
  }

  /**
   * Report the current content of the invocation line.  Safe to call
   * any number of times; only the first call sends anything.
   */
  async flushGroundTruth(requestId: string): Promise<void> {
    const entry = this.pending.get(requestId);
    if (!entry || entry.sent) {
      return;
    }
    entry.sent = true;
    this.timers.clearTimeout(entry.timer);
    this.pending.delete(requestId);
    const body = {
      request_id: requestId,
      ...(entry.chosenText !== null ? { chosen_text: entry.chosenText } : {}),
      ground_truth_line: entry.doc.lineText(entry.line),
    };
    await this.api.sendFeedback(body);
  }

  /** Closing a document flushes its pending reports immediately. */
  async handleDocumentClose(docId: string): Promise<void> {
    const ids = [...this.pending.values()]
      .filter((entry) => entry.doc.id === docId)
      .map((entry) => entry.requestId);
    for (const requestId of ids) {
      await this.flushGroundTruth(requestId);
    }
  }

  /** Adapters remap invocation lines when edits shift them. */
  adjustPendingLines(docId: string, mapLine: (line: number) => number): void {
    for (const entry of this.pending.values()) {
      if (entry.doc.id === docId) {
        entry.line = mapLine(entry.line);
      }
    }
  }

  pendingCount(): number {
    return this.pending.size;
  }
}
