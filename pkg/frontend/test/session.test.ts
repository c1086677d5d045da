import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { defaultConfig, loadOrCreateUserToken } from "../src/config";
import { CompletionController } from "../src/session";
import { fakeServer, flushAsync, ManualTimers, MockDocument } from "./helpers";

function setup(options: Parameters<typeof fakeServer>[0] = {}, configOverrides = {}) {
  const server = fakeServer(options);
  const timers = new ManualTimers();
  const config = defaultConfig({ userToken: "tok-1", ...configOverrides });
  const controller = new CompletionController(
    config,
    new ApiClient(config.serverUrl, server.fetchFn),
    timers
  );
  return { server, timers, config, controller };
}

async function typeTrigger(
  controller: CompletionController,
  doc: MockDocument,
  line: number,
  text: string,
  kind: "auto" | "manual" = "auto"
) {
  doc.type(line, text);
  const character = doc.lineText(line).length;
  return controller.handleTextChange(
    doc,
    line,
    character,
    kind,
    doc.textBefore(line, character),
    doc.textAfter(line, character)
  );
}

describe("scripted editor session", () => {
  it("trigger -> suggestions -> accept -> delay -> exactly one feedback", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["let x =", "print(x)"]);

    const served = await typeTrigger(controller, doc, 0, " ");
    expect(served).not.toBeNull();
    expect(served!.suggestions.map((s) => s.text)).toEqual(["f(a);", "g(b);"]);

    const request = server.completionCalls()[0].body;
    expect(request.trigger_kind).toBe("auto");
    expect(request.left_context).toBe("let x = ");
    expect(request.right_context).toBe("\nprint(x)");
    expect(request.user_token).toBe("tok-1");

    // The user accepts one of our marked items; the editor inserts it.
    controller.recordAcceptance(served!.requestId, "f(a);");
    doc.type(0, "f(a);");

    await timers.advance(30_000);

    const feedback = server.feedbackCalls();
    expect(feedback).toHaveLength(1);
    expect(feedback[0].body).toEqual({
      request_id: served!.requestId,
      chosen_text: "f(a);",
      ground_truth_line: "let x = f(a);",
    });

    // A duplicate timer fire or manual flush stays silent.
    await controller.flushGroundTruth(served!.requestId);
    await timers.advance(60_000);
    expect(server.feedbackCalls()).toHaveLength(1);
  });

  it("reports the line as it stands after further edits", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["total +"]);
    const served = await typeTrigger(controller, doc, 0, "=");
    controller.recordAcceptance(served!.requestId, "g(b);");
    doc.setLine(0, "total += compute(rows)");

    await timers.advance(30_000);
    expect(server.feedbackCalls()[0].body.ground_truth_line).toBe(
      "total += compute(rows)"
    );
  });

  it("tracks the invocation line when edits shift it", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["x = ", "rest()"]);
    const served = await typeTrigger(controller, doc, 0, "");
    expect(served).not.toBeNull();

    // two lines inserted above; the adapter remaps pending lines
    doc.setLine(0, "import os");
    doc.setLine(1, "import sys");
    (doc as unknown as { lines: string[] })["lines"] = [
      "import os",
      "import sys",
      "x = done()",
      "rest()",
    ];
    controller.adjustPendingLines(doc.id, (line) => line + 2);

    await timers.advance(30_000);
    expect(server.feedbackCalls()[0].body.ground_truth_line).toBe("x = done()");
  });
});

describe("invocation rules", () => {
  it("no automatic request without a trigger", async () => {
    const { server, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["let x"]);
    const served = await typeTrigger(controller, doc, 0, "1");
    expect(served).toBeNull();
    expect(server.calls).toHaveLength(0);
  });

  it("manual invocation fires anywhere", async () => {
    const { server, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["alphebt"]);
    const served = await typeTrigger(controller, doc, 0, "", "manual");
    expect(served).not.toBeNull();
    expect(server.completionCalls()[0].body.trigger_kind).toBe("manual");
  });

  it("unsupported buffers never produce requests", async () => {
    const { server, controller } = setup();
    const doc = new MockDocument("file:///notes.txt", "plaintext", ["x = "]);
    const served = await typeTrigger(controller, doc, 0, "");
    expect(served).toBeNull();
    expect(server.calls).toHaveLength(0);
  });

  it("network failure degrades to silence and leaves nothing pending", async () => {
    const { server, controller } = setup({ failNetwork: true });
    const doc = new MockDocument("file:///demo.py", "python", ["x = "]);
    const served = await typeTrigger(controller, doc, 0, "");
    expect(served).toBeNull();
    expect(controller.pendingCount()).toBe(0);
    expect(server.completionCalls()).toHaveLength(1); // attempted, then silent
  });
});

describe("acceptance bookkeeping", () => {
  it("native (unmarked) picks leave chosen_text absent", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["y = "]);
    await typeTrigger(controller, doc, 0, "");
    // no recordAcceptance call: the user picked a native suggestion
    await timers.advance(30_000);
    const body = server.feedbackCalls()[0].body;
    expect(body).not.toHaveProperty("chosen_text");
  });

  it("typing over the popup leaves chosen_text absent", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["y = "]);
    await typeTrigger(controller, doc, 0, "");
    doc.type(0, "handwritten()");
    await timers.advance(30_000);
    expect(server.feedbackCalls()[0].body).not.toHaveProperty("chosen_text");
  });
});

describe("document close", () => {
  it("flushes pending feedback immediately, once only", async () => {
    const { server, timers, controller } = setup();
    const doc = new MockDocument("file:///demo.py", "python", ["z = "]);
    const served = await typeTrigger(controller, doc, 0, "");
    controller.recordAcceptance(served!.requestId, "f(a);");

    await timers.advance(10_000); // closed at t = 10 s, before the delay
    await controller.handleDocumentClose(doc.id);
    expect(server.feedbackCalls()).toHaveLength(1);

    await timers.advance(60_000); // original timer must stay silent
    expect(server.feedbackCalls()).toHaveLength(1);
  });

  it("only flushes the closing document", async () => {
    const { server, timers, controller } = setup();
    const doc1 = new MockDocument("file:///a.py", "python", ["a = "]);
    const doc2 = new MockDocument("file:///b.py", "python", ["b = "]);
    await typeTrigger(controller, doc1, 0, "");
    await typeTrigger(controller, doc2, 0, "");
    await controller.handleDocumentClose(doc1.id);
    expect(server.feedbackCalls()).toHaveLength(1);
    await timers.advance(30_000);
    expect(server.feedbackCalls()).toHaveLength(2);
  });
});

describe("privacy gate", () => {
  it("context sharing defaults to off", () => {
    expect(defaultConfig().storeContext).toBe(false);
  });

  it("opt-out sessions always send store_context false and no context in feedback", async () => {
    const { server, timers, controller } = setup({}, { storeContext: false });
    const doc = new MockDocument("file:///demo.py", "python", ["secret = "]);
    const served = await typeTrigger(controller, doc, 0, "");
    controller.recordAcceptance(served!.requestId, "f(a);");
    await timers.advance(30_000);

    for (const call of server.completionCalls()) {
      expect(call.body.store_context).toBe(false);
    }
    for (const call of server.feedbackCalls()) {
      expect(Object.keys(call.body).sort()).toEqual([
        "chosen_text",
        "ground_truth_line",
        "request_id",
      ]);
    }
  });

  it("opted-in sessions mark requests for storage", async () => {
    const { server, controller } = setup({}, { storeContext: true });
    const doc = new MockDocument("file:///demo.py", "python", ["open = "]);
    await typeTrigger(controller, doc, 0, "");
    expect(server.completionCalls()[0].body.store_context).toBe(true);
  });
});

describe("user token", () => {
  it("is generated once and reused", () => {
    const backing = new Map<string, string>();
    const storage = {
      get: (key: string) => backing.get(key),
      set: (key: string, value: string) => void backing.set(key, value),
    };
    let counter = 0;
    const randomHex = () => `token-${++counter}`;
    const first = loadOrCreateUserToken(storage, randomHex);
    const second = loadOrCreateUserToken(storage, randomHex);
    expect(first).toBe("token-1");
    expect(second).toBe("token-1");
  });
});

describe("feedback retry", () => {
  it("retries once on failure then drops", async () => {
    const { server, timers, controller } = setup({ feedbackStatuses: [500, 200] });
    const doc = new MockDocument("file:///demo.py", "python", ["q = "]);
    await typeTrigger(controller, doc, 0, "");
    await timers.advance(30_000);
    await flushAsync();
    expect(server.feedbackCalls()).toHaveLength(2); // first 500, retry 200

    const dropped = setup({ feedbackStatuses: [500, 500] });
    const doc2 = new MockDocument("file:///demo.py", "python", ["q = "]);
    await typeTrigger(dropped.controller, doc2, 0, "");
    await dropped.timers.advance(30_000);
    await flushAsync();
    expect(dropped.server.feedbackCalls()).toHaveLength(2); // no third attempt
  });
});
