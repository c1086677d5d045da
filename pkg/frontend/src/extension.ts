/**
 * Editor adapter: registers the completion provider and the manual
 * invocation command, and relays acceptance and document lifecycle
 * events into the session controller.
 *
 * Served suggestions are inserted into the native suggestion list with
 * high priority and one uniform marker, regardless of which model
 * produced them.
 */

import * as vscode from "vscode";

import { ApiClient } from "./api";
import {
  ClientConfig,
  DEFAULT_SUPPORTED_LANGUAGES,
  loadOrCreateUserToken,
} from "./config";
import { CompletionController, DocumentView } from "./session";

const MARKER = "○ linecomp";
const HIGH_PRIORITY_SORT_PREFIX = "0000";

function wrapDocument(document: vscode.TextDocument): DocumentView {
  return {
    id: document.uri.toString(),
    languageId: document.languageId,
    lineText: (line) => document.lineAt(line).text,
  };
}

function loadConfig(context: vscode.ExtensionContext): ClientConfig {
  const settings = vscode.workspace.getConfiguration("linecomp");
  return {
    serverUrl: settings.get("serverUrl", "http://127.0.0.1:8008"),
    userToken: loadOrCreateUserToken({
      get: (key) => context.globalState.get<string>(key),
      set: (key, value) => {
        void context.globalState.update(key, value);
      },
    }),
    storeContext: settings.get("shareContext", false),
    groundTruthDelayS: settings.get("groundTruthDelaySeconds", 30),
    ide: "vscode-like",
    pluginVersion: "0.1.0",
    supportedLanguages: new Set(DEFAULT_SUPPORTED_LANGUAGES),
  };
}

export function activate(context: vscode.ExtensionContext): void {
  const config = loadConfig(context);
  const controller = new CompletionController(config, new ApiClient(config.serverUrl), {
    setTimeout: (fn, ms) => setTimeout(fn, ms),
    clearTimeout: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
  });

  let manualNext = false;

  const provider: vscode.CompletionItemProvider = {
    async provideCompletionItems(document, position) {
      const kind = manualNext ? "manual" : "auto";
      manualNext = false;
      const text = document.getText();
      const offset = document.offsetAt(position);
      const served = await controller.handleTextChange(
        wrapDocument(document),
        position.line,
        position.character,
        kind,
        text.slice(0, offset),
        text.slice(offset)
      );
      if (served === null) {
        return [];
      }
      return served.suggestions.map((suggestion, index) => {
        const item = new vscode.CompletionItem(
          suggestion.text,
          vscode.CompletionItemKind.Snippet
        );
        item.detail = MARKER;
        item.sortText = HIGH_PRIORITY_SORT_PREFIX + String(index).padStart(3, "0");
        item.command = {
          command: "linecomp.accepted",
          title: "record acceptance",
          arguments: [served.requestId, suggestion.text],
        };
        return item;
      });
    },
  };

  context.subscriptions.push(
    vscode.languages.registerCompletionItemProvider(
      [...DEFAULT_SUPPORTED_LANGUAGES],
      provider,
      ".", "+", "-", "*", "/", "%", "<", ">", "&", "|", "^", "=",
      "!", ";", ",", "[", "(", "{", "~", " "
    ),
    vscode.commands.registerCommand("linecomp.triggerCompletion", async () => {
      manualNext = true;
      await vscode.commands.executeCommand("editor.action.triggerSuggest");
    }),
    vscode.commands.registerCommand("linecomp.accepted", (...args: unknown[]) => {
      const [requestId, text] = args;
      if (typeof requestId === "string" && typeof text === "string") {
        controller.recordAcceptance(requestId, text);
      }
    }),
    vscode.workspace.onDidCloseTextDocument((document) => {
      void controller.handleDocumentClose(document.uri.toString());
    })
  );
}

export function deactivate(): void {}
