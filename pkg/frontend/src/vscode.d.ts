/**
 * Ambient declarations for the slice of the editor extension API this
 * extension uses.  Compiling against the shim keeps the build free of
 * editor tooling; inside a real extension host the module resolves to
 * the host implementation.
 */

declare module "vscode" {
  export interface Disposable {
    dispose(): void;
  }

  export class Position {
    constructor(line: number, character: number);
    readonly line: number;
    readonly character: number;
  }

  export interface TextLine {
    readonly text: string;
  }

  export interface Uri {
    toString(): string;
  }

  export interface TextDocument {
    readonly languageId: string;
    readonly uri: Uri;
    readonly lineCount: number;
    getText(): string;
    lineAt(line: number): TextLine;
    offsetAt(position: Position): number;
  }

  export interface TextDocumentContentChangeEvent {
    readonly text: string;
  }

  export interface TextDocumentChangeEvent {
    readonly document: TextDocument;
    readonly contentChanges: readonly TextDocumentContentChangeEvent[];
  }

  export enum CompletionItemKind {
    Text = 0,
    Snippet = 14,
  }

  export interface Command {
    command: string;
    title: string;
    arguments?: unknown[];
  }

  export class CompletionItem {
    constructor(label: string, kind?: CompletionItemKind);
    label: string;
    kind?: CompletionItemKind;
    detail?: string;
    insertText?: string;
    sortText?: string;
    filterText?: string;
    command?: Command;
  }

  export interface CancellationToken {
    readonly isCancellationRequested: boolean;
  }

  export interface CompletionContext {
    readonly triggerKind: number;
  }

  export interface CompletionItemProvider {
    provideCompletionItems(
      document: TextDocument,
      position: Position,
      token: CancellationToken,
      context: CompletionContext
    ): Thenable<CompletionItem[]> | CompletionItem[];
  }

  export interface WorkspaceConfiguration {
    get<T>(section: string, defaultValue: T): T;
  }

  export interface Memento {
    get<T>(key: string): T | undefined;
    update(key: string, value: unknown): Thenable<void>;
  }

  export interface ExtensionContext {
    readonly subscriptions: Disposable[];
    readonly globalState: Memento;
  }

  export namespace languages {
    function registerCompletionItemProvider(
      selector: string | string[],
      provider: CompletionItemProvider,
      ...triggerCharacters: string[]
    ): Disposable;
  }

  export namespace commands {
    function registerCommand(command: string, callback: (...args: unknown[]) => unknown): Disposable;
    function executeCommand(command: string): Thenable<unknown>;
  }

  export namespace workspace {
    function getConfiguration(section: string): WorkspaceConfiguration;
    function onDidCloseTextDocument(listener: (document: TextDocument) => void): Disposable;
    function onDidChangeTextDocument(listener: (event: TextDocumentChangeEvent) => void): Disposable;
  }

  export interface Thenable<T> extends PromiseLike<T> {}
}
