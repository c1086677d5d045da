/** Client configuration and the once-only user token. */

export interface ClientConfig {
  serverUrl: string;
  userToken: string;
  /** Opt-in context sharing; always defaults to off. */
  storeContext: boolean;
  groundTruthDelayS: number;
  ide: string;
  pluginVersion: string;
  /** Null means every language is fair game. */
  supportedLanguages: Set<string> | null;
}

export const DEFAULT_SUPPORTED_LANGUAGES: ReadonlySet<string> = new Set([
  "python",
  "java",
  "typescript",
  "javascript",
  "php",
  "kotlin",
  "cpp",
  "rust",
  "csharp",
  "go",
  "c",
  "scala",
  "ruby",
]);

export interface TokenStorage {
  get(key: string): string | undefined;
  set(key: string, value: string): void;
}

const TOKEN_KEY = "linecomp.userToken";

function defaultRandomHex(): string {
  let out = "";
  for (let i = 0; i < 32; i++) {
    out += Math.floor(Math.random() * 16).toString(16);
  }
  return out;
}

/** Generate the opaque user token once and reuse it forever after. */
export function loadOrCreateUserToken(
  storage: TokenStorage,
  randomHex: () => string = defaultRandomHex
): string {
  const existing = storage.get(TOKEN_KEY);
  if (existing) {
    return existing;
  }
  const token = randomHex();
  storage.set(TOKEN_KEY, token);
  return token;
}

export function defaultConfig(overrides: Partial<ClientConfig> = {}): ClientConfig {
  return {
    serverUrl: "http://127.0.0.1:8008",
    userToken: "anonymous",
    storeContext: false,
    groundTruthDelayS: 30,
    ide: "vscode-like",
    pluginVersion: "0.1.0",
    supportedLanguages: new Set(DEFAULT_SUPPORTED_LANGUAGES),
    ...overrides,
  };
}
