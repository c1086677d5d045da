/**
 * Trigger-point detection, mirroring the server's lexer.
 *
 * The two implementations must agree on every pair in
 * conformance/trigger_fixtures.json (enforced by the conformance test);
 * change rules there and here together, then regenerate the fixtures.
 *
 * Rules: symbols match when the left context, after stripping at most
 * one trailing space, ends with the symbol (longest symbol wins);
 * keywords need a word boundary before them and one trailing whitespace
 * character after them.
 */

const KEYWORDS = [
  "await", "assert", "raise", "del", "lambda", "yield", "return",
  "while", "for", "if", "elif", "else", "global", "in", "and", "not",
  "or", "is", "with", "except",
] as const;

const SYMBOLS = [
  ".", "+", "-", "*", "/", "%", "**", "<<", ">>", "&", "|", "^",
  "==", "!=", "<=", ">=", "+=", "-=", "=", "<", ">", ";", ",",
  "[", "(", "{", "~",
] as const;

// Longest first; Array.prototype.sort is stable, so equal-length tokens
// keep their canonical order.
const SYMBOLS_BY_LENGTH: string[] = [...SYMBOLS].sort((a, b) => b.length - a.length);
const KEYWORDS_BY_LENGTH: string[] = [...KEYWORDS].sort((a, b) => b.length - a.length);

export type TokenKind = "keyword" | "symbol";

export interface TriggerToken {
  text: string;
  kind: TokenKind;
}

export interface TriggerMatch {
  token: TriggerToken;
  /** Index just past the token text in the left context. */
  endOffset: number;
}

function isIdentChar(ch: string): boolean {
  return /^[A-Za-z0-9_]$/.test(ch);
}

export function triggerVocabulary(): TriggerToken[] {
  const vocab: TriggerToken[] = KEYWORDS.map((text) => ({ text, kind: "keyword" }));
  for (const text of SYMBOLS_BY_LENGTH) {
    vocab.push({ text, kind: "symbol" });
  }
  return vocab;
}

export function isTrigger(text: string): boolean {
  return (KEYWORDS as readonly string[]).includes(text) || (SYMBOLS as readonly string[]).includes(text);
}

export function detectTrigger(leftContext: string): TriggerMatch | null {
  if (leftContext.length === 0) {
    return null;
  }
  const last = leftContext[leftContext.length - 1];
  let candidate: string;
  if (last === " " || last === "\t") {
    const body = leftContext.slice(0, -1);
    // Keyword triggers fire only after their trailing whitespace is typed.
    for (const kw of KEYWORDS_BY_LENGTH) {
      if (body.endsWith(kw)) {
        const before = body.slice(0, body.length - kw.length);
        if (before.length === 0 || !isIdentChar(before[before.length - 1])) {
          return { token: { text: kw, kind: "keyword" }, endOffset: body.length };
        }
      }
    }
    if (last === "\t") {
      // Only a plain space may sit between a symbol and the cursor.
      return null;
    }
    candidate = body;
  } else {
    candidate = leftContext;
  }
  for (const sym of SYMBOLS_BY_LENGTH) {
    if (candidate.endsWith(sym)) {
      return { token: { text: sym, kind: "symbol" }, endOffset: candidate.length };
    }
  }
  return null;
}

export function isMidToken(leftContext: string): boolean {
  return leftContext.length > 0 && isIdentChar(leftContext[leftContext.length - 1]);
}
