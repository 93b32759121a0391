// Answer builders. Forms go through these, so every submitted payload is
// kind-valid by construction.

import type { AnswerBody } from "./types.js";

export function messageLossAnswer(seq: number, loss: boolean): AnswerBody {
  return { seq, kind: "message_loss", loss };
}

export function dummyTokenAnswer(
  seq: number,
  target: string[],
  selectedIndices: number[],
): AnswerBody {
  if (selectedIndices.length === 0) {
    throw new Error("select at least one token");
  }
  const tokens: string[] = [];
  for (const i of selectedIndices) {
    const tok = target[i];
    if (tok === undefined) {
      throw new Error(`token index ${i} outside the target`);
    }
    if (!tokens.includes(tok)) {
      tokens.push(tok);
    }
  }
  return { seq, kind: "dummy_token", tokens };
}

export function cannotIdentifyAnswer(seq: number): AnswerBody {
  return { seq, kind: "dummy_token", tokens: null };
}

export function selectAnswer(seq: number, index: number, candidateCount: number): AnswerBody {
  if (!Number.isInteger(index) || index < 0 || index >= candidateCount) {
    throw new Error(`candidate index ${index} out of range`);
  }
  return { seq, kind: "select", index };
}

export function noneOfTheseAnswer(seq: number): AnswerBody {
  return { seq, kind: "select", index: null };
}
