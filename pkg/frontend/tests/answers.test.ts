import { describe, expect, it } from "vitest";

import {
  cannotIdentifyAnswer,
  dummyTokenAnswer,
  messageLossAnswer,
  noneOfTheseAnswer,
  selectAnswer,
} from "../src/answers.js";

describe("answer builders are kind-valid by construction", () => {
  it("message loss carries a boolean", () => {
    expect(messageLossAnswer(3, true)).toEqual({
      seq: 3,
      kind: "message_loss",
      loss: true,
    });
  });

  it("dummy tokens map indices to target tokens, deduplicated", () => {
    const body = dummyTokenAnswer(7, ["a", "b", "a"], [0, 2, 1]);
    expect(body).toEqual({ seq: 7, kind: "dummy_token", tokens: ["a", "b"] });
  });

  it("dummy submission without a selection is impossible", () => {
    expect(() => dummyTokenAnswer(1, ["a"], [])).toThrow(/at least one/);
  });

  it("dummy indices outside the target are rejected", () => {
    expect(() => dummyTokenAnswer(1, ["a"], [4])).toThrow(/outside/);
  });

  it("cannot-identify sends a null token set", () => {
    expect(cannotIdentifyAnswer(2)).toEqual({
      seq: 2,
      kind: "dummy_token",
      tokens: null,
    });
  });

  it("select index must be inside the candidate list", () => {
    expect(selectAnswer(4, 1, 3)).toEqual({ seq: 4, kind: "select", index: 1 });
    expect(() => selectAnswer(4, 3, 3)).toThrow(/out of range/);
    expect(() => selectAnswer(4, -1, 3)).toThrow(/out of range/);
    expect(() => selectAnswer(4, 0.5, 3)).toThrow(/out of range/);
  });

  it("none-of-these sends a null index", () => {
    expect(noneOfTheseAnswer(9)).toEqual({ seq: 9, kind: "select", index: null });
  });
});
