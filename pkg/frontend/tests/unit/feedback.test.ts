import { describe, expect, it } from "vitest";

import type { ApiClient } from "../../src/api.js";
import { FeedbackForm } from "../../src/feedback.js";

function form() {
  const submitted: unknown[] = [];
  const api = {
    submitFeedback: async (payload: unknown) => {
      submitted.push(payload);
      return { status: "stored" };
    },
  };
  return { form: new FeedbackForm(api as unknown as ApiClient), submitted };
}

describe("feedback form", () => {
  it("rating widget rejects 0 and 6 and keeps the previous value", () => {
    const { form: f } = form();
    expect(f.setRating(4)).toBe(true);
    expect(f.setRating(0)).toBe(false);
    expect(f.setRating(6)).toBe(false);
    expect(f.setRating(2.5)).toBe(false);
    expect(f.draft.q4_rating).toBe(4);
  });

  it("unanswered required fields block submission", () => {
    const { form: f } = form();
    expect(f.canSubmit()).toBe(false);
    expect(f.missingFields()).toEqual(["question 1", "question 2", "question 3", "rating"]);
    f.setAnswer("q1_learned", true);
    f.setAnswer("q2_will_change", false);
    expect(f.missingFields()).toEqual(["question 3", "rating"]);
    expect(() => f.buildPayload("p")).toThrow(/unanswered/);
    f.setAnswer("q3_can_act", true);
    f.setRating(5);
    expect(f.canSubmit()).toBe(true);
  });

  it("builds the record the API expects", async () => {
    const { form: f, submitted } = form();
    f.setAnswer("q1_learned", true);
    f.setText("q1_text", "learned about street-level differences");
    f.setAnswer("q2_will_change", true);
    f.setAnswer("q3_can_act", false);
    f.setRating(5);
    await f.submit("parent-1");
    const payload = submitted[0] as Record<string, unknown>;
    expect(payload.participant_id).toBe("parent-1");
    expect(payload.q1_learned).toBe(true);
    expect(payload.q1_text).toContain("street-level");
    expect(payload.q4_rating).toBe(5);
    expect(typeof payload.timestamp).toBe("string");
  });
});
