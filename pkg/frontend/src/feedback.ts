import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { FeedbackPayload } from "./types.js";

export interface FeedbackDraft {
  q1_learned: boolean | null;
  q1_text: string;
  q2_will_change: boolean | null;
  q2_text: string;
  q3_can_act: boolean | null;
  q3_text: string;
  q4_rating: number | null;
}

export const RATING_MIN = 1;
export const RATING_MAX = 5;

/** The four-question feedback form: three yes/no questions with free text
 *  and a 1-5 rating. Required answers block submission; the rating widget
 *  refuses values outside the scale. */
export class FeedbackForm {
  readonly draft: FeedbackDraft = {
    q1_learned: null,
    q1_text: "",
    q2_will_change: null,
    q2_text: "",
    q3_can_act: null,
    q3_text: "",
    q4_rating: null,
  };
  onStatus: (message: string, isError: boolean) => void = () => {};

  constructor(private readonly api: ApiClient) {}

  setAnswer(question: "q1_learned" | "q2_will_change" | "q3_can_act", value: boolean): void {
    this.draft[question] = value;
  }

  setText(question: "q1_text" | "q2_text" | "q3_text", value: string): void {
    this.draft[question] = value;
  }

  /** Returns false (and reports) for ratings outside the 1..5 scale. */
  setRating(value: number): boolean {
    if (!Number.isInteger(value) || value < RATING_MIN || value > RATING_MAX) {
      this.onStatus(`rating must be between ${RATING_MIN} and ${RATING_MAX}`, true);
      return false;
    }
    this.draft.q4_rating = value;
    return true;
  }

  /** Labels of the required answers still missing. */
  missingFields(): string[] {
    const missing: string[] = [];
    if (this.draft.q1_learned === null) missing.push("question 1");
    if (this.draft.q2_will_change === null) missing.push("question 2");
    if (this.draft.q3_can_act === null) missing.push("question 3");
    if (this.draft.q4_rating === null) missing.push("rating");
    return missing;
  }

  canSubmit(): boolean {
    return this.missingFields().length === 0;
  }

  buildPayload(participantId: string): FeedbackPayload {
    const missing = this.missingFields();
    if (missing.length) throw new Error(`unanswered: ${missing.join(", ")}`);
    return {
      participant_id: participantId,
      q1_learned: this.draft.q1_learned!,
      q1_text: this.draft.q1_text,
      q2_will_change: this.draft.q2_will_change!,
      q2_text: this.draft.q2_text,
      q3_can_act: this.draft.q3_can_act!,
      q3_text: this.draft.q3_text,
      q4_rating: this.draft.q4_rating!,
      timestamp: new Date().toISOString(),
    };
  }

  async submit(participantId: string): Promise<void> {
    const payload = this.buildPayload(participantId);
    try {
      await this.api.submitFeedback(payload);
      this.onStatus("feedback stored, thank you", false);
    } catch (err) {
      if (err instanceof ApiError) this.onStatus(err.detail, true);
      throw err;
    }
  }
}
