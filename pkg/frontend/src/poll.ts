// Session polling loop: one in-flight request at a time, new questions are
// surfaced once per sequence number, stale answers trigger a refresh.

import type { ApiClient } from "./client.js";
import type { AnswerBody, QuestionPayload, SessionResult, SessionStatus } from "./types.js";

export interface PollHandlers {
  onStatus(status: SessionStatus): void;
  onQuestion(question: QuestionPayload): void;
  onFinished(result: SessionResult): void;
  onAborted(): void;
  onNetworkError(error: unknown): void;
}

type Sleep = (ms: number) => Promise<void>;

const realSleep: Sleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export class SessionPoller {
  private stopped = false;
  private lastSeq: number | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private handlers: PollHandlers,
    private sleep: Sleep = realSleep,
    private longPollSeconds = 10,
  ) {}

  stop(): void {
    this.stopped = true;
  }

  async run(): Promise<void> {
    let backoff = 250;
    while (!this.stopped) {
      try {
        const status = await this.api.getStatus(this.sessionId);
        this.handlers.onStatus(status);
        if (status.state === "finished") {
          this.handlers.onFinished(await this.api.getResult(this.sessionId));
          return;
        }
        if (status.state === "aborted") {
          this.handlers.onAborted();
          return;
        }
        const qr = await this.api.getQuestion(this.sessionId, this.longPollSeconds);
        if (qr.pending && qr.question && qr.question.seq !== this.lastSeq) {
          this.lastSeq = qr.question.seq;
          this.handlers.onQuestion(qr.question);
        }
        backoff = 250;
      } catch (error) {
        this.handlers.onNetworkError(error);
        await this.sleep(backoff);
        backoff = Math.min(4000, backoff * 2);
      }
    }
  }

  /**
   * Post one answer. A duplicate/stale ack resets the question cursor so the
   * next poll re-renders whatever is actually pending (auto-refresh).
   */
  async submit(body: AnswerBody): Promise<"accepted" | "stale"> {
    const ack = await this.api.postAnswer(this.sessionId, body);
    if (ack.status === "accepted") {
      return "accepted";
    }
    this.lastSeq = null;
    return "stale";
  }
}
