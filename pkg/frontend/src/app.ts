// DOM glue: a dashboard pane (create form, session list, progress, result)
// and a question pane driven by the poller.

import {
  cannotIdentifyAnswer,
  dummyTokenAnswer,
  messageLossAnswer,
  noneOfTheseAnswer,
  selectAnswer,
} from "./answers.js";
import { HttpClient } from "./client.js";
import { SessionPoller } from "./poll.js";
import {
  renderBanner,
  renderQuestion,
  renderResult,
  renderSessionList,
  renderStatus,
} from "./render.js";
import type { AnswerBody, CreateSessionBody, QuestionPayload, SessionStatus } from "./types.js";

const api = new HttpClient("");

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
};

let poller: SessionPoller | null = null;
let currentQuestion: QuestionPayload | null = null;
let selectedTokens = new Set<number>();
let activeSession: string | null = null;
const knownSessions = new Map<string, SessionStatus>();

function redrawSessions(): void {
  el("sessions").innerHTML = renderSessionList([...knownSessions.values()]);
}

function redrawQuestion(): void {
  el("question").innerHTML = currentQuestion
    ? renderQuestion(currentQuestion, selectedTokens)
    : `<p class="empty">No question pending.</p>`;
}

function showBanner(message: string): void {
  el("banner").innerHTML = renderBanner(message);
}

function clearBanner(): void {
  el("banner").innerHTML = "";
}

async function submitAnswer(body: AnswerBody): Promise<void> {
  if (!poller) return;
  try {
    const outcome = await poller.submit(body);
    if (outcome === "accepted") {
      currentQuestion = null;
      selectedTokens = new Set();
      redrawQuestion();
      clearBanner();
    }
    // "stale": the poller re-fetches and re-renders on its next tick.
  } catch (error) {
    showBanner(`answer failed: ${String(error)}`);
  }
}

function attachToSession(id: string): void {
  poller?.stop();
  activeSession = id;
  currentQuestion = null;
  selectedTokens = new Set();
  redrawQuestion();
  el("result").innerHTML = "";
  poller = new SessionPoller(api, id, {
    onStatus: (status) => {
      knownSessions.set(id, status);
      el("status").innerHTML = renderStatus(status);
      redrawSessions();
    },
    onQuestion: (question) => {
      currentQuestion = question;
      selectedTokens = new Set();
      redrawQuestion();
    },
    onFinished: (result) => {
      currentQuestion = null;
      redrawQuestion();
      el("result").innerHTML = renderResult(result);
    },
    onAborted: () => {
      currentQuestion = null;
      redrawQuestion();
      showBanner("session aborted");
    },
    onNetworkError: (error) => showBanner(`network trouble: ${String(error)}`),
  });
  void poller.run();
}

function readCreateForm(): CreateSessionBody {
  const num = (id: string, fallback: number) => {
    const value = Number((el(id) as HTMLInputElement).value);
    return Number.isFinite(value) && value > 0 ? value : fallback;
  };
  const knob = (id: string) => {
    const value = Number((el(id) as HTMLInputElement).value);
    return Number.isFinite(value) && value >= 0 ? value : 0;
  };
  const repeatRaw = (el("repeat") as HTMLInputElement).value.trim();
  return {
    corpus: {
      generate: {
        k: num("gen-k", 10),
        logs_per_cluster: num("gen-logs", 20),
        param_slots: num("gen-slots", 3),
        seed: num("gen-seed", 1),
      },
    },
    base: {
      knobs: {
        split_p: knob("knob-split"),
        merge_p: knob("knob-merge"),
        truncate_p: knob("knob-truncate"),
      },
    },
    repeat: repeatRaw === "until-stable" ? "until-stable" : Number(repeatRaw) || 0,
  };
}

async function createSession(): Promise<void> {
  try {
    const { id } = await api.createSession(readCreateForm());
    attachToSession(id);
    clearBanner();
  } catch (error) {
    showBanner(`could not create session: ${String(error)}`);
  }
}

function onQuestionAction(action: string, target: HTMLElement): void {
  const q = currentQuestion;
  if (!q) return;
  switch (action) {
    case "loss":
      void submitAnswer(messageLossAnswer(q.seq, target.dataset.loss === "true"));
      break;
    case "toggle-token": {
      const index = Number(target.dataset.token);
      if (selectedTokens.has(index)) selectedTokens.delete(index);
      else selectedTokens.add(index);
      redrawQuestion();
      break;
    }
    case "submit-tokens":
      void submitAnswer(dummyTokenAnswer(q.seq, q.target, [...selectedTokens]));
      break;
    case "no-dummy":
      void submitAnswer(cannotIdentifyAnswer(q.seq));
      break;
    case "pick":
      void submitAnswer(
        selectAnswer(q.seq, Number(target.dataset.candidate), q.candidates.length),
      );
      break;
    case "none":
      void submitAnswer(noneOfTheseAnswer(q.seq));
      break;
  }
}

export function bootstrap(): void {
  el("create").addEventListener("click", () => void createSession());
  el("abort").addEventListener("click", () => {
    if (activeSession) void api.abort(activeSession);
  });
  document.body.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action ?? "";
    if (action === "retry") {
      clearBanner();
      return;
    }
    if (action === "open-session") {
      const id = target.dataset.session;
      if (id) attachToSession(id);
      return;
    }
    onQuestionAction(action, target);
  });
  redrawSessions();
  redrawQuestion();
}

bootstrap();
