"""HTTP session API: one refinement run per session, one pending question at
a time, answered by whoever is driving the browser (or a scripted client)."""

from __future__ import annotations

import logging
import os
import threading
import time
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles

from .core import MinedClustering, embed_positions, lcs, render_template
from .corpus import (
    CorpusError,
    CorruptionKnobs,
    baseline_parse,
    generate_synthetic,
    import_clustering,
    load_corpus,
    load_logs,
)
from .feedback import (
    Answer,
    FeedbackProvider,
    Question,
    QuestionKind,
    SessionAborted,
    validate_answer,
)
from .metrics import RefinementReport
from .refine import pipeline

log = logging.getLogger(__name__)

UNTIL_STABLE_CAP = 100


class QuestionMailbox:
    """Single-slot exchange between the pipeline thread and HTTP handlers."""

    def __init__(self) -> None:
        self.cond = threading.Condition()
        self.seq = 0
        self.question: Question | None = None
        self.answer: Answer | None = None
        self.aborted = False
        self.closed = False

    def ask(self, question: Question) -> Answer:
        with self.cond:
            if self.aborted:
                raise SessionAborted("session aborted")
            self.seq += 1
            self.question = question
            self.answer = None
            self.cond.notify_all()
            while self.answer is None and not self.aborted:
                self.cond.wait()
            self.question = None
            if self.answer is None:
                raise SessionAborted("session aborted while awaiting an answer")
            answer, self.answer = self.answer, None
            return answer

    def peek(self, wait_s: float = 0.0) -> tuple[int, Question] | None:
        deadline = time.monotonic() + wait_s
        with self.cond:
            while (
                self.question is None
                and not self.closed
                and not self.aborted
                and (remaining := deadline - time.monotonic()) > 0
            ):
                self.cond.wait(timeout=remaining)
            if self.question is None:
                return None
            return self.seq, self.question

    def submit(self, seq: int, answer: Answer) -> str:
        """Returns "accepted" or "ignored" (duplicate/stale); raises on bad input."""
        with self.cond:
            if seq > self.seq:
                raise KeyError(f"no question with sequence {seq} yet")
            if self.question is None or seq < self.seq:
                return "ignored"
            if self.answer is not None:
                return "ignored"
            validate_answer(self.question, answer)
            self.answer = answer
            self.cond.notify_all()
            return "accepted"

    def abort(self) -> None:
        with self.cond:
            self.aborted = True
            self.cond.notify_all()

    def close(self) -> None:
        with self.cond:
            self.closed = True
            self.cond.notify_all()


class InteractiveFeedback(FeedbackProvider):
    """Provider that parks each question in the session mailbox."""

    def __init__(self, mailbox: QuestionMailbox) -> None:
        super().__init__()
        self.mailbox = mailbox

    def _answer(self, question: Question) -> Answer:
        return self.mailbox.ask(question)


class Session:
    def __init__(self, session_id: str, store, gt, base, n_repeat: int) -> None:
        self.id = session_id
        self.store = store
        self.gt = gt
        self.base = base
        self.n_repeat = n_repeat
        self.mailbox = QuestionMailbox()
        self.provider = InteractiveFeedback(self.mailbox)
        self.progress = {"phase": "starting", "done": 0, "total": len(base.pairs)}
        self.finished = False
        self.aborted = False
        self.error: str | None = None
        self.result: dict | None = None
        self.thread = threading.Thread(target=self._run, daemon=True)

    def start(self) -> None:
        self.thread.start()

    def _on_progress(self, phase: str, done: int, total: int) -> None:
        self.progress = {"phase": phase, "done": done, "total": total}

    def _cluster_view(self, pair) -> dict:
        members = sorted(pair.members)
        samples = [self.store.raw(n) for n in members[:3]]
        try:
            display = render_template(
                pair.template, [self.store[n] for n in members[:3]]
            )
        except ValueError:
            display = " ".join(pair.template)
        return {
            "template": list(pair.template),
            "members": members,
            "display": display,
            "samples": samples,
        }

    def _run(self) -> None:
        try:
            refined = pipeline(
                self.base.copy(),
                self.store,
                self.provider,
                self.n_repeat,
                on_progress=self._on_progress,
            )
            result: dict[str, Any] = {
                "clustering": {
                    "n_logs": refined.n_logs,
                    "clusters": [self._cluster_view(p) for p in refined.pairs],
                },
            }
            if self.gt is not None:
                report = RefinementReport.build(
                    self.base, refined, self.gt, self.provider.counters
                )
                result["report"] = report.to_dict()
            else:
                result["counters"] = self.provider.counters.snapshot()
            self.result = result
            self.finished = True
        except SessionAborted:
            self.aborted = True
        except Exception as exc:  # surfaced through the session state
            log.exception("session %s failed", self.id)
            self.error = f"{type(exc).__name__}: {exc}"
            self.aborted = True
        finally:
            self.mailbox.close()

    def state(self) -> str:
        if self.aborted:
            return "aborted"
        if self.finished:
            return "finished"
        if self.mailbox.peek(0.0) is not None:
            return "awaiting_answer"
        return "running"

    def abort(self) -> None:
        if self.finished or self.aborted:
            return
        self.aborted = True
        self.mailbox.abort()


def _question_payload(seq: int, question: Question) -> dict:
    candidates = []
    for cand in question.candidates:
        overlap_tokens = lcs(question.target, cand.tokens)
        candidates.append(
            {
                "tokens": list(cand.tokens),
                "lcs_len": cand.lcs_len,
                "display": " ".join(cand.tokens),
                "overlap": embed_positions(overlap_tokens, cand.tokens),
            }
        )
    display = question.display
    if question.samples:
        try:
            display = render_template(
                question.target, [tuple(s.split()) for s in question.samples]
            )
        except ValueError:
            pass  # target does not embed in the context lines; keep plain join
    return {
        "seq": seq,
        "kind": question.kind.value,
        "target": list(question.target),
        "target_display": display,
        "target_log_index": question.target_log_index,
        "origin": question.origin,
        "samples": list(question.samples),
        "candidates": candidates,
    }


def _parse_answer(body: dict) -> tuple[int, Answer]:
    try:
        seq = int(body["seq"])
        kind = QuestionKind(body["kind"])
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(400, f"malformed answer: {exc}")
    if kind is QuestionKind.MESSAGE_LOSS:
        loss = body.get("loss")
        if not isinstance(loss, bool):
            raise HTTPException(400, "message_loss answer needs boolean 'loss'")
        return seq, Answer.message_loss(loss)
    if kind is QuestionKind.DUMMY_TOKEN:
        tokens = body.get("tokens")
        if tokens is not None and (
            not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens)
        ):
            raise HTTPException(400, "dummy_token answer needs 'tokens': [str] or null")
        return seq, Answer.dummy_tokens(tokens)
    index = body.get("index")
    if index is not None and not isinstance(index, int):
        raise HTTPException(400, "select answer needs integer 'index' or null")
    return seq, Answer.selection(index)


def _build_corpus(spec: dict):
    if "generate" in spec:
        params = spec["generate"]
        return generate_synthetic(
            int(params.get("k", 10)),
            int(params.get("logs_per_cluster", 20)),
            int(params.get("param_slots", 3)),
            seed=int(params.get("seed", 0)),
            shared_params=bool(params.get("shared_params", False)),
        )
    if "logs_path" in spec:
        if "truth_path" in spec:
            return load_corpus(spec["logs_path"], spec["truth_path"])
        return load_logs(spec["logs_path"]), None
    raise CorpusError("corpus spec needs either 'generate' or 'logs_path'")


def _build_base(spec: dict | None, store, seed: int) -> MinedClustering:
    if spec and "import_path" in spec:
        mc = import_clustering(spec["import_path"])
        if mc.n_logs != len(store):
            raise CorpusError(
                f"imported clustering covers {mc.n_logs} logs, corpus has {len(store)}"
            )
        return mc
    knobs = CorruptionKnobs.from_mapping((spec or {}).get("knobs", {}))
    return baseline_parse(store, knobs, seed=int((spec or {}).get("seed", seed)))


def _resolve_repeat(value) -> int:
    if value == "until-stable":
        return UNTIL_STABLE_CAP
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise HTTPException(400, "repeat must be an integer or 'until-stable'")
    if n < 0:
        raise HTTPException(400, "repeat must be >= 0")
    return n


def frontend_dist() -> Path | None:
    override = os.environ.get("LOGREFINE_FRONTEND")
    candidates = [Path(override)] if override else []
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for candidate in candidates:
        if candidate.is_dir() and (candidate / "index.html").exists():
            return candidate
    return None


def create_app() -> FastAPI:
    app = FastAPI(title="logrefine session service")
    sessions: dict[str, Session] = {}
    lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"no session {session_id}")
        return session

    @app.get("/healthz")
    def healthz() -> dict:
        with lock:
            return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions", status_code=201)
    def create_session(body: dict) -> dict:
        corpus_spec = body.get("corpus")
        if not isinstance(corpus_spec, dict):
            raise HTTPException(400, "body needs a 'corpus' object")
        try:
            store, gt = _build_corpus(corpus_spec)
            # Baseline corruption draws from its own stream: corpus seed + 1,
            # the same convention the CLI uses.
            corpus_seed = int(corpus_spec.get("generate", {}).get("seed", 0))
            base = _build_base(body.get("base"), store, corpus_seed + 1)
        except CorpusError as exc:
            raise HTTPException(400, str(exc))
        n_repeat = _resolve_repeat(body.get("repeat", 0))
        session = Session(uuid.uuid4().hex, store, gt, base, n_repeat)
        with lock:
            sessions[session.id] = session
        session.start()
        return {"id": session.id, "state": session.state()}

    @app.get("/sessions/{session_id}")
    def session_status(session_id: str) -> dict:
        session = get_session(session_id)
        return {
            "id": session.id,
            "state": session.state(),
            "progress": session.progress,
            "counters": session.provider.counters.snapshot(),
            "error": session.error,
        }

    @app.get("/sessions/{session_id}/question")
    def session_question(session_id: str, wait: float = 0.0) -> dict:
        session = get_session(session_id)
        pending = session.mailbox.peek(min(wait, 30.0))
        if pending is None:
            return {"pending": False, "state": session.state()}
        seq, question = pending
        return {
            "pending": True,
            "state": session.state(),
            "question": _question_payload(seq, question),
        }

    @app.post("/sessions/{session_id}/answer")
    def session_answer(session_id: str, body: dict) -> dict:
        session = get_session(session_id)
        seq, answer = _parse_answer(body)
        try:
            status = session.mailbox.submit(seq, answer)
        except KeyError as exc:
            raise HTTPException(409, str(exc))
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return {"status": status, "state": session.state()}

    @app.post("/sessions/{session_id}/abort")
    def session_abort(session_id: str) -> dict:
        session = get_session(session_id)
        session.abort()
        return {"id": session.id, "state": session.state()}

    @app.get("/sessions/{session_id}/result")
    def session_result(session_id: str) -> dict:
        session = get_session(session_id)
        if session.result is None:
            raise HTTPException(
                409, f"session is {session.state()}; no result available"
            )
        return session.result

    dist = frontend_dist()
    if dist is not None:
        app.mount("/ui", StaticFiles(directory=dist, html=True), name="ui")

        @app.get("/")
        def root() -> RedirectResponse:
            return RedirectResponse("/ui/")

    return app


app = create_app()
