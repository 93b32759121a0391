"""The three feedback questions, their answers, and the answer sources.

A provider is anything with ``ask(question) -> answer``: the ground-truth
simulator for batch runs, a scripted provider for tests, or the interactive
mailbox the HTTP service wires to a human.  Every provider audits its own
query counters.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

from .core import TokenSeq, is_subsequence, lcs_length

log = logging.getLogger(__name__)


class QuestionKind(Enum):
    MESSAGE_LOSS = "message_loss"
    DUMMY_TOKEN = "dummy_token"
    SELECT = "select"


class SessionAborted(RuntimeError):
    """An interactive provider's session was cancelled mid-question."""


@dataclass(frozen=True)
class SelectCandidate:
    """One entry of a select question: a pool template with its LCS length."""

    tokens: TokenSeq
    lcs_len: int
    pool_index: int


@dataclass
class Question:
    kind: QuestionKind
    target: TokenSeq
    candidates: tuple[SelectCandidate, ...] = ()
    # Set when the target is a raw log (separation): lets the simulator
    # resolve the ground-truth template by index instead of searching.
    target_log_index: int | None = None
    origin: str = ""
    samples: tuple[str, ...] = ()
    display: str = ""

    def __post_init__(self) -> None:
        if not self.display:
            self.display = " ".join(self.target)


@dataclass(frozen=True)
class Answer:
    kind: QuestionKind
    loss: bool | None = None
    tokens: frozenset[str] | None = None
    index: int | None = None

    @classmethod
    def message_loss(cls, loss: bool) -> "Answer":
        return cls(QuestionKind.MESSAGE_LOSS, loss=loss)

    @classmethod
    def dummy_tokens(cls, tokens: Iterable[str] | None) -> "Answer":
        payload = None if tokens is None else frozenset(tokens)
        return cls(QuestionKind.DUMMY_TOKEN, tokens=payload)

    @classmethod
    def selection(cls, index: int | None) -> "Answer":
        return cls(QuestionKind.SELECT, index=index)


def validate_answer(question: Question, answer: Answer) -> None:
    """Reject answers that do not type-match their question."""
    if answer.kind is not question.kind:
        raise ValueError(f"answer kind {answer.kind} for question {question.kind}")
    if question.kind is QuestionKind.MESSAGE_LOSS:
        if not isinstance(answer.loss, bool):
            raise ValueError("message-loss answer must carry a boolean")
    elif question.kind is QuestionKind.DUMMY_TOKEN:
        if answer.tokens is not None:
            if not answer.tokens:
                raise ValueError("dummy-token answer must name at least one token")
            stray = answer.tokens - set(question.target)
            if stray:
                raise ValueError(f"dummy tokens not in the target: {sorted(stray)}")
    elif question.kind is QuestionKind.SELECT:
        if answer.index is not None and not 0 <= answer.index < len(question.candidates):
            raise ValueError(
                f"selection index {answer.index} out of range "
                f"(have {len(question.candidates)} candidates)"
            )


@dataclass
class FeedbackCounters:
    """Audited query tallies for one run, broken down by question origin."""

    n_message_loss: int = 0
    n_select: int = 0
    n_dummy_token: int = 0
    question_lengths: list[int] = field(default_factory=list)
    selected_ranks: list[int] = field(default_factory=list)
    by_origin: dict[str, dict[str, int]] = field(default_factory=dict)

    def record(self, question: Question, answer: Answer) -> None:
        kind = question.kind
        if kind is QuestionKind.MESSAGE_LOSS:
            self.n_message_loss += 1
        elif kind is QuestionKind.DUMMY_TOKEN:
            self.n_dummy_token += 1
        else:
            self.n_select += 1
            self.question_lengths.append(len(question.candidates))
            if answer.index is not None:
                self.selected_ranks.append(answer.index + 1)
        origin = self.by_origin.setdefault(
            question.origin or "other",
            {"message_loss": 0, "dummy_token": 0, "select": 0},
        )
        origin[kind.value] += 1

    def total(self) -> int:
        return self.n_message_loss + self.n_select + self.n_dummy_token

    def origin_count(self, origin: str, kind: QuestionKind) -> int:
        return self.by_origin.get(origin, {}).get(kind.value, 0)

    def snapshot(self) -> dict:
        return {
            "n_message_loss": self.n_message_loss,
            "n_select": self.n_select,
            "n_dummy_token": self.n_dummy_token,
            "n_total": self.total(),
            "question_lengths": list(self.question_lengths),
            "selected_ranks": list(self.selected_ranks),
            "by_origin": {k: dict(v) for k, v in sorted(self.by_origin.items())},
        }


@dataclass
class GroundTruth:
    """Per-log cluster ids plus one constant-token template per cluster."""

    cluster_of: tuple[int, ...]
    templates: tuple[TokenSeq, ...]

    def __post_init__(self) -> None:
        members: list[set[int]] = [set() for _ in self.templates]
        for n, k in enumerate(self.cluster_of):
            if not 0 <= k < len(self.templates):
                raise ValueError(f"log {n} assigned to unknown cluster {k}")
            members[k].add(n)
        self.members: tuple[frozenset[int], ...] = tuple(frozenset(m) for m in members)

    @property
    def k(self) -> int:
        return len(self.templates)

    @property
    def n_logs(self) -> int:
        return len(self.cluster_of)

    def template_of_log(self, n: int) -> TokenSeq:
        return self.templates[self.cluster_of[n]]

    def matched_template(self, seq: TokenSeq) -> int | None:
        """Cluster id of the longest ground-truth template embedded in seq.

        Ties break toward the smallest cluster id; multiple distinct matches
        are legal but unexpected, so they are logged.
        """
        matches = [k for k, t in enumerate(self.templates) if is_subsequence(t, seq)]
        if not matches:
            return None
        if len(matches) > 1:
            log.warning(
                "sequence embeds %d ground-truth templates (clusters %s); "
                "keeping the longest",
                len(matches),
                matches[:5],
            )
        return max(matches, key=lambda k: (len(self.templates[k]), -k))

    def check_assumptions(self, store=None) -> list[str]:
        """Non-fatal model checks; returns human-readable warnings."""
        problems = []
        for k, t in enumerate(self.templates):
            for j, u in enumerate(self.templates):
                if k != j and is_subsequence(t, u):
                    problems.append(
                        f"template {k} is a subsequence of template {j}"
                    )
        if store is not None:
            for n, k in enumerate(self.cluster_of):
                if not is_subsequence(self.templates[k], store[n]):
                    problems.append(f"template {k} does not embed in log {n}")
        for msg in problems:
            log.warning("ground truth: %s", msg)
        return problems


def build_select_question(
    target: TokenSeq,
    pool: Iterable[TokenSeq],
    *,
    target_log_index: int | None = None,
    origin: str = "",
    samples: tuple[str, ...] = (),
) -> Question:
    """Sorted select question: pool entries by LCS length, zero-overlap dropped.

    The sort is stable, so pool order is preserved among equal lengths.
    """
    entries = [
        SelectCandidate(tokens, lcs_length(target, tokens), i)
        for i, tokens in enumerate(pool)
    ]
    kept = sorted(
        (e for e in entries if e.lcs_len > 0), key=lambda e: -e.lcs_len
    )
    return Question(
        QuestionKind.SELECT,
        target,
        tuple(kept),
        target_log_index=target_log_index,
        origin=origin,
        samples=samples,
    )


def simulate_message_loss(t: TokenSeq, gt: GroundTruth) -> bool:
    """True (loss) iff no ground-truth template is a subsequence of t."""
    return not any(is_subsequence(tmpl, t) for tmpl in gt.templates)


def simulate_dummy_token(t: TokenSeq, gt: GroundTruth) -> Answer:
    """First token of t absent from the matched template; null under loss."""
    k = gt.matched_template(t)
    if k is None:
        return Answer.dummy_tokens(None)
    constant = set(gt.templates[k])
    for tok in t:
        if tok not in constant:
            return Answer.dummy_tokens({tok})
    return Answer.dummy_tokens(None)


def simulate_select(question: Question, gt: GroundTruth) -> Answer:
    """First candidate containing the target's ground-truth template, else null."""
    if question.target_log_index is not None:
        k = gt.cluster_of[question.target_log_index]
    else:
        k = gt.matched_template(question.target)
    if k is None:
        return Answer.selection(None)
    wanted = gt.templates[k]
    for i, cand in enumerate(question.candidates):
        if is_subsequence(wanted, cand.tokens):
            return Answer.selection(i)
    return Answer.selection(None)


class FeedbackProvider:
    """Base provider: validates and counts every answered question."""

    def __init__(self) -> None:
        self.counters = FeedbackCounters()

    def ask(self, question: Question) -> Answer:
        answer = self._answer(question)
        validate_answer(question, answer)
        self.counters.record(question, answer)
        return answer

    def _answer(self, question: Question) -> Answer:
        raise NotImplementedError


class SimulatedFeedback(FeedbackProvider):
    """Ground-truth-backed provider; deliberately weaker than a human under loss."""

    def __init__(self, gt: GroundTruth) -> None:
        super().__init__()
        self.gt = gt

    def _answer(self, question: Question) -> Answer:
        if question.kind is QuestionKind.MESSAGE_LOSS:
            return Answer.message_loss(simulate_message_loss(question.target, self.gt))
        if question.kind is QuestionKind.DUMMY_TOKEN:
            return simulate_dummy_token(question.target, self.gt)
        return simulate_select(question, self.gt)


class ScriptedFeedback(FeedbackProvider):
    """Answers from a canned sequence or a callback; for tests and replays."""

    def __init__(
        self,
        answers: Iterable[Answer] = (),
        fallback: Callable[[Question], Answer] | None = None,
    ) -> None:
        super().__init__()
        self._queue: Iterator[Answer] = iter(answers)
        self._fallback = fallback

    def _answer(self, question: Question) -> Answer:
        try:
            return next(self._queue)
        except StopIteration:
            if self._fallback is None:
                raise AssertionError("scripted feedback ran out of answers")
            return self._fallback(question)
