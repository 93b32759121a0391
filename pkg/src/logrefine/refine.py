"""The four feedback-driven refinement passes and their combination.

Every pass streams over its input exactly once; iteration order is always
ascending log index / input list order so runs are reproducible.  All four
consume a FeedbackProvider, which may be the simulator, a scripted provider,
or a live human session.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .core import (
    ClusterTemplatePair,
    LogStore,
    MinedClustering,
    TokenSeq,
    is_subsequence,
    lcs,
    trim_tokens,
)
from .feedback import (
    Answer,
    FeedbackProvider,
    Question,
    QuestionKind,
    build_select_question,
)

# Progress callback: (phase, done, total).
ProgressFn = Callable[[str, int, int], None]


def _member_samples(logs: LogStore, members: Iterable[int], limit: int = 3):
    return tuple(logs.raw(n) for n in sorted(members)[:limit])


def message_completion(
    cluster: ClusterTemplatePair,
    logs: LogStore,
    fb: FeedbackProvider | None = None,
    *,
    lossless_fallback: bool = False,
) -> TokenSeq:
    """Stream the cluster's logs once, folding them into a common subsequence.

    Starts from the lowest-index member, keeps the running sequence whenever
    it already embeds in the next log, otherwise replaces it with their LCS.
    If the running sequence ever stops covering the mined template, the mined
    template is returned unchanged (early termination).  The optional
    fallback reconciles such a failing step through trim-and-retry feedback
    instead of giving up; it is off by default and the main loop never asks a
    question.
    """
    members = sorted(cluster.members)
    if not members:
        raise ValueError("message completion needs a non-empty cluster")
    current = logs[members[0]]
    for n in members[1:]:
        entry = logs[n]
        if is_subsequence(current, entry):
            continue
        merged = lcs(current, entry)
        if not is_subsequence(cluster.template, merged):
            if lossless_fallback and fb is not None:
                merged = lossless_template(current, entry, fb, origin="completion")
            if not is_subsequence(cluster.template, merged):
                return cluster.template
        current = merged
    return current


def lossless_template(
    a: TokenSeq,
    b: TokenSeq,
    fb: FeedbackProvider,
    *,
    origin: str = "lossless",
) -> TokenSeq:
    """Common subsequence of a and b without message loss, per feedback.

    While the provider reports loss on the current LCS, dummy tokens are
    trimmed from both inputs and the LCS recomputed.  A null dummy answer
    (a provider that cannot identify one) returns the current result as is.
    Terminates within min(len(a), len(b)) rounds: every completed round
    removes at least one token from each side.
    """
    samples = (" ".join(a), " ".join(b))
    current = lcs(a, b)
    while a and b:
        loss = fb.ask(
            Question(QuestionKind.MESSAGE_LOSS, current, origin=origin, samples=samples)
        )
        if not loss.loss:
            break
        dummy = fb.ask(
            Question(QuestionKind.DUMMY_TOKEN, current, origin=origin, samples=samples)
        )
        if dummy.tokens is None:
            break
        a = trim_tokens(a, dummy.tokens)
        b = trim_tokens(b, dummy.tokens)
        current = lcs(a, b)
    return current


def merge(
    pairs: Sequence[ClusterTemplatePair],
    logs: LogStore,
    fb: FeedbackProvider,
    *,
    on_progress: ProgressFn | None = None,
) -> tuple[list[ClusterTemplatePair], list[ClusterTemplatePair]]:
    """Split pairs into (message-loss, message-complete), fusing duplicates.

    Streaming over the input order: a pair whose template already contains
    an established complete template is absorbed silently; otherwise one
    message-loss question routes it, and a select question (over the current
    complete templates) decides whether it founds a new entry or merges into
    an existing one through lossless_template.
    """
    loss: list[ClusterTemplatePair] = []
    complete: list[ClusterTemplatePair] = []
    total = len(pairs)
    for done, pair in enumerate(pairs, start=1):
        template, members = pair.template, set(pair.members)
        incumbent = next(
            (p for p in complete if is_subsequence(p.template, template)), None
        )
        if incumbent is not None:
            incumbent.members |= members
        else:
            samples = _member_samples(logs, members)
            asked = fb.ask(
                Question(
                    QuestionKind.MESSAGE_LOSS, template, origin="merge", samples=samples
                )
            )
            if asked.loss:
                loss.append(ClusterTemplatePair(members, template))
            else:
                question = build_select_question(
                    template,
                    [p.template for p in complete],
                    origin="merge",
                    samples=samples,
                )
                # An empty candidate list forces a null answer; no question
                # is spent on it.
                chosen = fb.ask(question) if question.candidates else Answer.selection(None)
                if chosen.index is None:
                    complete.append(ClusterTemplatePair(members, template))
                else:
                    target = complete[question.candidates[chosen.index].pool_index]
                    target.template = lossless_template(target.template, template, fb)
                    target.members |= members
        if on_progress is not None:
            on_progress("merge", done, total)
    return loss, complete


def separation(
    cluster: Iterable[int],
    logs: LogStore,
    fb: FeedbackProvider,
    *,
    on_progress: ProgressFn | None = None,
) -> list[ClusterTemplatePair]:
    """Split one (possibly mixed) cluster into pure, message-complete pairs.

    Logs stream in ascending index order.  A log matching an established
    template joins it silently; otherwise the select question either merges
    it into a chosen pair (template refreshed via lossless_template) or
    founds a new singleton pair whose template is the log itself.
    """
    ordered = sorted(cluster)
    if not ordered:
        raise ValueError("separation needs a non-empty cluster")
    out: list[ClusterTemplatePair] = []
    total = len(ordered)
    for done, n in enumerate(ordered, start=1):
        entry = logs[n]
        match = next((p for p in out if is_subsequence(p.template, entry)), None)
        if match is not None:
            match.members.add(n)
        else:
            question = build_select_question(
                entry,
                [p.template for p in out],
                target_log_index=n,
                origin="separation",
                samples=(logs.raw(n),),
            )
            chosen = fb.ask(question) if question.candidates else Answer.selection(None)
            if chosen.index is None:
                out.append(ClusterTemplatePair({n}, entry))
            else:
                target = out[question.candidates[chosen.index].pool_index]
                target.template = lossless_template(target.template, entry, fb)
                target.members.add(n)
        if on_progress is not None:
            on_progress("separation", done, total)
    return out


def pipeline(
    base: MinedClustering,
    logs: LogStore,
    fb: FeedbackProvider,
    n_repeat: int = 0,
    *,
    lossless_fallback: bool = False,
    on_progress: ProgressFn | None = None,
) -> MinedClustering:
    """Completion, then merge/separation rounds until clean or out of budget.

    n_repeat = 0 runs exactly one merge round (plus separation of its loss
    set); each extra unit of budget allows one more round.  The output is
    re-validated: any full/disjoint violation indicates an inconsistent
    provider and raises.
    """
    base.validate()
    working: list[ClusterTemplatePair] = []
    total = len(base.pairs)
    for done, pair in enumerate(base.pairs, start=1):
        completed = message_completion(
            pair, logs, fb, lossless_fallback=lossless_fallback
        )
        working.append(ClusterTemplatePair(set(pair.members), completed))
        if on_progress is not None:
            on_progress("completion", done, total)
    budget = n_repeat
    while True:
        loss, complete = merge(working, logs, fb, on_progress=on_progress)
        if not loss:
            working = complete
            break
        for pair in loss:
            complete.extend(separation(pair.members, logs, fb, on_progress=on_progress))
        working = complete
        budget -= 1
        if budget < 0:
            break
    return MinedClustering(working, base.n_logs).validate()
