"""Ground-truth-referenced evaluation: accuracy metrics, the error census,
and the query-complexity statistics blocks."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import ClusterTemplatePair, LogStore, MinedClustering, is_subsequence
from .feedback import FeedbackCounters, GroundTruth

log = logging.getLogger(__name__)

PURE, MIXED = "pure", "mixed"
FULL, PARTIAL = "full", "partial"
COMPLETE, LOSS = "complete", "loss"

ERROR_CLASSES = ("correct", "loss-pure", "complete-partial", "loss-mixed", "complete-mixed")


@dataclass(frozen=True)
class PairDiagnosis:
    """Purity, fullness (pure clusters only), and message completeness."""

    purity: str
    fullness: str | None
    completeness: str
    matched_gt_cluster: int | None

    @property
    def error_class(self) -> str:
        if self.purity == PURE:
            if self.completeness == LOSS:
                return "loss-pure"
            if self.fullness == PARTIAL:
                return "complete-partial"
            return "correct"
        # A complete-mixed pair breaks the mixed-implies-loss expectation;
        # it stays countable so the census always partitions the pairs.
        return "loss-mixed" if self.completeness == LOSS else "complete-mixed"


def diagnose(pair: ClusterTemplatePair, gt: GroundTruth) -> PairDiagnosis:
    if not pair.members:
        raise ValueError("cannot diagnose an empty cluster")
    bad = [n for n in pair.members if not 0 <= n < gt.n_logs]
    if bad:
        raise ValueError(f"unknown log indices: {sorted(bad)[:10]}")
    owners = {gt.cluster_of[n] for n in pair.members}
    matched = gt.matched_template(pair.template)
    completeness = COMPLETE if matched is not None else LOSS
    if len(owners) > 1:
        return PairDiagnosis(MIXED, None, completeness, matched)
    owner = owners.pop()
    fullness = FULL if pair.members == set(gt.members[owner]) else PARTIAL
    return PairDiagnosis(PURE, fullness, completeness, matched)


def group_accuracy(mc: MinedClustering, gt: GroundTruth) -> float:
    """Fraction of logs whose mined cluster equals a ground-truth cluster exactly."""
    if mc.n_logs == 0:
        return 1.0
    truth_sets = set(gt.members)
    hit = sum(
        len(p.members) for p in mc.pairs if frozenset(p.members) in truth_sets
    )
    return hit / mc.n_logs


def message_accuracy(mc: MinedClustering, gt: GroundTruth) -> float:
    """Fraction of logs whose own ground-truth template embeds in their
    cluster's mined template."""
    if mc.n_logs == 0:
        return 1.0
    hit = 0
    for pair in mc.pairs:
        counts: dict[int, int] = {}
        for n in pair.members:
            k = gt.cluster_of[n]
            counts[k] = counts.get(k, 0) + 1
        for k, count in counts.items():
            if is_subsequence(gt.templates[k], pair.template):
                hit += count
    return hit / mc.n_logs


def error_census(pairs: Iterable[ClusterTemplatePair], gt: GroundTruth) -> dict[str, int]:
    census = {name: 0 for name in ERROR_CLASSES}
    for pair in pairs:
        census[diagnose(pair, gt).error_class] += 1
    if census["complete-mixed"]:
        log.warning(
            "%d mixed clusters carry message-complete templates "
            "(mixed normally implies loss)",
            census["complete-mixed"],
        )
    return census


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _question_stats(counters: FeedbackCounters) -> dict:
    return {
        "avg_question_length": _mean(counters.question_lengths),
        "avg_selected_rank": _mean(counters.selected_ranks),
        "n_message_loss": counters.n_message_loss,
        "n_select": counters.n_select,
        "n_dummy_token": counters.n_dummy_token,
        "n_total_feedback": counters.total(),
    }


def complexity_stats(
    pairs: Sequence[ClusterTemplatePair],
    gt: GroundTruth,
    counters: FeedbackCounters,
) -> dict:
    """Merge-shaped statistics row: distinct complete templates, redundancy,
    maximum dummy-token surplus, and the question-list figures."""
    matched = [gt.matched_template(p.template) for p in pairs]
    complete = [(p, k) for p, k in zip(pairs, matched) if k is not None]
    distinct = {k for _, k in complete}
    surplus = [len(p.template) - len(gt.templates[k]) for p, k in complete]
    stats = {
        "n_distinct_templates": len(distinct),
        "redundancy": len(complete) / len(distinct) if distinct else 0.0,
        "d_max_surplus": max(surplus, default=0),
    }
    stats.update(_question_stats(counters))
    return stats


def separation_complexity_stats(
    members: Iterable[int],
    logs: LogStore,
    gt: GroundTruth,
    counters: FeedbackCounters,
) -> dict:
    """Separation-shaped statistics row over one input cluster's logs."""
    members = sorted(members)
    present = {
        k
        for k in range(gt.k)
        if any(is_subsequence(gt.templates[k], logs[n]) for n in members)
    }
    surplus = [len(logs[n]) - len(gt.template_of_log(n)) for n in members]
    stats = {
        "n_templates_present": len(present),
        "redundancy": len(members) / len(present) if present else 0.0,
        "d_max_surplus": max(surplus, default=0),
    }
    stats.update(_question_stats(counters))
    return stats


@dataclass(frozen=True)
class RefinementReport:
    """Before/after accuracy, error census, and feedback accounting for a run."""

    ga_before: float
    ga_after: float
    ma_before: float
    ma_after: float
    census_before: dict
    census_after: dict
    counters: dict
    stats: dict
    n_logs: int
    n_pairs_before: int
    n_pairs_after: int

    VERSION = 1

    @classmethod
    def build(
        cls,
        base: MinedClustering,
        refined: MinedClustering,
        gt: GroundTruth,
        counters: FeedbackCounters,
    ) -> "RefinementReport":
        return cls(
            ga_before=group_accuracy(base, gt),
            ga_after=group_accuracy(refined, gt),
            ma_before=message_accuracy(base, gt),
            ma_after=message_accuracy(refined, gt),
            census_before=error_census(base.pairs, gt),
            census_after=error_census(refined.pairs, gt),
            counters=counters.snapshot(),
            stats=complexity_stats(base.pairs, gt, counters),
            n_logs=base.n_logs,
            n_pairs_before=len(base.pairs),
            n_pairs_after=len(refined.pairs),
        )

    def to_dict(self) -> dict:
        return {
            "version": self.VERSION,
            "ga_before": self.ga_before,
            "ga_after": self.ga_after,
            "ma_before": self.ma_before,
            "ma_after": self.ma_after,
            "census_before": self.census_before,
            "census_after": self.census_after,
            "counters": self.counters,
            "stats": self.stats,
            "n_logs": self.n_logs,
            "n_pairs_before": self.n_pairs_before,
            "n_pairs_after": self.n_pairs_after,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
