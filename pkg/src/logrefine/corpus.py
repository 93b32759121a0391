"""Corpus ingestion, interchange files, a deliberately fallible baseline
miner, and the synthetic generator used by the property suites."""

from __future__ import annotations

import csv
import json
import logging
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import (
    WILDCARD,
    ClusterTemplatePair,
    LogStore,
    MinedClustering,
    TokenSeq,
    lcs,
    tokenize,
)
from .feedback import GroundTruth

log = logging.getLogger(__name__)

GROUND_TRUTH_COLUMNS = ("LineId", "EventId", "EventTemplate")


class CorpusError(ValueError):
    """A corpus or interchange file is malformed or inconsistent."""


def canonicalize_template(raw: str) -> TokenSeq:
    """Tokenize a ground-truth template, dropping ``<*>`` gap markers.

    Wildcards denote gaps, not tokens; consecutive markers collapse for free
    because each marker token is simply removed.
    """
    return tuple(tok for tok in raw.split() if tok != WILDCARD)


def load_logs(raw_log_path) -> LogStore:
    """Read one-log-per-line text with no ground truth; empty lines skipped."""
    raw_path = Path(raw_log_path)
    if not raw_path.exists():
        raise CorpusError(f"log file not found: {raw_path}")
    logs: list[TokenSeq] = []
    raws: list[str] = []
    with raw_path.open(encoding="utf-8", errors="replace") as fh:
        for line in fh.read().splitlines():
            tokens = tokenize(line)
            if tokens:
                logs.append(tokens)
                raws.append(line)
    return LogStore(tuple(logs), tuple(raws))


def load_corpus(raw_log_path, ground_truth_path) -> tuple[LogStore, GroundTruth]:
    """Read one-log-per-line text plus LineId,EventId,EventTemplate truth.

    Empty log lines are skipped; LineId (1-based) keeps the mapping between
    the two files stable.  Assumption violations in the ground truth are
    logged, not fatal; structural problems raise CorpusError.
    """
    raw_path = Path(raw_log_path)
    truth_path = Path(ground_truth_path)
    if not raw_path.exists():
        raise CorpusError(f"log file not found: {raw_path}")
    if not truth_path.exists():
        raise CorpusError(f"ground-truth file not found: {truth_path}")

    logs: list[TokenSeq] = []
    raws: list[str] = []
    index_of_line: dict[int, int] = {}
    total_lines = 0
    with raw_path.open(encoding="utf-8", errors="replace") as fh:
        for line_id, line in enumerate(fh.read().splitlines(), start=1):
            total_lines = line_id
            tokens = tokenize(line)
            if not tokens:
                continue
            index_of_line[line_id] = len(logs)
            logs.append(tokens)
            raws.append(line)

    with truth_path.open(encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CorpusError(f"empty ground-truth file: {truth_path}")
        missing = [c for c in GROUND_TRUTH_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise CorpusError(f"ground truth missing columns: {missing}")
        rows = list(reader)
    if not rows:
        raise CorpusError(f"ground-truth file has no rows: {truth_path}")

    cluster_ids: dict[str, int] = {}
    templates: list[TokenSeq] = []
    cluster_of: list[int | None] = [None] * len(logs)
    for row in rows:
        try:
            line_id = int(row["LineId"])
        except (TypeError, ValueError):
            raise CorpusError(f"malformed LineId in row: {row}")
        n = index_of_line.get(line_id)
        if n is None:
            if 1 <= line_id <= total_lines:
                continue  # row for a skipped empty line
            raise CorpusError(
                f"ground-truth LineId {line_id} outside the log file "
                f"(1..{total_lines}): row count mismatch"
            )
        event = row["EventId"]
        if event is None or row["EventTemplate"] is None:
            raise CorpusError(f"malformed ground-truth row: {row}")
        k = cluster_ids.setdefault(event, len(cluster_ids))
        if k == len(templates):
            templates.append(canonicalize_template(row["EventTemplate"]))
        cluster_of[n] = k

    unassigned = [n for n, k in enumerate(cluster_of) if k is None]
    if unassigned:
        raise CorpusError(
            f"ground truth covers {len(logs) - len(unassigned)} of {len(logs)} "
            f"logs; first uncovered indices: {unassigned[:10]}"
        )

    store = LogStore(tuple(logs), tuple(raws))
    gt = GroundTruth(tuple(cluster_of), tuple(templates))  # type: ignore[arg-type]
    gt.check_assumptions(store)
    return store, gt


@dataclass(frozen=True)
class CorruptionKnobs:
    """Seeded error injectors for the baseline miner.

    split_p breaks a bucket into two random halves (partial clusters),
    merge_p fuses random bucket pairs (mixed clusters), truncate_p drops a
    template's last token (message loss).
    """

    split_p: float = 0.0
    merge_p: float = 0.0
    truncate_p: float = 0.0

    @classmethod
    def from_mapping(cls, mapping: dict) -> "CorruptionKnobs":
        known = {"split_p", "merge_p", "truncate_p"}
        unknown = set(mapping) - known
        if unknown:
            raise CorpusError(f"unknown knobs: {sorted(unknown)}; known: {sorted(known)}")
        return cls(**{k: float(v) for k, v in mapping.items()})


def _positionwise_template(store: LogStore, members: list[int]) -> TokenSeq:
    first = store[members[0]]
    if len(members) == 1:
        return first
    rest = [store[m] for m in members[1:]]
    return tuple(
        tok for i, tok in enumerate(first) if all(other[i] == tok for other in rest)
    )


def baseline_parse(
    store: LogStore, knobs: CorruptionKnobs | None = None, seed: int = 0
) -> MinedClustering:
    """Bucket logs by (token count, first token); template = agreeing positions.

    Deterministic for a given store and seed.  The knobs then inject the
    three error classes on demand.
    """
    if len(store) == 0:
        raise CorpusError("cannot parse an empty log store")
    knobs = knobs or CorruptionKnobs()
    buckets: dict[tuple[int, str], list[int]] = {}
    for n, tokens in enumerate(store):
        buckets.setdefault((len(tokens), tokens[0] if tokens else ""), []).append(n)

    clusters = [
        (members, _positionwise_template(store, members))
        for members in buckets.values()
    ]

    rng = random.Random(seed)
    if knobs.split_p > 0:
        split: list[tuple[list[int], TokenSeq]] = []
        for members, template in clusters:
            if len(members) >= 2 and rng.random() < knobs.split_p:
                shuffled = members[:]
                rng.shuffle(shuffled)
                cut = rng.randint(1, len(shuffled) - 1)
                for half in (sorted(shuffled[:cut]), sorted(shuffled[cut:])):
                    split.append((half, _positionwise_template(store, half)))
            else:
                split.append((members, template))
        clusters = split

    if knobs.merge_p > 0 and len(clusters) >= 2:
        marked = [i for i in range(len(clusters)) if rng.random() < knobs.merge_p]
        rng.shuffle(marked)
        fused: dict[int, tuple[list[int], TokenSeq]] = {}
        consumed: set[int] = set()
        for a, b in zip(marked[::2], marked[1::2]):
            ma, ta = clusters[a]
            mb, tb = clusters[b]
            fused[a] = (sorted(ma + mb), lcs(ta, tb))
            consumed.add(b)
        clusters = [
            fused.get(i, c) for i, c in enumerate(clusters) if i not in consumed
        ]

    if knobs.truncate_p > 0:
        clusters = [
            (m, t[:-1] if t and rng.random() < knobs.truncate_p else t)
            for m, t in clusters
        ]

    pairs = [ClusterTemplatePair(set(m), t) for m, t in clusters]
    return MinedClustering(pairs, len(store)).validate()


def export_clustering(mc: MinedClustering, path) -> None:
    doc = {
        "n_logs": mc.n_logs,
        "clusters": [
            {"template": list(p.template), "members": sorted(p.members)}
            for p in mc.pairs
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def import_clustering(path) -> MinedClustering:
    p = Path(path)
    if not p.exists():
        raise CorpusError(f"clustering file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid clustering JSON in {p}: {exc}") from exc
    try:
        pairs = [
            ClusterTemplatePair(set(c["members"]), tuple(c["template"]))
            for c in doc["clusters"]
        ]
        mc = MinedClustering(pairs, int(doc["n_logs"]))
    except (KeyError, TypeError) as exc:
        raise CorpusError(f"clustering file {p} missing fields: {exc}") from exc
    return mc.validate()


_VOCAB = (
    "server connection failed error request session port user node link "
    "timeout retry closed opened disk block write read cache auth state "
    "handler worker queue commit packet route"
).split()


def generate_synthetic(
    k: int,
    logs_per_cluster: int,
    param_slots: int,
    seed: int = 0,
    *,
    shared_params: bool = False,
    store_raw: bool = True,
) -> tuple[LogStore, GroundTruth]:
    """Synthetic corpus engineered so the no-collision condition holds.

    Every template carries a unique keyword (no template embeds in another
    cluster's material) and every parameter token is globally fresh, so the
    LCS of any two same-cluster logs is exactly the template.  With
    ``shared_params`` each cluster re-uses one parameter token across all of
    its logs, deliberately breaking that guarantee.
    """
    if k < 1:
        raise ValueError("need at least one cluster")
    rng = random.Random(seed)
    intern = sys.intern
    # Templates are drawn before any log material so they depend only on
    # (k, param_slots, seed), never on logs_per_cluster.
    templates: list[TokenSeq] = []
    for kk in range(k):
        length = rng.randint(4, 9)
        body = [intern(rng.choice(_VOCAB)) for _ in range(length)]
        body.insert(rng.randint(0, length), intern(f"evt{kk:04d}"))
        templates.append(tuple(body))

    logs: list[TokenSeq] = []
    raws: list[str] | None = [] if store_raw else None
    cluster_of: list[int] = []
    fresh = 0
    for kk in range(k):
        template = templates[kk]
        shared = intern(f"shared{kk:04d}") if shared_params else None
        for _ in range(logs_per_cluster):
            tokens = list(template)
            for _ in range(param_slots):
                fresh += 1
                tokens.insert(rng.randint(0, len(tokens)), f"v{fresh}")
            if shared is not None:
                tokens.insert(rng.randint(0, len(tokens)), shared)
            logs.append(tuple(tokens))
            cluster_of.append(kk)
            if raws is not None:
                raws.append(" ".join(tokens))

    store = LogStore(tuple(logs), tuple(raws) if raws is not None else None)
    return store, GroundTruth(tuple(cluster_of), tuple(templates))
