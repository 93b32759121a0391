"""Token-sequence primitives and the clustering data model.

Logs and templates are both plain tuples of whitespace-delimited token
strings.  Everything downstream (refinement, metrics, the service) is built
on the four sequence operations defined here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

WILDCARD = "<*>"

# A log line or template: ordered tokens, possibly empty.
TokenSeq = tuple[str, ...]


def tokenize(line: str) -> TokenSeq:
    """Split a raw line on runs of whitespace."""
    return tuple(line.split())


def is_subsequence(a: TokenSeq, b: TokenSeq) -> bool:
    """True iff ``a`` embeds into ``b`` with a strictly increasing index map.

    Greedy left-to-right scan; linear in ``len(b)``.  The empty sequence is a
    subsequence of everything.
    """
    it = iter(b)
    return all(tok in it for tok in a)


def embed_positions(a: TokenSeq, b: TokenSeq) -> list[int]:
    """Greedy leftmost embedding of ``a`` into ``b`` as a position list.

    Raises ValueError when ``a`` is not a subsequence of ``b``.
    """
    positions = []
    j = 0
    n = len(b)
    for tok in a:
        while j < n and b[j] != tok:
            j += 1
        if j == n:
            raise ValueError(f"{a!r} is not a subsequence of {b!r}")
        positions.append(j)
        j += 1
    return positions


def lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    """Length of the longest common subsequence (two-row DP)."""
    if not a or not b:
        return 0
    if a == b:
        return len(a)
    if len(a) < len(b):  # fewer rows over the longer side
        a, b = b, a
    n = len(b)
    prev = [0] * (n + 1)
    for tok in a:
        cur = [0]
        append = cur.append
        row = prev
        best = 0
        for j in range(1, n + 1):
            if tok == b[j - 1]:
                best = row[j - 1] + 1
            else:
                up = row[j]
                if up > best:
                    best = up
            append(best)  # row values are monotone, so best == cur[j]
        prev = cur
    return prev[n]


def lcs(a: TokenSeq, b: TokenSeq) -> TokenSeq:
    """A longest common subsequence of ``a`` and ``b``.

    Ties are broken deterministically: the DP table is traced back from the
    end, taking every available match at the largest indices first, so equal
    inputs always produce the identical output sequence.
    """
    if a == b:
        return a
    m, n = len(a), len(b)
    if m == 0 or n == 0:
        return ()
    rows = [[0] * (n + 1)]
    for i in range(1, m + 1):
        ai = a[i - 1]
        prev = rows[-1]
        cur = [0] * (n + 1)
        for j in range(1, n + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = cur[j - 1]
                cur[j] = up if up >= left else left
        rows.append(cur)
    out = []
    i, j = m, n
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1]:
            out.append(a[i - 1])
            i -= 1
            j -= 1
        elif rows[i - 1][j] >= rows[i][j - 1]:
            i -= 1
        else:
            j -= 1
    out.reverse()
    return tuple(out)


def trim_tokens(s: TokenSeq, victims: Iterable[str]) -> TokenSeq:
    """Remove every occurrence of every victim token, keeping survivor order."""
    if not victims:
        return s
    victims = set(victims)
    return tuple(tok for tok in s if tok not in victims)


def render_template(t: TokenSeq, sample_logs: Iterable[TokenSeq] = ()) -> str:
    """Render ``t`` with a ``<*>`` at every position where a sample skips tokens.

    Each sample must contain ``t`` as a subsequence (greedy leftmost
    embedding); consecutive skipped runs collapse into a single marker.  With
    no samples the tokens are joined plainly.
    """
    samples = list(sample_logs)
    if not samples:
        return " ".join(t)
    gaps = [False] * (len(t) + 1)
    for sample in samples:
        positions = embed_positions(t, sample)
        if not positions:
            if sample:
                gaps[0] = True
            continue
        if positions[0] > 0:
            gaps[0] = True
        for i in range(1, len(positions)):
            if positions[i] > positions[i - 1] + 1:
                gaps[i] = True
        if positions[-1] < len(sample) - 1:
            gaps[len(t)] = True
    parts = []
    for i, tok in enumerate(t):
        if gaps[i]:
            parts.append(WILDCARD)
        parts.append(tok)
    if gaps[len(t)]:
        parts.append(WILDCARD)
    return " ".join(parts)


class ClusteringError(ValueError):
    """A clustering violates the full or disjoint property."""


@dataclass(frozen=True)
class LogStore:
    """Immutable indexed collection of tokenized logs.

    ``raw_lines`` keeps the original text for display; it may be omitted for
    bulk synthetic corpora, in which case raw text is re-joined on demand.
    """

    logs: tuple[TokenSeq, ...]
    raw_lines: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.logs)

    def __getitem__(self, n: int) -> TokenSeq:
        return self.logs[n]

    def __iter__(self) -> Iterator[TokenSeq]:
        return iter(self.logs)

    def raw(self, n: int) -> str:
        if self.raw_lines is not None:
            return self.raw_lines[n]
        return " ".join(self.logs[n])


@dataclass
class ClusterTemplatePair:
    """One mined cluster (member log indices) with its current template."""

    members: set[int]
    template: TokenSeq

    def copy(self) -> "ClusterTemplatePair":
        return ClusterTemplatePair(set(self.members), self.template)


@dataclass
class MinedClustering:
    """The full output of a base mining algorithm: pairs covering [0, n_logs)."""

    pairs: list[ClusterTemplatePair]
    n_logs: int

    def validate(self) -> "MinedClustering":
        """Check the full + disjoint property; raise ClusteringError naming offenders."""
        seen: set[int] = set()
        duplicated: list[int] = []
        for pair in self.pairs:
            if not pair.members:
                raise ClusteringError("cluster with empty member set")
            for n in pair.members:
                if n in seen:
                    duplicated.append(n)
                seen.add(n)
        if duplicated:
            raise ClusteringError(
                f"log indices in more than one cluster: {sorted(duplicated)[:10]}"
            )
        missing = [n for n in range(self.n_logs) if n not in seen]
        if missing:
            raise ClusteringError(f"log indices in no cluster: {missing[:10]}")
        out_of_range = sorted(n for n in seen if n < 0 or n >= self.n_logs)
        if out_of_range:
            raise ClusteringError(f"log indices out of range: {out_of_range[:10]}")
        return self

    def copy(self) -> "MinedClustering":
        return MinedClustering([p.copy() for p in self.pairs], self.n_logs)
