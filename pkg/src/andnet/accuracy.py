"""Cluster-level disambiguation error taxonomy.

Each truth cluster (the instances linked to one truth id) is classified
against a test assignment as NoError, Merged, Split, or MergedAndSplit.
The evaluation universe is the truth-linked instances only: test clusters
are the assignment's clusters restricted to that universe, so unlinked
mentions sharing a key never count as merging evidence.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping

from .disambig import IdentityAssignment, Method

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import Corpus


class ErrorKind(str, Enum):
    NO_ERROR = "no_error"
    MERGED = "merged"
    SPLIT = "split"
    MERGED_AND_SPLIT = "merged_and_split"


def _kind(split: bool, merged: bool) -> ErrorKind:
    if merged and split:
        return ErrorKind.MERGED_AND_SPLIT
    if merged:
        return ErrorKind.MERGED
    if split:
        return ErrorKind.SPLIT
    return ErrorKind.NO_ERROR


@dataclass(frozen=True)
class TruthCluster:
    """All instances (paper_id, pos) linked to one truth id."""

    truth_id: str
    instances: frozenset

    def __post_init__(self):
        object.__setattr__(self, "instances", frozenset(self.instances))
        if not self.instances:
            raise ValueError(f"truth cluster {self.truth_id!r} has no instances")


def build_truth_clusters(corpus: "Corpus") -> tuple[TruthCluster, ...]:
    """One cluster per distinct truth_id, ordered by truth_id."""
    groups: dict[str, set] = {}
    for rec in corpus.records:
        for m in rec.mentions:
            if m.truth_id is not None:
                groups.setdefault(m.truth_id, set()).add((rec.paper_id, m.pos))
    return tuple(
        TruthCluster(tid, frozenset(insts)) for tid, insts in sorted(groups.items())
    )


def classify_cluster(
    cluster: TruthCluster,
    assignment: IdentityAssignment,
    universe: Iterable | None = None,
) -> ErrorKind:
    """Classify one truth cluster against a test assignment.

    Split: the cluster's instances occupy >= 2 test clusters.  Merged: some
    test cluster holding a cluster instance also holds a universe instance
    outside the cluster.  ``universe`` is the truth-linked instance set; when
    None, every instance covered by the assignment is used.

    Raises
    ------
    ValueError
        If a cluster or universe instance is missing from the assignment.
    """
    entity_of = assignment.entity_of
    members = entity_of.keys() if universe is None else universe
    try:
        eids = {entity_of[i] for i in cluster.instances}
        merged = any(
            i not in cluster.instances and entity_of[i] in eids for i in members
        )
    except KeyError as exc:
        raise ValueError(
            f"instance {exc.args[0]!r} is missing from the "
            f"{assignment.method.value} assignment"
        ) from None
    return _kind(split=len(eids) > 1, merged=merged)


@dataclass(frozen=True)
class ErrorReport:
    """Per-method truth-cluster error counts and ratios."""

    method: Method
    n_clusters: int
    counts: Mapping[ErrorKind, int]

    def ratio(self, kind: ErrorKind) -> float:
        return self.counts.get(kind, 0) / self.n_clusters

    @cached_property
    def ratio_no_error(self) -> float:
        return self.ratio(ErrorKind.NO_ERROR)

    @cached_property
    def ratio_merged(self) -> float:
        return self.ratio(ErrorKind.MERGED)

    @cached_property
    def ratio_split(self) -> float:
        return self.ratio(ErrorKind.SPLIT)

    @cached_property
    def ratio_merged_and_split(self) -> float:
        return self.ratio(ErrorKind.MERGED_AND_SPLIT)

    @property
    def merged_involved(self) -> float:
        """Ratio of clusters touched by merging (Merged or MergedAndSplit)."""
        return self.ratio_merged + self.ratio_merged_and_split

    @property
    def split_involved(self) -> float:
        """Ratio of clusters touched by splitting (Split or MergedAndSplit)."""
        return self.ratio_split + self.ratio_merged_and_split


def error_report(corpus: "Corpus", assignment: IdentityAssignment) -> ErrorReport:
    """Classify every truth cluster and report category ratios.

    Equivalent to calling :func:`classify_cluster` on each cluster with the
    truth-linked universe, but in a single linear pass.
    """
    clusters = build_truth_clusters(corpus)
    if not clusters:
        raise ValueError("corpus has no truth-linked mentions")
    entity_of = assignment.entity_of
    universe_count: Counter = Counter()
    for cluster in clusters:
        for inst in cluster.instances:
            if inst not in entity_of:
                raise ValueError(
                    f"instance {inst!r} is missing from the "
                    f"{assignment.method.value} assignment"
                )
            universe_count[entity_of[inst]] += 1
    counts: Counter = Counter()
    for cluster in clusters:
        mine = Counter(entity_of[i] for i in cluster.instances)
        split = len(mine) > 1
        merged = any(universe_count[e] > k for e, k in mine.items())
        counts[_kind(split, merged)] += 1
    return ErrorReport(
        method=assignment.method, n_clusters=len(clusters), counts=dict(counts)
    )
