"""Coauthorship degree distributions under an identity assignment.

Degree of an entity = number of distinct other entities it co-appears with on
at least one byline (collaboration frequency ignored; an entity mentioned
twice on one byline gains no self-edge).  Includes the hyper-authorship
filters, year slicing, CCDF construction, random-subset drawing, and
top-degree reporting used by the analysis protocols.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .corpus import Corpus, derive_seed
from .disambig import IdentityAssignment


@dataclass(frozen=True)
class DegreeDistribution:
    """Histogram degree -> number of authors, with derived moments."""

    counts: dict[int, int]

    @cached_property
    def n_authors(self) -> int:
        return sum(self.counts.values())

    @cached_property
    def mean_degree(self) -> float:
        if self.n_authors == 0:
            return 0.0
        return sum(x * c for x, c in self.counts.items()) / self.n_authors

    @cached_property
    def sd_degree(self) -> float:
        """Population standard deviation of the degree."""
        if self.n_authors == 0:
            return 0.0
        mean = self.mean_degree
        var = sum(c * (x - mean) ** 2 for x, c in self.counts.items()) / self.n_authors
        return math.sqrt(max(var, 0.0))

    @cached_property
    def max_degree(self) -> int:
        return max(self.counts, default=0)


@dataclass(frozen=True)
class CcdfPoints:
    """Ordered (x, fraction of authors with degree >= x) over observed x >= 1."""

    points: tuple[tuple[int, float], ...]
    denominator: int


@dataclass(frozen=True)
class SliceSpec:
    """A year slice: the whole range, cumulative years, or a sliding window."""

    kind: str  # "whole" | "cumulative" | "window"
    start: int | None = None
    end: int | None = None
    length: int | None = None

    def __post_init__(self):
        if self.kind == "whole":
            return
        if self.kind == "cumulative":
            if self.start is None or self.end is None or self.start > self.end:
                raise ValueError("cumulative slice needs start <= end")
        elif self.kind == "window":
            if self.length is None or self.length < 1 or self.end is None:
                raise ValueError("window slice needs a positive length and an end year")
        else:
            raise ValueError(f"unknown slice kind {self.kind!r}")

    @classmethod
    def whole(cls) -> "SliceSpec":
        return cls(kind="whole")

    @classmethod
    def cumulative(cls, start: int, end: int) -> "SliceSpec":
        return cls(kind="cumulative", start=start, end=end)

    @classmethod
    def window(cls, length: int, end: int) -> "SliceSpec":
        """Window covering the ``length`` years ending at ``end`` (inclusive)."""
        return cls(kind="window", length=length, end=end)

    def bounds(self) -> tuple[int | None, int | None]:
        if self.kind == "whole":
            return None, None
        if self.kind == "cumulative":
            return self.start, self.end
        return self.end - self.length + 1, self.end

    def label(self) -> str:
        if self.kind == "whole":
            return "all"
        if self.kind == "cumulative":
            return f"cum{self.start}-{self.end}"
        return f"w{self.length}-{self.end}"


def slice_corpus(corpus: Corpus, spec: SliceSpec) -> Corpus:
    """Records whose year falls in the slice; empty result is allowed.

    Windows reaching before the corpus start are truncated there, since no
    earlier records exist.
    """
    lo, hi = spec.bounds()
    return Corpus(tuple(
        r for r in corpus.records
        if (lo is None or r.year >= lo) and (hi is None or r.year <= hi)
    ))


@dataclass(frozen=True)
class HyperPolicy:
    """Hyper-authorship exclusion: top-percentile or absolute byline cutoff."""

    kind: str  # "none" | "top_percentile" | "absolute"
    percent: float = 1.0
    max_authors: int = 100

    def __post_init__(self):
        if self.kind not in ("none", "top_percentile", "absolute"):
            raise ValueError(f"unknown hyper policy {self.kind!r}")
        if self.kind == "top_percentile" and not 0.0 < self.percent < 100.0:
            raise ValueError("percentile must be in (0, 100)")
        if self.kind == "absolute" and self.max_authors < 1:
            raise ValueError("max_authors must be >= 1")

    @classmethod
    def none(cls) -> "HyperPolicy":
        return cls(kind="none")

    @classmethod
    def top_percentile(cls, percent: float = 1.0) -> "HyperPolicy":
        return cls(kind="top_percentile", percent=percent)

    @classmethod
    def absolute(cls, max_authors: int = 100) -> "HyperPolicy":
        return cls(kind="absolute", max_authors=max_authors)


class HyperFilterResult(NamedTuple):
    corpus: Corpus
    threshold: int | None  # smallest byline size dropped; None when no-op
    n_dropped: int


def filter_hyperauthorship(corpus: Corpus, policy: HyperPolicy | None) -> HyperFilterResult:
    """Drop hyper-authored papers before any slicing or degree counting.

    TopPercentile{p}: the threshold is the smallest byline size T such that
    papers with >= T authors make up <= p% of all papers; those papers are
    dropped.  AbsoluteCutoff{k}: papers with more than k authors are dropped.
    """
    if not corpus.records:
        raise ValueError("empty corpus")
    if policy is None or policy.kind == "none":
        return HyperFilterResult(corpus, None, 0)
    if policy.kind == "absolute":
        threshold = policy.max_authors + 1
    else:
        sizes = Counter(len(r.mentions) for r in corpus.records)
        allowed = corpus.n_records * policy.percent / 100.0
        tail = corpus.n_records
        threshold = max(sizes) + 1
        for x in range(1, max(sizes) + 2):
            if tail <= allowed:
                threshold = x
                break
            tail -= sizes.get(x, 0)
    kept = tuple(r for r in corpus.records if len(r.mentions) < threshold)
    return HyperFilterResult(Corpus(kept), threshold, corpus.n_records - len(kept))


def entity_degrees(corpus: Corpus, assignment: IdentityAssignment) -> dict[str, int]:
    """Distinct-coauthor count for every entity appearing in the corpus.

    Mentions not covered by the assignment are skipped.  Entities appearing
    only on solo bylines get degree 0.
    """
    entity_of = assignment.entity_of
    coauthors: dict[str, set[str]] = {}
    solo: set[str] = set()
    for rec in corpus.records:
        pid = rec.paper_id
        eids = {e for m in rec.mentions
                if (e := entity_of.get((pid, m.pos))) is not None}
        if len(eids) < 2:
            solo.update(eids)
            continue
        for e in eids:
            known = coauthors.get(e)
            if known is None:
                known = coauthors[e] = set()
            known.update(eids)
    degrees = {}
    for e, mates in coauthors.items():
        mates.discard(e)
        degrees[e] = len(mates)
    for e in solo:
        degrees.setdefault(e, 0)
    return degrees


def degree_distribution(corpus: Corpus, assignment: IdentityAssignment) -> DegreeDistribution:
    """Histogram of distinct-coauthor degrees under the assignment."""
    return DegreeDistribution(dict(Counter(entity_degrees(corpus, assignment).values())))


def ccdf(dist: DegreeDistribution, include_isolates: bool = False) -> CcdfPoints:
    """CCDF points over the distinct observed degrees >= 1.

    fraction(x) = #authors with degree >= x / denominator, where the
    denominator is the authors with degree >= 1 by default, or all authors
    when ``include_isolates`` is set (degree-0 authors then dilute every
    fraction but contribute no point).
    """
    positive = sorted((x, c) for x, c in dist.counts.items() if x >= 1)
    if not positive:
        raise ValueError("no authors with degree >= 1")
    tail = sum(c for _, c in positive)
    denominator = dist.n_authors if include_isolates else tail
    points = []
    for x, c in positive:
        points.append((x, tail / denominator))
        tail -= c
    return CcdfPoints(tuple(points), denominator)


class SubsetDraw(NamedTuple):
    repeat: int
    size: int
    corpus: Corpus


def random_subsets(
    corpus: Corpus,
    base_fraction: float = 0.10,
    increment_records: int = 1,
    repeats: int = 1,
    seed: int = 0,
    start_records: int | None = None,
) -> Iterator[SubsetDraw]:
    """Yield random record subsets per the random-selection protocol.

    Per repeat, one base sample of ceil(base_fraction * N) records is drawn
    without replacement; subsets of sizes ``start_records`` (default: the
    increment), stepping by ``increment_records`` up to the base size, are
    each drawn independently without replacement from the base sample.  The
    final size is the base sample itself, not a redraw.  Deterministic for a
    given master seed; record order within every subset follows the corpus.
    """
    n = corpus.n_records
    if not 0.0 < base_fraction <= 1.0:
        raise ValueError("base_fraction must be in (0, 1]")
    base_n = math.ceil(base_fraction * n)
    if base_n < 1:
        raise ValueError("base sample is empty")
    if not 1 <= increment_records <= base_n:
        raise ValueError("increment_records must be in 1..base sample size")
    if start_records is not None and not 1 <= start_records <= base_n:
        raise ValueError("start_records must be in 1..base sample size")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    start = increment_records if start_records is None else start_records
    sizes = list(range(start, base_n + 1, increment_records))
    if not sizes or sizes[-1] != base_n:
        sizes.append(base_n)
    for rep in range(repeats):
        base_rng = random.Random(derive_seed(seed, "base", rep))
        base_idx = sorted(base_rng.sample(range(n), base_n))
        base = tuple(corpus.records[i] for i in base_idx)
        for size in sizes:
            if size == base_n:
                chosen = base
            else:
                sub_rng = random.Random(derive_seed(seed, "subset", rep, size))
                idx = sorted(sub_rng.sample(range(base_n), size))
                chosen = tuple(base[i] for i in idx)
            yield SubsetDraw(rep, size, Corpus(chosen))


def top_degree_entities(
    corpus: Corpus, assignment: IdentityAssignment, k: int
) -> list[tuple[str, int]]:
    """The k highest-degree entities, ties broken by entity id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    degrees = entity_degrees(corpus, assignment)
    ranked = sorted(degrees.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]
