"""Controlled injection of merging and splitting identity errors.

Starting from a baseline identity channel (algorithmic or truth ids recorded
on the corpus), a chosen fraction of error-prone entities is perturbed:

* merge errors rewrite every mention of a selected entity to its initial-based
  key, so selected entities sharing a key collapse into one;
* split errors give every mention of a selected multi-paper entity a fresh
  entity id, fragmenting it completely.

``sweep`` applies a ratio schedule to the *original* corpus: each step
rewrites the pristine baseline (never the previous step's output), and the
sampled entity set grows by extension -- a fresh derived seed per step draws
only the newly required entities -- so the selection at any ratio is a uniform
without-replacement sample and the trajectory is a coherent path rather than
a sequence of unrelated draws.  The degree distribution is rebuilt under each
perturbed assignment and the log-log CCDF is fitted at every ratio.
"""
from __future__ import annotations

import math
import random
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from typing import Sequence

from .corpus import Corpus, derive_seed
from .disambig import IdentityAssignment, Method, assign_identities
from .fitting import FitResult, fit_cdf_ls
from .network import ccdf, degree_distribution

MERGE = "merge"
SPLIT = "split"

#: baselines must carry explicit per-mention ids on the corpus
_BASELINE_METHODS = (Method.ALGORITHMIC, Method.TRUTH)
_TARGET_KEYS = (Method.AINI, Method.FINI)

Mention = tuple[str, int]


@dataclass(frozen=True)
class SimulationConfig:
    """One perturbation: kind, error ratio, seed, and identity channels."""

    kind: str  # MERGE | SPLIT
    ratio: float
    seed: int
    baseline_method: Method = Method.ALGORITHMIC
    target_key: Method = Method.AINI  # merge only: the key entities fall into

    def __post_init__(self):
        if self.kind not in (MERGE, SPLIT):
            raise ValueError(f"unknown simulation kind {self.kind!r}")
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError("ratio must be within [0, 1]")
        object.__setattr__(self, "baseline_method", Method(self.baseline_method))
        object.__setattr__(self, "target_key", Method(self.target_key))
        if self.baseline_method not in _BASELINE_METHODS:
            raise ValueError("baseline must be an explicit identity channel "
                             "(algorithmic or truth)")
        if self.target_key not in _TARGET_KEYS:
            raise ValueError("target key must be an initial-based method")


def _representative_keys(
    corpus: Corpus, baseline: IdentityAssignment, target_key: Method
) -> dict[str, str]:
    """Map each baseline entity to the target key of its first mention.

    "First" is (paper_id, pos) order.  Entities whose representative mention
    has no parseable key are left out (they cannot collide).
    """
    target = assign_identities(corpus, target_key)
    first_mention: dict[str, Mention] = {}
    for mention, entity in baseline.entity_of.items():
        known = first_mention.get(entity)
        if known is None or mention < known:
            first_mention[entity] = mention
    keys = {}
    for entity, mention in first_mention.items():
        key = target.entity_of.get(mention)
        if key is not None:
            keys[entity] = key
    return keys


def merge_prone_entities(
    corpus: Corpus, baseline: IdentityAssignment, target_key: Method
) -> set[str]:
    """Baseline entities whose key collides with another entity's key.

    These are exactly the entities that would be absorbed into a fused node
    if the corpus were re-keyed by ``target_key``.
    """
    keys = _representative_keys(corpus, baseline, target_key)
    group_sizes = Counter(keys.values())
    return {e for e, k in keys.items() if group_sizes[k] >= 2}


def _draw(pool: Sequence[str], ratio: float, seed: int) -> set[str]:
    """Seeded uniform sample of ceil(ratio * |pool|) entities."""
    k = math.ceil(ratio * len(pool))
    if k <= 0:
        return set()
    return set(random.Random(seed).sample(pool, k))


def _merged_id(target_key: Method, key: str) -> str:
    # namespaced so a fused node can never collide with an untouched
    # baseline id that happens to look like a name key
    return f"{target_key.value}::{key}"


def _rewrite_channel(
    corpus: Corpus, method: Method, new_ids: dict[Mention, str]
) -> Corpus:
    """Corpus with the method's id channel overridden per mention."""
    if not new_ids:
        return corpus
    field = "algo_id" if method is Method.ALGORITHMIC else "truth_id"
    touched = {pid for pid, _ in new_ids}
    records = []
    for rec in corpus.records:
        if rec.paper_id not in touched:
            records.append(rec)
            continue
        mentions = tuple(
            replace(m, **{field: new_ids[(rec.paper_id, m.pos)]})
            if (rec.paper_id, m.pos) in new_ids else m
            for m in rec.mentions
        )
        records.append(replace(rec, mentions=mentions))
    return Corpus(tuple(records))


def apply_merge_errors(corpus: Corpus, config: SimulationConfig) -> Corpus:
    """Collapse a sampled fraction of merge-prone entities into their keys.

    Samples ceil(ratio * |merge-prone|) entities without replacement using
    the config seed and rewrites each of their mentions' baseline channel to
    the shared key, so selected entities with equal keys become one entity.
    """
    if config.kind != MERGE:
        raise ValueError("config.kind must be merge")
    baseline = assign_identities(corpus, config.baseline_method)
    keys = _representative_keys(corpus, baseline, config.target_key)
    group_sizes = Counter(keys.values())
    pool = sorted(e for e, k in keys.items() if group_sizes[k] >= 2)
    if not pool:
        if config.ratio > 0:
            warnings.warn("no merge-prone entities; corpus unchanged", stacklevel=2)
        return corpus
    chosen = _draw(pool, config.ratio, config.seed)
    new_ids = {
        mention: _merged_id(config.target_key, keys[entity])
        for mention, entity in baseline.entity_of.items()
        if entity in chosen
    }
    return _rewrite_channel(corpus, config.baseline_method, new_ids)


def _split_pool(baseline: IdentityAssignment) -> tuple[list[str], dict[str, list[Mention]]]:
    """Entities on >= 2 distinct papers, plus every entity's mention list."""
    papers: dict[str, set[str]] = defaultdict(set)
    mentions: dict[str, list[Mention]] = defaultdict(list)
    for mention, entity in baseline.entity_of.items():
        papers[entity].add(mention[0])
        mentions[entity].append(mention)
    pool = sorted(e for e, ps in papers.items() if len(ps) >= 2)
    return pool, mentions


def _fragment_ids(entity: str, mentions: list[Mention]) -> dict[Mention, str]:
    """One fresh id per mention, numbered in (paper_id, pos) order."""
    return {m: f"{entity}::s{n}" for n, m in enumerate(sorted(mentions), start=1)}


def apply_split_errors(corpus: Corpus, config: SimulationConfig) -> Corpus:
    """Fragment a sampled fraction of multi-paper entities per mention.

    Every mention of a selected entity receives a distinct fresh id, so an
    entity with m mentions becomes m single-mention entities.  Entities on a
    single paper are never candidates.
    """
    if config.kind != SPLIT:
        raise ValueError("config.kind must be split")
    baseline = assign_identities(corpus, config.baseline_method)
    pool, mentions = _split_pool(baseline)
    if not pool:
        if config.ratio > 0:
            warnings.warn("no multi-paper entities; corpus unchanged", stacklevel=2)
        return corpus
    new_ids: dict[Mention, str] = {}
    for entity in _draw(pool, config.ratio, config.seed):
        new_ids.update(_fragment_ids(entity, mentions[entity]))
    return _rewrite_channel(corpus, config.baseline_method, new_ids)


@dataclass(frozen=True)
class SweepPoint:
    """One ratio step: the fit plus the perturbed network's headline stats."""

    ratio: float
    fit: FitResult
    n_entities: int
    mean_degree: float


@dataclass(frozen=True)
class SweepResult:
    kind: str
    baseline_method: Method
    target_key: Method
    seed: int
    points: tuple[SweepPoint, ...]


def sweep(
    corpus: Corpus,
    kind: str,
    ratios: Sequence[float],
    seed: int,
    baseline_method: Method = Method.ALGORITHMIC,
    target_key: Method = Method.AINI,
    include_isolates: bool = False,
) -> SweepResult:
    """Fit the degree CCDF at every error ratio in the schedule.

    Every ratio perturbs the original corpus (never the previous step's
    output).  The sampled entity set is grown by extension: the step's seed,
    derived from (seed, kind, step index), draws just the entities needed to
    reach ceil(ratio * pool) from those not yet selected.  A prefix of a
    uniform permutation is itself a uniform without-replacement sample, so
    each point is an unbiased draw at its ratio, while nesting makes entity
    counts move monotonically along the sweep instead of jittering between
    unrelated samples.  Fits use the least-squares CCDF regression, which
    supplies both alpha and R².

    The perturbed identities are applied directly to the mention->entity
    assignment; this is equivalent to rewriting the corpus channel and
    reassigning, because record structure is untouched.
    """
    if not ratios:
        raise ValueError("empty ratio schedule")
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        raise ValueError("ratios must be strictly increasing")
    if ratios[0] < 0.0 or ratios[-1] > 1.0:
        raise ValueError("ratios must lie within [0, 1]")
    # validates kind / channel choices up front
    probe = SimulationConfig(kind, ratios[0], seed,
                             baseline_method=baseline_method, target_key=target_key)
    baseline = assign_identities(corpus, probe.baseline_method)

    if kind == MERGE:
        keys = _representative_keys(corpus, baseline, probe.target_key)
        group_sizes = Counter(keys.values())
        pool = sorted(e for e, k in keys.items() if group_sizes[k] >= 2)
        prone = set(pool)
        mentions_of: dict[str, list[Mention]] = defaultdict(list)
        for mention, entity in baseline.entity_of.items():
            if entity in prone:
                mentions_of[entity].append(mention)
    else:
        pool, all_mentions = _split_pool(baseline)
        mentions_of = {e: all_mentions[e] for e in pool}

    if not pool and ratios[-1] > 0:
        warnings.warn("no error-prone entities; every point is the baseline",
                      stacklevel=2)

    points = []
    remaining = list(pool)
    entity_of = dict(baseline.entity_of)
    for step, ratio in enumerate(ratios):
        want = math.ceil(ratio * len(pool))
        need = want - (len(pool) - len(remaining))
        if need > 0:
            added = random.Random(derive_seed(seed, kind, step)).sample(remaining, need)
            taken = set(added)
            remaining = [e for e in remaining if e not in taken]
            for entity in added:
                if kind == MERGE:
                    fused = _merged_id(probe.target_key, keys[entity])
                    for mention in mentions_of[entity]:
                        entity_of[mention] = fused
                else:
                    entity_of.update(_fragment_ids(entity, mentions_of[entity]))
        perturbed = IdentityAssignment(
            method=probe.baseline_method,
            entity_of=entity_of,
            n_entities=len(set(entity_of.values())),
        )
        dist = degree_distribution(corpus, perturbed)
        fit = fit_cdf_ls(ccdf(dist, include_isolates=include_isolates))
        points.append(SweepPoint(ratio, fit, perturbed.n_entities, dist.mean_degree))
    return SweepResult(kind, probe.baseline_method, probe.target_key, seed,
                       tuple(points))


def filter_for_plot(
    result: SweepResult, max_alpha: float = 6.0, min_r_squared: float = 0.90
) -> SweepResult:
    """Drop outlier points for plotting; CSV output always keeps every point."""
    kept = tuple(
        p for p in result.points
        if p.fit.alpha <= max_alpha
        and (p.fit.r_squared is None or p.fit.r_squared >= min_r_squared)
    )
    return replace(result, points=kept)
