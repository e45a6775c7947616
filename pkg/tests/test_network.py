"""Degree distributions, CCDF, slicing, hyper-authorship filtering, subsets."""

import math
import random

import pytest

from andnet.corpus import (
    AuthorMention,
    Corpus,
    PaperRecord,
    SyntheticConfig,
    generate_synthetic,
)
from andnet.disambig import Method, assign_identities
from andnet.network import (
    CcdfPoints,
    DegreeDistribution,
    HyperPolicy,
    SliceSpec,
    ccdf,
    degree_distribution,
    entity_degrees,
    filter_hyperauthorship,
    random_subsets,
    slice_corpus,
    top_degree_entities,
)


def _paper(pid, year, names, truth=None):
    mentions = tuple(
        AuthorMention(name=n, pos=i + 1, truth_id=truth[i] if truth else None)
        for i, n in enumerate(names)
    )
    return PaperRecord(paper_id=pid, year=year, title=None, mentions=mentions)


def _two_browns():
    """Two same-initials authors, two papers, two coauthors each."""
    return Corpus((
        _paper("p1", 2000, ["Charles C. Brown", "Uma Vela", "Vic Wold"],
               truth=["b1", "c1", "c2"]),
        _paper("p2", 2001, ["C. C. Brown", "Xan Yost", "Yan Zorn"],
               truth=["b2", "c3", "c4"]),
    ))


class TestDegreeDistribution:
    def test_truth_keeps_the_namesakes_apart(self):
        corpus = _two_browns()
        degrees = entity_degrees(corpus, assign_identities(corpus, Method.TRUTH))
        assert degrees["b1"] == 2
        assert degrees["b2"] == 2

    def test_initial_keying_fuses_them_into_degree_four(self):
        corpus = _two_browns()
        degrees = entity_degrees(corpus, assign_identities(corpus, Method.AINI))
        assert degrees["C. C. Brown"] == 4

    def test_solo_paper_gives_degree_zero(self):
        corpus = Corpus((_paper("p1", 2000, ["A. Kato"]),))
        degrees = entity_degrees(corpus, assign_identities(corpus, Method.AINI))
        assert degrees == {"A. Kato": 0}

    def test_collaboration_frequency_is_ignored(self):
        papers = tuple(
            _paper(f"p{i}", 2000 + i, ["A. Kato", "B. Mori"]) for i in range(5)
        )
        dist = degree_distribution(Corpus(papers),
                                   assign_identities(Corpus(papers), Method.AINI))
        assert dist.counts == {1: 2}

    def test_same_entity_twice_on_one_byline_adds_no_self_edge(self):
        corpus = Corpus((_paper("p1", 2000, ["A. Kato", "Aiko Kato"]),))
        degrees = entity_degrees(corpus, assign_identities(corpus, Method.FINI))
        assert degrees == {"A. Kato": 0}

    def test_order_invariance(self):
        base = generate_synthetic(SyntheticConfig(n_authors=60, seed=11))
        rng = random.Random(0)
        shuffled_records = list(base.records)
        rng.shuffle(shuffled_records)
        reversed_bylines = tuple(
            PaperRecord(r.paper_id, r.year, r.title, tuple(
                AuthorMention(m.name, i + 1, m.algo_id, m.truth_id)
                for i, m in enumerate(reversed(r.mentions))
            ))
            for r in shuffled_records
        )
        a = degree_distribution(base, assign_identities(base, Method.AINI))
        permuted = Corpus(reversed_bylines)
        b = degree_distribution(permuted, assign_identities(permuted, Method.AINI))
        assert a.counts == b.counts

    def test_merged_entity_reaches_the_coauthor_union(self):
        corpus = _two_browns()
        truth_deg = entity_degrees(corpus, assign_identities(corpus, Method.TRUTH))
        aini_deg = entity_degrees(corpus, assign_identities(corpus, Method.AINI))
        fused = aini_deg["C. C. Brown"]
        assert fused == len({"c1", "c2", "c3", "c4"})
        assert fused >= max(truth_deg["b1"], truth_deg["b2"]) - 1

    def test_coarsening_shrinks_entity_counts(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=200, surname_pool=20, forename_pool=10, seed=6))
        counts = [
            assign_identities(corpus, m).n_entities
            for m in (Method.TRUTH, Method.AINI, Method.FINI)
        ]
        assert counts[0] >= counts[1] >= counts[2]

    def test_moment_fields(self):
        dist = DegreeDistribution({0: 2, 2: 1, 4: 1})
        assert dist.n_authors == 4
        assert dist.mean_degree == pytest.approx(1.5)
        assert dist.sd_degree == pytest.approx(math.sqrt(11 / 4))
        assert dist.max_degree == 4


class TestCcdf:
    def test_uniform_degree_one(self):
        points = ccdf(DegreeDistribution({1: 7}))
        assert points.points == ((1, 1.0),)

    def test_two_level_counts(self):
        points = ccdf(DegreeDistribution({1: 5, 3: 5}))
        assert points.points == ((1, 1.0), (3, 0.5))

    def test_fractions_non_increasing_and_first_is_one(self):
        corpus = generate_synthetic(SyntheticConfig(n_authors=150, seed=8))
        dist = degree_distribution(corpus, assign_identities(corpus, Method.FINI))
        points = ccdf(dist).points
        fractions = [f for _, f in points]
        assert fractions[0] == 1.0
        assert all(b <= a for a, b in zip(fractions, fractions[1:]))
        assert all(f > 0 for f in fractions)

    def test_isolates_change_only_the_denominator(self):
        dist = DegreeDistribution({0: 5, 1: 5})
        excluded = ccdf(dist)
        included = ccdf(dist, include_isolates=True)
        assert excluded.points == ((1, 1.0),)
        assert excluded.denominator == 5
        assert included.points == ((1, 0.5),)
        assert included.denominator == 10

    def test_no_positive_degrees_rejected(self):
        with pytest.raises(ValueError, match="degree"):
            ccdf(DegreeDistribution({0: 3}))


class TestSlicing:
    def _by_year(self):
        return Corpus(tuple(
            _paper(f"p{y}", y, ["A. Kato"]) for y in range(1991, 1996)
        ))

    def test_window_truncates_at_corpus_start(self):
        sliced = slice_corpus(self._by_year(), SliceSpec.window(5, 1993))
        assert [r.year for r in sliced.records] == [1991, 1992, 1993]

    def test_cumulative_single_year(self):
        sliced = slice_corpus(self._by_year(), SliceSpec.cumulative(1991, 1991))
        assert [r.year for r in sliced.records] == [1991]

    def test_one_year_window_equals_one_year_cumulative(self):
        corpus = self._by_year()
        w = slice_corpus(corpus, SliceSpec.window(1, 1994))
        c = slice_corpus(corpus, SliceSpec.cumulative(1994, 1994))
        assert w.records == c.records

    def test_whole_slice_keeps_everything(self):
        corpus = self._by_year()
        assert slice_corpus(corpus, SliceSpec.whole()).records == corpus.records

    def test_empty_result_allowed(self):
        sliced = slice_corpus(self._by_year(), SliceSpec.cumulative(1890, 1890))
        assert sliced.n_records == 0

    def test_labels(self):
        assert SliceSpec.whole().label() == "all"
        assert SliceSpec.cumulative(1991, 1993).label() == "cum1991-1993"
        assert SliceSpec.window(5, 1995).label() == "w5-1995"

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            SliceSpec.cumulative(1995, 1991)
        with pytest.raises(ValueError):
            SliceSpec.window(0, 1995)


class TestHyperFilter:
    def test_absolute_cutoff_no_op_below_limit(self):
        corpus = Corpus((_paper("p1", 2000, [f"A{i} Kato" for i in range(12)]),))
        result = filter_hyperauthorship(corpus, HyperPolicy.absolute(100))
        assert result.corpus.records == corpus.records
        assert result.n_dropped == 0

    def test_absolute_cutoff_drops_strictly_larger_bylines(self):
        small = _paper("p1", 2000, [f"A{i} Kato" for i in range(100)])
        big = _paper("p2", 2000, [f"B{i} Mori" for i in range(101)])
        result = filter_hyperauthorship(Corpus((small, big)),
                                        HyperPolicy.absolute(100))
        assert [r.paper_id for r in result.corpus.records] == ["p1"]
        assert result.threshold == 101
        assert result.n_dropped == 1

    def test_top_percentile_drops_exactly_the_outlier(self):
        papers = [_paper(f"p{i}", 2000, [f"A{i} Kato", f"B{i} Mori"])
                  for i in range(99)]
        papers.append(_paper("big", 2000, [f"C{i} Vasa" for i in range(50)]))
        result = filter_hyperauthorship(Corpus(tuple(papers)),
                                        HyperPolicy.top_percentile(1.0))
        assert result.corpus.n_records == 99
        assert all(r.paper_id != "big" for r in result.corpus.records)
        assert result.threshold == 3

    def test_none_policy_is_identity(self):
        corpus = Corpus((_paper("p1", 2000, ["A. Kato"]),))
        result = filter_hyperauthorship(corpus, HyperPolicy.none())
        assert result.corpus.records == corpus.records
        assert result.threshold is None

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            filter_hyperauthorship(Corpus(()), HyperPolicy.absolute(100))

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            HyperPolicy.top_percentile(0.0)
        with pytest.raises(ValueError):
            HyperPolicy.absolute(0)


class TestRandomSubsets:
    def test_documented_size_ladder(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=300, n_papers=1000, seed=1))
        draws = list(random_subsets(corpus, base_fraction=1.0,
                                    increment_records=10, seed=3,
                                    start_records=100))
        sizes = [d.size for d in draws]
        assert len(sizes) == 91
        assert sizes[0] == 100
        assert sizes[-1] == 1000
        assert all(b - a == 10 for a, b in zip(sizes, sizes[1:]))

    def test_increment_equal_to_base_yields_base_itself(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=100, n_papers=200, seed=1))
        draws = list(random_subsets(corpus, base_fraction=0.5,
                                    increment_records=100, repeats=2, seed=9))
        assert [(d.repeat, d.size) for d in draws] == [(0, 100), (1, 100)]

    def test_deterministic_membership(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=100, n_papers=300, seed=1))
        def ids(seed):
            return [
                tuple(r.paper_id for r in d.corpus.records)
                for d in random_subsets(corpus, base_fraction=0.4,
                                        increment_records=30, repeats=2,
                                        seed=seed)
            ]
        assert ids(7) == ids(7)
        assert ids(7) != ids(8)

    def test_subsets_come_from_the_base_sample(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=100, n_papers=300, seed=1))
        draws = list(random_subsets(corpus, base_fraction=0.3,
                                    increment_records=20, seed=4))
        base_ids = {r.paper_id for r in draws[-1].corpus.records}
        for d in draws:
            assert {r.paper_id for r in d.corpus.records} <= base_ids

    def test_size_validation(self):
        corpus = generate_synthetic(SyntheticConfig(
            n_authors=50, n_papers=100, seed=1))
        with pytest.raises(ValueError):
            list(random_subsets(corpus, base_fraction=0.0))
        with pytest.raises(ValueError):
            list(random_subsets(corpus, base_fraction=0.5,
                                increment_records=51))
        with pytest.raises(ValueError):
            list(random_subsets(corpus, base_fraction=0.5, repeats=0))


class TestTopDegreeEntities:
    def test_fused_namesake_tops_the_ranking(self):
        corpus = _two_browns()
        top = top_degree_entities(corpus, assign_identities(corpus, Method.AINI), 1)
        assert top == [("C. C. Brown", 4)]

    def test_k_beyond_entity_count_returns_everyone(self):
        corpus = Corpus((_paper("p1", 2000, ["A. Kato", "B. Mori"]),))
        top = top_degree_entities(corpus, assign_identities(corpus, Method.AINI), 10)
        assert len(top) == 2

    def test_ties_break_lexicographically(self):
        corpus = Corpus((_paper("p1", 2000, ["B. Mori", "A. Kato"]),))
        top = top_degree_entities(corpus, assign_identities(corpus, Method.AINI), 2)
        assert top == [("A. Kato", 1), ("B. Mori", 1)]

    def test_k_validation(self):
        corpus = Corpus((_paper("p1", 2000, ["A. Kato"]),))
        with pytest.raises(ValueError):
            top_degree_entities(corpus, assign_identities(corpus, Method.AINI), 0)
