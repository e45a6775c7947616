"""Identity keying (all-initials and first-initial) and entity assignment."""

import random

import pytest

from andnet.corpus import AuthorMention, Corpus, PaperRecord
from andnet.disambig import Method, assign_identities, to_aini, to_fini


def _corpus(*bylines):
    """One paper per byline list; names only."""
    records = []
    for i, names in enumerate(bylines):
        mentions = tuple(AuthorMention(name=n, pos=j + 1)
                         for j, n in enumerate(names))
        records.append(PaperRecord(paper_id=f"p{i}", year=2000, title=None,
                                   mentions=mentions))
    return Corpus(tuple(records))


class TestAiniKey:
    def test_initializes_every_forename(self):
        assert to_aini("Charles C. Brown") == "C. C. Brown"

    def test_surname_only_name(self):
        assert to_aini("Brown") == "Brown"

    def test_particles_stay_with_surname(self):
        assert to_aini("Mary-Jane van der Berg") == "M.-J. van der Berg"

    def test_comma_order_normalized(self):
        assert to_aini("Brown, Charles C.") == "C. C. Brown"

    def test_case_and_diacritics_folded(self):
        assert to_aini("josé ÁLVAREZ") == to_aini("Jose Alvarez") == "J. Alvarez"

    def test_unparseable_name_rejected(self):
        with pytest.raises(ValueError):
            to_aini("   ")
        with pytest.raises(ValueError):
            to_aini("...")


class TestFiniKey:
    def test_keeps_only_first_initial(self):
        assert to_fini("Charles C. Brown") == "C. Brown"

    def test_idempotent_on_short_form(self):
        assert to_fini("C. Brown") == "C. Brown"

    def test_collapses_what_full_initials_distinguish(self):
        assert to_fini("C. C. Brown") == to_fini("C. W. Brown") == "C. Brown"
        assert to_aini("C. C. Brown") != to_aini("C. W. Brown")

    def test_particle_surnames(self):
        assert to_fini("Mary-Jane van der Berg") == "M. van der Berg"


def _random_name(rng):
    fores = ["Charles", "Mary-Jane", "C.", "Li", "Ana", "J.-P.", "Ötto",
             "Wei", "Sofía", "D", "Klaas"]
    surs = ["Brown", "van der Berg", "Müller", "O'Neil", "de la Cruz",
            "Kim", "García", "bin Rashid", "Smith-Jones"]
    n_fore = rng.randint(0, 2)
    parts = [rng.choice(fores) for _ in range(n_fore)] + [rng.choice(surs)]
    name = " ".join(parts)
    if n_fore and rng.random() < 0.25:
        sur = parts[-1]
        name = f"{sur}, {' '.join(parts[:-1])}"
    return name


class TestKeyingProperties:
    def test_idempotence_and_coarsening_on_random_names(self):
        rng = random.Random(1234)
        names = [_random_name(rng) for _ in range(2000)]
        by_aini = {}
        for name in names:
            a, f = to_aini(name), to_fini(name)
            assert to_aini(a) == a
            assert to_fini(f) == f
            assert to_fini(a) == f
            # Same AINI key must imply same FINI key.
            assert by_aini.setdefault(a, f) == f


class TestAssignIdentities:
    def test_name_variants_merge_under_aini(self):
        corpus = _corpus(["Charles C. Brown"], ["C. C. Brown"])
        assignment = assign_identities(corpus, Method.AINI)
        assert assignment.n_entities == 1
        assert set(assignment.entity_of.values()) == {"C. C. Brown"}

    def test_truth_channel_keeps_authors_apart(self):
        records = (
            PaperRecord("p0", 2000, None,
                        (AuthorMention("Charles C. Brown", 1, truth_id="t1"),)),
            PaperRecord("p1", 2000, None,
                        (AuthorMention("C. C. Brown", 1, truth_id="t2"),)),
        )
        assignment = assign_identities(Corpus(records), Method.TRUTH)
        assert assignment.n_entities == 2

    def test_method_accepts_plain_strings(self):
        corpus = _corpus(["A. Kato"])
        assert assign_identities(corpus, "fini").method is Method.FINI

    def test_algorithmic_skips_unlabeled_mentions(self):
        records = (
            PaperRecord("p0", 2000, None, (
                AuthorMention("A. Kato", 1, algo_id="x1"),
                AuthorMention("B. Mori", 2),
            )),
        )
        assignment = assign_identities(Corpus(records), Method.ALGORITHMIC)
        assert set(assignment.entity_of) == {("p0", 1)}

    def test_error_when_channel_is_empty(self):
        corpus = _corpus(["A. Kato"])
        with pytest.raises(ValueError, match="truth"):
            assign_identities(corpus, Method.TRUTH)

    def test_n_entities_matches_distinct_values(self):
        corpus = _corpus(["Charles C. Brown", "D. Smith"],
                         ["C. Brown", "D. Smith"])
        for method in (Method.AINI, Method.FINI):
            assignment = assign_identities(corpus, method)
            assert assignment.n_entities == len(set(assignment.entity_of.values()))

    def test_pure_function_of_inputs(self):
        corpus = _corpus(["Charles C. Brown"], ["C. Brown", "E. van Dam"])
        first = assign_identities(corpus, Method.FINI)
        second = assign_identities(corpus, Method.FINI)
        assert first.entity_of == second.entity_of
        assert first.n_entities == second.n_entities

    def test_fini_refines_aini_counts(self):
        corpus = _corpus(
            ["Charles C. Brown", "C. W. Brown"],
            ["Mary-Jane van der Berg"],
            ["M. van der Berg", "C. Brown"],
        )
        aini = assign_identities(corpus, Method.AINI)
        fini = assign_identities(corpus, Method.FINI)
        assert fini.n_entities <= aini.n_entities

    def test_clusters_groups_instances(self):
        corpus = _corpus(["Charles C. Brown"], ["C. C. Brown"])
        clusters = assign_identities(corpus, Method.AINI).clusters()
        assert clusters == {"C. C. Brown": {("p0", 1), ("p1", 1)}}
