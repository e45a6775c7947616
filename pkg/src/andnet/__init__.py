"""Author-name identity and coauthorship degree distributions.

The toolkit measures how the choice of author-identity resolution — raw
initial-based keys (AINI/FINI), an algorithmic disambiguator's ids, or
curated truth ids — reshapes a bibliographic corpus's coauthorship degree
distribution, and how robust power-law fits are to merge/split identity
errors injected at controlled rates.

Typical flow: build or load a :class:`~andnet.corpus.Corpus`, pick identity
methods with :func:`~andnet.disambig.assign_identities`, evaluate cluster
errors against truth (:mod:`andnet.accuracy`), turn assignments into degree
distributions and CCDFs (:mod:`andnet.network`), fit power laws
(:mod:`andnet.fitting`), and stress identity quality (:mod:`andnet.simulation`).
The ``andnet`` command line wires the same stages into reproducible CSV/SVG
pipelines.
"""

__version__ = "0.1.0"

from .accuracy import ErrorKind, ErrorReport, classify_cluster, error_report
from .corpus import (
    AuthorMention,
    Corpus,
    PaperRecord,
    SyntheticConfig,
    derive_seed,
    generate_synthetic,
    link_truth_ids,
    load_corpus,
    normalize_title,
    save_corpus,
)
from .disambig import IdentityAssignment, Method, assign_identities, to_aini, to_fini
from .fitting import (
    CDF_LS,
    MLE_KS,
    FitResult,
    FitSummary,
    fit_cdf_ls,
    fit_mle_ks,
    summarize,
)
from .network import (
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
from .simulation import (
    SimulationConfig,
    SweepResult,
    apply_merge_errors,
    apply_split_errors,
    merge_prone_entities,
    sweep,
)

__all__ = [
    "AuthorMention",
    "CcdfPoints",
    "CDF_LS",
    "Corpus",
    "DegreeDistribution",
    "ErrorKind",
    "ErrorReport",
    "FitResult",
    "FitSummary",
    "HyperPolicy",
    "IdentityAssignment",
    "Method",
    "MLE_KS",
    "PaperRecord",
    "SimulationConfig",
    "SliceSpec",
    "SweepResult",
    "SyntheticConfig",
    "apply_merge_errors",
    "apply_split_errors",
    "assign_identities",
    "ccdf",
    "classify_cluster",
    "degree_distribution",
    "derive_seed",
    "entity_degrees",
    "error_report",
    "filter_hyperauthorship",
    "fit_cdf_ls",
    "fit_mle_ks",
    "generate_synthetic",
    "link_truth_ids",
    "load_corpus",
    "merge_prone_entities",
    "normalize_title",
    "random_subsets",
    "save_corpus",
    "slice_corpus",
    "summarize",
    "sweep",
    "to_aini",
    "to_fini",
    "top_degree_entities",
]
