"""Command-line pipeline over the toolkit.

Subcommands: ``gen`` (synthetic corpus), ``ingest`` (load/validate/link),
``disambiguate``, ``accuracy``, ``netstats``, ``fit``, ``sweep`` (slice
protocols), ``simulate`` (error injection), and ``run`` (manifest-driven
pipeline).

Every CSV starts with a comment line recording the tool version and a digest
of the analytic parameters (never filesystem paths, so moving the output
directory cannot change file bytes), then a header row.  All randomness flows
from explicit seeds; rerunning a command reproduces its outputs byte for
byte.

Exit codes: 0 success; 2 invalid usage, paths, or manifest; 3 malformed or
degenerate data; 4 internal failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from ._svg import trajectory_svg
from .accuracy import error_report
from .corpus import (
    Corpus,
    SyntheticConfig,
    generate_synthetic,
    link_truth_ids,
    load_corpus,
    load_profiles,
    save_corpus,
)
from .disambig import IdentityAssignment, Method, assign_identities
from .fitting import CDF_LS, MLE_KS, FitResult, fit_cdf_ls, fit_mle_ks
from .network import (
    HyperPolicy,
    SliceSpec,
    ccdf,
    degree_distribution,
    filter_hyperauthorship,
    random_subsets,
    slice_corpus,
)
from .simulation import MERGE, SPLIT, filter_for_plot
from .simulation import sweep as error_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4

FIT_HEADER = ["method", "slice", "fit_method", "alpha", "r_squared", "slope",
              "x_min", "ks", "n_tail", "tail_ratio"]
NETSTATS_HEADER = ["method", "slice", "n_authors", "mean_degree", "sd_degree"]
SIM_HEADER = ["ratio", "alpha", "r_squared", "n_entities", "mean_degree"]


class UsageError(Exception):
    """Bad flags, unknown tokens, missing paths, invalid manifest."""


class DataError(Exception):
    """Input parsed but cannot be analyzed (malformed or degenerate)."""


# ---------------------------------------------------------------- helpers

def _f6(value) -> str:
    return "" if value is None else f"{value:.6f}"


def _f4(value) -> str:
    return "" if value is None else f"{value:.4f}"


def _digest(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def _write_csv(path: Path, header: list[str], rows, params: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# andnet {__version__} params={_digest(params)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _out_path(arg: str | None, default_name: str) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get("ANDNET_OUT", ".")) / default_name


def _note(message: str) -> None:
    print(f"note: {message}", file=sys.stderr)


def _load(path_str: str) -> Corpus:
    path = Path(path_str)
    if not path.exists():
        raise UsageError(f"input path does not exist: {path}")
    try:
        return load_corpus(path)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


def _assign(corpus: Corpus, method: Method) -> IdentityAssignment:
    try:
        return assign_identities(corpus, method)
    except ValueError as exc:
        raise DataError(f"method {method.value}: {exc}") from exc


def _parse_methods(spec: str) -> list[Method]:
    methods = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            methods.append(Method(token))
        except ValueError:
            choices = ", ".join(m.value for m in Method)
            raise UsageError(f"unknown method {token!r} (choose from {choices})")
    if not methods:
        raise UsageError("no methods given")
    return methods


def _parse_hyper(spec: str | None) -> HyperPolicy:
    if spec is None or spec == "none":
        return HyperPolicy.none()
    kind, _, arg = spec.partition(":")
    try:
        if kind == "top":
            return HyperPolicy.top_percentile(float(arg) if arg else 1.0)
        if kind == "abs":
            return HyperPolicy.absolute(int(arg) if arg else 100)
    except ValueError as exc:
        raise UsageError(f"bad hyper policy {spec!r}: {exc}") from exc
    raise UsageError(f"unknown hyper policy {spec!r} (use none, top:<pct>, abs:<k>)")


def _parse_slices(spec: str, corpus: Corpus) -> list[SliceSpec]:
    """Expand comma-separated slice tokens against the corpus year range.

    Tokens: ``all``; ``cumulative`` (one cumulative slice per year);
    ``window:<L>`` (one L-year window ending at each year); explicit
    ``cum:<start>-<end>`` and ``window:<L>:<end>``.
    """
    y0, y1 = corpus.year_min, corpus.year_max
    if y0 is None:
        raise DataError("corpus has no records to slice")
    slices: list[SliceSpec] = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            if token == "all":
                slices.append(SliceSpec.whole())
            elif token == "cumulative":
                slices.extend(SliceSpec.cumulative(y0, y) for y in range(y0, y1 + 1))
            elif token.startswith("cum:"):
                a, _, b = token[4:].partition("-")
                slices.append(SliceSpec.cumulative(int(a), int(b)))
            elif token.startswith("window:"):
                parts = token.split(":")[1:]
                if len(parts) == 1:
                    length = int(parts[0])
                    slices.extend(SliceSpec.window(length, y) for y in range(y0, y1 + 1))
                elif len(parts) == 2:
                    slices.append(SliceSpec.window(int(parts[0]), int(parts[1])))
                else:
                    raise ValueError("expected window:<L> or window:<L>:<end>")
            else:
                raise ValueError("unknown token")
        except ValueError as exc:
            raise UsageError(f"bad slice token {token!r}: {exc}") from exc
    if not slices:
        raise UsageError("no slices given")
    return slices


def _parse_fit_methods(spec: str) -> list[str]:
    out = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if token not in (CDF_LS, MLE_KS):
            raise UsageError(f"unknown fit method {token!r} (use {CDF_LS} or {MLE_KS})")
        out.append(token)
    if not out:
        raise UsageError("no fit methods given")
    return out


def _check_ratio_schedule(ratios: list[float]) -> list[float]:
    if not ratios:
        raise UsageError("empty ratio schedule")
    if any(not 0.0 <= r <= 1.0 for r in ratios):
        raise UsageError("ratios must lie within [0, 1]")
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        raise UsageError("ratios must be strictly increasing")
    return ratios


def _parse_ratios(spec: str) -> list[float]:
    """A ratio schedule: ``start:stop:step`` or a comma-separated list."""
    try:
        if ":" in spec:
            start_s, stop_s, step_s = spec.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise ValueError("step must be positive")
            count = int((stop - start) / step + 1e-9) + 1
            ratios = [round(start + i * step, 10) for i in range(count)]
        else:
            ratios = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad ratio schedule {spec!r}: {exc}") from exc
    return _check_ratio_schedule(ratios)


def _filtered(corpus: Corpus, policy: HyperPolicy) -> Corpus:
    try:
        result = filter_hyperauthorship(corpus, policy)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    if result.n_dropped:
        _note(f"hyper-authorship filter dropped {result.n_dropped} papers "
              f"(threshold {result.threshold} authors)")
    return result.corpus


# ------------------------------------------------------------ row builders

class _DistCache:
    """Memoizes sliced sub-corpora and per-(method, slice) distributions.

    Several outputs (netstats, fits, histograms) walk the same method x slice
    grid; slicing and degree counting dominate the pipeline, so each pair is
    computed once and shared.
    """

    def __init__(self, corpus: Corpus, assignments: dict):
        self.corpus = corpus
        self.assignments = assignments
        self._subs: dict[str, Corpus] = {}
        self._dists: dict = {}

    def sub(self, spec: SliceSpec) -> Corpus:
        label = spec.label()
        if label not in self._subs:
            self._subs[label] = slice_corpus(self.corpus, spec)
        return self._subs[label]

    def dist(self, method: Method, spec: SliceSpec):
        key = (method, spec.label())
        if key not in self._dists:
            self._dists[key] = degree_distribution(self.sub(spec),
                                                   self.assignments[method])
        return self._dists[key]


def _fit_row(method_value: str, slice_label: str, fit: FitResult) -> list:
    return [
        method_value, slice_label, fit.fit_method,
        _f6(fit.alpha), _f6(fit.r_squared), _f6(fit.slope),
        fit.x_min, _f6(fit.ks_distance), fit.n_tail, _f6(fit.tail_ratio),
    ]


def _fit_distribution(dist, fit_method: str, include_isolates: bool,
                      x_min: int | None = None) -> FitResult:
    if fit_method == CDF_LS:
        return fit_cdf_ls(ccdf(dist, include_isolates=include_isolates),
                          x_min=x_min if x_min is not None else 1)
    return fit_mle_ks(dist, x_min=x_min)


def _netstats_rows(cache: _DistCache, methods: Sequence[Method],
                   slices: Sequence[SliceSpec]) -> list[list]:
    rows = []
    for method in methods:
        for spec in slices:
            if cache.sub(spec).n_records == 0:
                _note(f"slice {spec.label()} is empty; skipped")
                continue
            dist = cache.dist(method, spec)
            rows.append([method.value, spec.label(), dist.n_authors,
                         _f6(dist.mean_degree), _f6(dist.sd_degree)])
    return rows


def _fit_rows(cache: _DistCache, methods: Sequence[Method],
              slices: Sequence[SliceSpec], fit_methods: Sequence[str],
              include_isolates: bool = False) -> list[list]:
    rows = []
    for method in methods:
        for spec in slices:
            if cache.sub(spec).n_records == 0:
                _note(f"slice {spec.label()} is empty; skipped")
                continue
            dist = cache.dist(method, spec)
            for fit_method in fit_methods:
                try:
                    fit = _fit_distribution(dist, fit_method, include_isolates)
                except ValueError as exc:
                    _note(f"{method.value}/{spec.label()}/{fit_method}: {exc}")
                    continue
                rows.append(_fit_row(method.value, spec.label(), fit))
    return rows


def _assignment_rows(corpus: Corpus, methods: Sequence[Method],
                     assignments: dict) -> list[list]:
    rows = []
    for method in methods:
        entity_of = assignments[method].entity_of
        for rec in corpus.records:
            for mention in rec.mentions:
                entity = entity_of.get((rec.paper_id, mention.pos))
                if entity is not None:
                    rows.append([rec.paper_id, mention.pos, method.value, entity])
    return rows


def _simulate_rows(result) -> list[list]:
    return [[f"{p.ratio:.4f}", _f6(p.fit.alpha), _f6(p.fit.r_squared),
             p.n_entities, _f6(p.mean_degree)] for p in result.points]


def _accuracy_rows(corpus: Corpus, methods: Sequence[Method],
                   assignments: dict) -> list[list]:
    rows = []
    for method in methods:
        try:
            report = error_report(corpus, assignments[method])
        except ValueError as exc:
            raise DataError(f"method {method.value}: {exc}") from exc
        rows.append([
            method.value, report.n_clusters,
            _f4(report.ratio_no_error), _f4(report.ratio_merged),
            _f4(report.ratio_split), _f4(report.ratio_merged_and_split),
        ])
    return rows


# ------------------------------------------------------------- subcommands

def cmd_gen(args) -> int:
    try:
        config = SyntheticConfig(
            n_authors=args.n_authors,
            surname_pool=args.surname_pool,
            surname_skew=args.surname_skew,
            forename_pool=args.forename_pool,
            middle_prob=args.middle_prob,
            papers_per_author=tuple(args.papers_per_author),
            authors_per_paper=tuple(args.authors_per_paper),
            year_range=tuple(args.years),
            algo_split_rate=args.algo_split_rate,
            n_papers=args.n_papers,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    corpus = generate_synthetic(config)
    out = _out_path(args.out, "corpus.jsonl")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out)
    print(f"wrote {corpus.n_records} records / {corpus.n_mentions} mentions to {out}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    corpus = _load(args.input)
    print(f"records: {corpus.n_records}")
    print(f"mentions: {corpus.n_mentions}")
    print(f"algorithmic ids: {corpus.n_algo_ids}")
    print(f"truth ids: {corpus.n_truth_ids}")
    if args.profiles:
        ppath = Path(args.profiles)
        if not ppath.exists():
            raise UsageError(f"profiles path does not exist: {ppath}")
        try:
            profiles = load_profiles(ppath)
            result = link_truth_ids(corpus, profiles)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        corpus = result.corpus
        print(f"profiles: {result.n_profiles} "
              f"(linked {result.n_profiles_linked}, "
              f"unmatched {result.n_profiles_unmatched})")
        print(f"mentions linked: {result.n_mentions_linked}")
        print(f"conflicts: {result.n_conflicts}")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        save_corpus(corpus, out)
        print(f"wrote {out}")
    return EXIT_OK


def cmd_disambiguate(args) -> int:
    corpus = _load(args.input)
    methods = _parse_methods(args.methods)
    assignments = {m: _assign(corpus, m) for m in methods}
    rows = _assignment_rows(corpus, methods, assignments)
    out = _out_path(args.out, "assignments.csv")
    _write_csv(out, ["paper_id", "pos", "method", "entity_id"], rows,
               {"command": "disambiguate", "methods": args.methods})
    print(f"wrote {len(rows)} assignments to {out}")
    return EXIT_OK


def cmd_accuracy(args) -> int:
    corpus = _load(args.input)
    methods = _parse_methods(args.methods)
    assignments = {m: _assign(corpus, m) for m in methods}
    rows = _accuracy_rows(corpus, methods, assignments)
    out = _out_path(args.out, "accuracy.csv")
    _write_csv(out, ["method", "n_clusters", "no_error", "merged", "split",
                     "merged_and_split"], rows,
               {"command": "accuracy", "methods": args.methods})
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def cmd_netstats(args) -> int:
    corpus = _filtered(_load(args.input), _parse_hyper(args.hyper))
    methods = _parse_methods(args.methods)
    slices = _parse_slices(args.slices, corpus)
    assignments = {m: _assign(corpus, m) for m in methods}
    cache = _DistCache(corpus, assignments)
    rows = _netstats_rows(cache, methods, slices)
    out = _out_path(args.out, "netstats.csv")
    params = {"command": "netstats", "methods": args.methods,
              "slices": args.slices, "hyper": args.hyper}
    _write_csv(out, NETSTATS_HEADER, rows, params)
    print(f"wrote {len(rows)} rows to {out}")
    if args.histograms:
        hist_dir = Path(args.histograms)
        for method in methods:
            for spec in slices:
                if cache.sub(spec).n_records == 0:
                    continue
                dist = cache.dist(method, spec)
                try:
                    fractions = dict(ccdf(dist).points)
                except ValueError:
                    fractions = {}
                hist_rows = [[x, count, _f6(fractions.get(x))]
                             for x, count in sorted(dist.counts.items())]
                _write_csv(hist_dir / f"hist_{method.value}_{spec.label()}.csv",
                           ["x", "count", "ccdf"], hist_rows,
                           {**params, "histogram": [method.value, spec.label()]})
        print(f"wrote histograms to {hist_dir}")
    return EXIT_OK


def cmd_fit(args) -> int:
    corpus = _filtered(_load(args.input), _parse_hyper(args.hyper))
    methods = _parse_methods(args.methods)
    slices = _parse_slices(args.slices, corpus)
    fit_methods = _parse_fit_methods(args.fit_methods)
    assignments = {m: _assign(corpus, m) for m in methods}
    rows = _fit_rows(_DistCache(corpus, assignments), methods, slices,
                     fit_methods, include_isolates=args.include_isolates)
    out = _out_path(args.out, "fits.csv")
    _write_csv(out, FIT_HEADER, rows,
               {"command": "fit", "methods": args.methods,
                "slices": args.slices, "fit_methods": args.fit_methods,
                "hyper": args.hyper, "include_isolates": args.include_isolates})
    print(f"wrote {len(rows)} fits to {out}")
    return EXIT_OK


_PROTOCOL_TOKENS = {"cumulative": "cumulative", "window5": "window:5",
                    "window1": "window:1"}


def cmd_sweep(args) -> int:
    corpus = _filtered(_load(args.input), _parse_hyper(args.hyper))
    methods = _parse_methods(args.methods)
    fit_methods = _parse_fit_methods(args.fit_methods)
    if args.svg and (len(methods) > 1 or fit_methods[0] != CDF_LS):
        raise UsageError("--svg needs exactly one method and cdf_ls first "
                         "(the trajectory plots alpha against R²)")
    assignments = {m: _assign(corpus, m) for m in methods}
    params = {"command": "sweep", "protocol": args.protocol,
              "methods": args.methods, "fit_methods": args.fit_methods,
              "hyper": args.hyper, "seed": args.seed,
              "repeats": args.repeats, "base_fraction": args.base_fraction,
              "increment": args.increment, "start": args.start}

    rows: list[list] = []
    trajectory: list[tuple[float, float]] = []
    if args.protocol == "random":
        base_n = math.ceil(corpus.n_records * args.base_fraction)
        increment = args.increment or max(1, base_n // 100)
        start = args.start or max(increment, base_n // 10)
        for method in methods:
            draws = random_subsets(corpus, base_fraction=args.base_fraction,
                                   increment_records=increment,
                                   repeats=args.repeats, seed=args.seed,
                                   start_records=start)
            for draw in draws:
                label = f"r{draw.repeat}-{draw.size}"
                dist = degree_distribution(draw.corpus, assignments[method])
                for fit_method in fit_methods:
                    try:
                        fit = _fit_distribution(dist, fit_method,
                                                args.include_isolates)
                    except ValueError as exc:
                        _note(f"{method.value}/{label}/{fit_method}: {exc}")
                        continue
                    rows.append(_fit_row(method.value, label, fit))
                    if fit_method == CDF_LS:
                        trajectory.append((fit.alpha, fit.r_squared))
    else:
        slices = _parse_slices(_PROTOCOL_TOKENS[args.protocol], corpus)
        rows = _fit_rows(_DistCache(corpus, assignments), methods, slices,
                         fit_methods, include_isolates=args.include_isolates)
        trajectory = [(float(r[3]), float(r[4])) for r in rows
                      if r[2] == CDF_LS and r[4] != ""]
    out = _out_path(args.out, f"sweep_{args.protocol}.csv")
    _write_csv(out, FIT_HEADER, rows, params)
    print(f"wrote {len(rows)} fits to {out}")
    if args.svg:
        svg = trajectory_svg(trajectory,
                             title=f"{methods[0].value} {args.protocol}",
                             x_label="alpha", y_label="R^2")
        Path(args.svg).parent.mkdir(parents=True, exist_ok=True)
        Path(args.svg).write_text(svg, encoding="utf-8")
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    corpus = _load(args.input)
    ratios = _parse_ratios(args.ratios)
    try:
        result = error_sweep(corpus, args.kind, ratios, args.seed,
                             baseline_method=Method(args.baseline),
                             target_key=Method(args.key))
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    rows = _simulate_rows(result)
    out = _out_path(args.out, f"simulate_{args.kind}.csv")
    _write_csv(out, SIM_HEADER, rows,
               {"command": "simulate", "kind": args.kind, "key": args.key,
                "baseline": args.baseline, "ratios": args.ratios,
                "seed": args.seed})
    print(f"wrote {len(rows)} rows to {out}")
    if args.svg:
        shown = filter_for_plot(result) if args.plot_filter else result
        if not shown.points:
            _note("every point was filtered out; no SVG written")
        else:
            svg = trajectory_svg(
                [(p.fit.alpha, p.fit.r_squared) for p in shown.points],
                title=f"{args.kind} errors ({args.key} key)",
                x_label="alpha", y_label="R^2")
            Path(args.svg).parent.mkdir(parents=True, exist_ok=True)
            Path(args.svg).write_text(svg, encoding="utf-8")
            print(f"wrote {args.svg}")
    return EXIT_OK


# -------------------------------------------------------------- run command

_RUN_OUTPUTS = ("netstats", "fits", "assignments", "accuracy", "simulate")


def _parse_simulation(raw: dict) -> tuple[str, list[float], Method, Method]:
    """Validate the manifest's "simulation" block for the simulate output."""
    spec = raw.get("simulation")
    if not isinstance(spec, dict):
        raise _manifest_error(
            "simulation", 'required (an object) when outputs include "simulate"')
    kind = spec.get("kind")
    if kind not in (MERGE, SPLIT):
        raise _manifest_error("simulation.kind", f"must be {MERGE!r} or {SPLIT!r}")
    ratio_spec = spec.get("ratios", "0.01:1.0:0.01")
    try:
        if isinstance(ratio_spec, str):
            ratios = _parse_ratios(ratio_spec)
        elif isinstance(ratio_spec, list) and all(
                isinstance(r, (int, float)) and not isinstance(r, bool)
                for r in ratio_spec):
            ratios = _check_ratio_schedule([float(r) for r in ratio_spec])
        else:
            raise UsageError("must be a schedule string or a list of numbers")
    except UsageError as exc:
        raise _manifest_error("simulation.ratios", str(exc)) from exc
    try:
        baseline = Method(spec.get("baseline", "algorithmic"))
        key = Method(spec.get("key", "aini"))
    except ValueError as exc:
        raise _manifest_error("simulation", str(exc)) from exc
    return kind, ratios, baseline, key


def _manifest_params(raw: dict) -> dict:
    """Digest input for run outputs: the manifest minus filesystem paths."""
    params = {k: v for k, v in raw.items() if k != "output_dir"}
    source = dict(params.get("source", {}))
    for key in ("input", "profiles"):
        if key in source:
            source[key] = Path(source[key]).name
    params["source"] = source
    return params


def _manifest_error(field: str, problem: str) -> UsageError:
    return UsageError(f"manifest: {field}: {problem}")


def run_manifest(raw: dict, manifest_dir: Path, out_dir: str | None) -> int:
    """Validate a pipeline manifest up front, then execute its stages."""
    if not isinstance(raw, dict):
        raise UsageError("manifest: top level must be a JSON object")
    if "seed" not in raw:
        raise _manifest_error("seed", "required (explicit seeds only)")
    if not isinstance(raw["seed"], int):
        raise _manifest_error("seed", "must be an integer")
    seed = raw["seed"]

    source = raw.get("source")
    if not isinstance(source, dict) or not ({"generate", "input"} & source.keys()):
        raise _manifest_error("source", 'need {"generate": {...}} or {"input": path}')

    method_tokens = raw.get("methods", ["aini", "fini"])
    if not isinstance(method_tokens, list) or not all(isinstance(t, str) for t in method_tokens):
        raise _manifest_error("methods", "must be a list of method names")
    methods = _parse_methods(",".join(method_tokens))
    hyper_token = raw.get("hyper_filter")
    if hyper_token is not None and not isinstance(hyper_token, str):
        raise _manifest_error("hyper_filter", "must be a policy string")
    hyper = _parse_hyper(hyper_token)
    slice_tokens = raw.get("slices", ["all"])
    if not isinstance(slice_tokens, list) or not all(isinstance(t, str) for t in slice_tokens):
        raise _manifest_error("slices", "must be a list of slice tokens")
    fit_tokens = raw.get("fit_methods", [CDF_LS])
    if not isinstance(fit_tokens, list) or not all(isinstance(t, str) for t in fit_tokens):
        raise _manifest_error("fit_methods", "must be a list of fit method names")
    fit_methods = _parse_fit_methods(",".join(fit_tokens))
    outputs = raw.get("outputs", ["netstats", "fits"])
    if not isinstance(outputs, list):
        raise _manifest_error("outputs", "must be a list")
    for name in outputs:
        if name not in _RUN_OUTPUTS:
            raise _manifest_error("outputs", f"unknown output {name!r} "
                                  f"(choose from {', '.join(_RUN_OUTPUTS)})")
    simulation = _parse_simulation(raw) if "simulate" in outputs else None

    resolved_out = Path(out_dir or raw.get("output_dir")
                        or os.environ.get("ANDNET_OUT", "."))
    params = _manifest_params(raw)

    stage = "source"
    try:
        if "generate" in source:
            try:
                config = SyntheticConfig(seed=seed, **source["generate"])
            except (TypeError, ValueError) as exc:
                raise _manifest_error("source.generate", str(exc)) from exc
            corpus = generate_synthetic(config)
        else:
            corpus = _load(str(manifest_dir / source["input"]))
            if "profiles" in source:
                profiles = load_profiles(manifest_dir / source["profiles"])
                corpus = link_truth_ids(corpus, profiles).corpus
        print(f"stage source: {corpus.n_records} records")

        stage = "hyper_filter"
        corpus = _filtered(corpus, hyper)

        stage = "disambiguate"
        assignments = {m: _assign(corpus, m) for m in methods}

        stage = "slices"
        slices = _parse_slices(",".join(slice_tokens), corpus)

        written = []
        cache = _DistCache(corpus, assignments)
        for name in outputs:
            stage = name
            filename = f"{name}.csv"
            if name == "netstats":
                rows = _netstats_rows(cache, methods, slices)
                header = NETSTATS_HEADER
            elif name == "fits":
                rows = _fit_rows(cache, methods, slices, fit_methods)
                header = FIT_HEADER
            elif name == "assignments":
                rows = _assignment_rows(corpus, methods, assignments)
                header = ["paper_id", "pos", "method", "entity_id"]
            elif name == "simulate":
                kind, ratios, sim_baseline, sim_key = simulation
                result = error_sweep(corpus, kind, ratios, seed,
                                     baseline_method=sim_baseline,
                                     target_key=sim_key)
                rows = _simulate_rows(result)
                header = SIM_HEADER
                filename = f"simulate_{kind}.csv"
            else:
                rows = _accuracy_rows(corpus, methods, assignments)
                header = ["method", "n_clusters", "no_error", "merged", "split",
                          "merged_and_split"]
            path = resolved_out / filename
            _write_csv(path, header, rows, params)
            written.append(path)
            print(f"stage {name}: wrote {len(rows)} rows to {path}")
    except (UsageError, DataError) as exc:
        raise type(exc)(f"stage {stage}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"stage {stage}: {exc}") from exc
    return EXIT_OK


def cmd_run(args) -> int:
    mpath = Path(args.manifest)
    if not mpath.exists():
        raise UsageError(f"manifest does not exist: {mpath}")
    try:
        raw = json.loads(mpath.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest: invalid JSON: {exc}") from exc
    return run_manifest(raw, mpath.parent, args.out_dir)


# ------------------------------------------------------------------ parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="andnet",
        description="Author-identity effects on coauthorship degree "
                    "distributions: disambiguation, accuracy, network "
                    "statistics, power-law fits, and error simulation.",
    )
    parser.add_argument("--version", action="version",
                        version=f"andnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded synthetic corpus")
    p.add_argument("--out", help="output JSONL path (default: $ANDNET_OUT/corpus.jsonl)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-authors", type=int, default=1000)
    p.add_argument("--n-papers", type=int, default=None)
    p.add_argument("--surname-pool", type=int, default=200)
    p.add_argument("--surname-skew", type=float, default=1.0)
    p.add_argument("--forename-pool", type=int, default=120)
    p.add_argument("--middle-prob", type=float, default=0.35)
    p.add_argument("--papers-per-author", type=int, nargs=2, default=[1, 4],
                   metavar=("LO", "HI"))
    p.add_argument("--authors-per-paper", type=int, nargs=2, default=[1, 5],
                   metavar=("LO", "HI"))
    p.add_argument("--years", type=int, nargs=2, default=[1991, 2010],
                   metavar=("FIRST", "LAST"))
    p.add_argument("--algo-split-rate", type=float, default=0.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ingest", help="load, validate, and optionally truth-link a corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--profiles", help="profile JSONL for truth linking")
    p.add_argument("--out", help="write the (linked) corpus back out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("disambiguate", help="emit per-mention entity assignments")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--methods", default="aini,fini")
    p.add_argument("--out")
    p.set_defaults(func=cmd_disambiguate)

    p = sub.add_parser("accuracy", help="cluster-level error ratios against truth")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--methods", default="aini,fini")
    p.add_argument("--out")
    p.set_defaults(func=cmd_accuracy)

    p = sub.add_parser("netstats", help="degree-distribution statistics per slice")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--methods", default="aini,fini")
    p.add_argument("--slices", default="all")
    p.add_argument("--hyper", default="none")
    p.add_argument("--histograms", help="directory for per-slice degree histograms")
    p.add_argument("--out")
    p.set_defaults(func=cmd_netstats)

    p = sub.add_parser("fit", help="power-law fits per method and slice")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--methods", default="aini,fini")
    p.add_argument("--slices", default="all")
    p.add_argument("--hyper", default="none")
    p.add_argument("--fit-methods", default=f"{CDF_LS},{MLE_KS}")
    p.add_argument("--include-isolates", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", help="fit a whole slicing protocol")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--protocol", required=True,
                   choices=["cumulative", "window5", "window1", "random"])
    p.add_argument("--methods", default="aini,fini")
    p.add_argument("--hyper", default="none")
    p.add_argument("--fit-methods", default=CDF_LS)
    p.add_argument("--include-isolates", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="random protocol only")
    p.add_argument("--repeats", type=int, default=10, help="random protocol only")
    p.add_argument("--base-fraction", type=float, default=0.10,
                   help="random protocol only")
    p.add_argument("--increment", type=int, default=None,
                   help="subset size step in records (default: 1%% of base)")
    p.add_argument("--start", type=int, default=None,
                   help="smallest subset size (default: 10%% of base)")
    p.add_argument("--svg", help="write an arrowed (alpha, R²) trajectory")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="inject merge/split identity errors")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", required=True, choices=[MERGE, SPLIT])
    p.add_argument("--key", default="aini", choices=["aini", "fini"],
                   help="target key for merge errors")
    p.add_argument("--baseline", default="algorithmic",
                   choices=["algorithmic", "truth"])
    p.add_argument("--ratios", default="0.01:1.0:0.01")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plot-filter", action="store_true",
                   help="drop alpha > 6 or R² < 0.90 points from the SVG "
                        "(never from the CSV)")
    p.add_argument("--svg")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="execute a JSON pipeline manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", help="override the manifest output directory")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
