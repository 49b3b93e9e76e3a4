"""Command-line interface: reproducible pipelines over publication corpora.

Every subcommand reads a corpus (and optional side inputs), writes CSV/JSON
artifacts plus a ``run_manifest.json`` with sha256 checksums, and exits 0 on
success, 1 on usage errors, 2 on data errors, 3 on internal errors.  Options
can come from a TOML config file (``--config``); command-line flags win over
config values.  Outputs are byte-identical across reruns with the same
manifest inputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:          # Python < 3.11
    import tomli as tomllib

from . import __version__
from .analysis import (flaglist_overlap, null_density_baseline,
                       peer_review_overlap, random_publication_baseline)
from .corpus import ingest_publications, load_flaglist, load_peer_reviews
from .detector import (DetectorParams, cohort_trend, filter_bitmasks,
                       suspicious_cohort)
from .errors import DataError
from .graph import all_ego_shapes, build_graph, shape_frequency_table, uniqueness_bin
from .report import (country_profile, institution_review_load,
                     journal_exposure, publisher_profile)
from .synthgen import (SynthConfig, evaluate, generate, load_ground_truth,
                       write_outputs)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

DEFAULT_SEED = 20240101


class UsageError(Exception):
    """Bad invocation: unknown flags, missing files, invalid combinations."""


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise UsageError(message)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _fmt(value):
    """Deterministic CSV cell rendering."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ArtifactSet:
    """Collects output files; on failure removes everything it wrote."""

    _live: list["ArtifactSet"] = []   # sets created by the current invocation

    def __init__(self, outdir: Path):
        self.outdir = outdir
        self.written: list[Path] = []
        outdir.mkdir(parents=True, exist_ok=True)
        ArtifactSet._live.append(self)

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        path = self.outdir / name
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.written.append(path)
        return path

    def write_json(self, name: str, obj) -> Path:
        path = self.outdir / name
        with open(path, "w") as fh:
            fh.write(json.dumps(obj, indent=2, sort_keys=True))
            fh.write("\n")
        self.written.append(path)
        return path

    def adopt(self, path: Path):
        """Track a file written by another helper so it is checksummed."""
        self.written.append(Path(path))

    def finalize(self, subcommand: str, inputs: dict, params: dict):
        manifest = {
            "subcommand": subcommand,
            "version": __version__,
            "inputs": {str(p): _sha256(Path(p)) for p in inputs.values() if p},
            "params": params,
            "artifacts": {p.name: _sha256(p) for p in self.written},
        }
        path = self.outdir / "run_manifest.json"
        with open(path, "w") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True))
            fh.write("\n")

    def discard(self):
        for p in self.written:
            try:
                p.unlink()
            except OSError:
                pass


# -- configuration -------------------------------------------------------------


def _load_config(path) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"invalid TOML in {p}: {exc}") from exc


def _detector_params(config: dict, args) -> DetectorParams:
    """Detector thresholds: defaults, then [detector] config, then flags."""
    section = dict(config.get("detector", {}))
    merged = {
        "rare_shape_max": section.get("rare_shape_max", 10),
        "min_pubs_per_year": section.get("min_pubs_per_year", 20),
        "young_fraction_min": section.get("young_fraction_min", 0.5),
        "lcc_window_years": section.get("lcc_window_years", 2),
        "ego_stages": frozenset(section.get("ego_stages", [1, 2])),
        "collaborator_stages": frozenset(
            section.get("collaborator_stages", [1, 2, 3])),
    }
    for key in ("rare_shape_max", "min_pubs_per_year",
                "young_fraction_min", "lcc_window_years"):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    try:
        return DetectorParams(**merged)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _setting(config: dict, section: str, key: str, flag_value, default):
    """Resolution order: command-line flag, config value, default."""
    if flag_value is not None:
        return flag_value
    return config.get(section, {}).get(key, default)


def _require_file(path, what: str) -> Path:
    if path is None:
        raise UsageError(f"missing required {what} path")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    return p


def _load_corpus(args):
    path = _require_file(args.corpus, "corpus")
    fmt = args.format or ("csv" if path.suffix == ".csv" else "jsonl")
    return ingest_publications(path, fmt), path, fmt


def _outdir(args) -> Path:
    out = args.out or os.environ.get("MILLNET_OUT") or "out"
    return Path(out)


# -- subcommands ---------------------------------------------------------------


def cmd_ingest(args, config):
    corpus, path, fmt = _load_corpus(args)
    arts = ArtifactSet(_outdir(args))
    doc_types = {}
    for rec in corpus.publications.values():
        doc_types[rec.doc_type] = doc_types.get(rec.doc_type, 0) + 1
    lo, hi = corpus.year_range
    arts.write_json("ingest_summary.json", {
        "n_publications": len(corpus.publications),
        "n_researchers": len(corpus.profiles),
        "year_range": [lo, hi],
        "doc_types": doc_types,
    })
    arts.finalize("ingest", {"corpus": path}, {"format": fmt})
    return arts


def cmd_shapes(args, config):
    corpus, path, fmt = _load_corpus(args)
    year = args.year
    mode = _setting(config, "analysis", "freq_mode", args.freq_mode, "per-year")
    if mode not in ("per-year", "global"):
        raise UsageError(f"unknown freq mode: {mode}")
    shapes = all_ego_shapes(build_graph(corpus, (year, year)))
    if mode == "per-year":
        freq = shape_frequency_table(corpus, year, shapes)
    else:
        lo, hi = corpus.year_range
        freq = shape_frequency_table(corpus, lo)
        for y in range(lo + 1, hi + 1):
            freq += shape_frequency_table(corpus, y)
    rows = []
    for rid in sorted(shapes):
        shape = shapes[rid]
        count = freq[shape.key]
        rows.append((rid, year, shape.key.total_nodes, shape.key.total_edges,
                     float(shape.clustering_coefficient), count,
                     uniqueness_bin(count)))
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("shapes.csv",
                   ["researcher_id", "year", "total_nodes", "total_edges",
                    "clustering_coefficient", "shape_frequency", "bin"], rows)
    arts.write_json("shapes_summary.json", {
        "year": year,
        "freq_mode": mode,
        "n_researchers": len(rows),
        "n_distinct_shapes": len({(r[2], r[3]) for r in rows}),
    })
    arts.finalize("shapes", {"corpus": path},
                  {"format": fmt, "year": year, "freq_mode": mode})
    return arts


def cmd_detect(args, config):
    corpus, path, fmt = _load_corpus(args)
    params = _detector_params(config, args)
    year = args.year
    masks = filter_bitmasks(corpus, year, params)
    cohort = suspicious_cohort(corpus, year, params)
    rows = [(rid, mask, int(rid in cohort.lcc_members))
            for rid, mask in sorted(masks.items()) if mask]
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("cohort.csv",
                   ["researcher_id", "passed_filters", "in_lcc"], rows)
    arts.write_json("detect_summary.json", {
        "year": year,
        "window": list(cohort.window),
        "n_nonzero_bitmask": len(rows),
        "n_candidates": len(cohort.candidates),
        "n_lcc": len(cohort.lcc_members),
        "component_sizes": cohort.component_sizes,
        "params": _params_dict(params),
    })
    arts.finalize("detect", {"corpus": path},
                  {"format": fmt, "year": year, "params": _params_dict(params)})
    return arts


def _params_dict(params: DetectorParams) -> dict:
    d = asdict(params)
    d["ego_stages"] = sorted(d["ego_stages"])
    d["collaborator_stages"] = sorted(d["collaborator_stages"])
    return d


def cmd_trend(args, config):
    corpus, path, fmt = _load_corpus(args)
    params = _detector_params(config, args)
    lo, hi = corpus.year_range
    first = args.from_year if args.from_year is not None else lo
    last = args.to_year if args.to_year is not None else hi - params.lcc_window_years + 1
    if first > last:
        raise UsageError(f"empty year range {first}..{last}")
    table = cohort_trend(corpus, range(first, last + 1), params)
    header = ["year", "n_stage12", "n_candidates", "n_lcc",
              "pct_candidates", "pct_lcc"]
    rows = [tuple(row[k] for k in header) for row in table]
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("trend.csv", header, rows)
    arts.write_json("trend_summary.json", {
        "years": [first, last],
        "peak_pct_lcc": max((row["pct_lcc"] for row in table), default=0.0),
        "params": _params_dict(params),
    })
    arts.finalize("trend", {"corpus": path},
                  {"format": fmt, "years": [first, last],
                   "params": _params_dict(params)})
    return arts


def cmd_nullmodel(args, config):
    corpus, path, fmt = _load_corpus(args)
    params = _detector_params(config, args)
    year = args.year
    seed = _setting(config, "analysis", "seed", args.seed, DEFAULT_SEED)
    n_samples = _setting(config, "analysis", "n_samples", args.n_samples, 100)
    c_max = _setting(config, "analysis", "c_max", args.c_max, 0.4)
    min_pubs = _setting(config, "analysis", "min_pubs", args.min_pubs, 20)
    invert_c = args.invert_c or config.get("analysis", {}).get("invert_c", False)
    cohort = suspicious_cohort(corpus, year, params)
    result = null_density_baseline(corpus, year, cohort, n_samples, seed,
                                   c_max=c_max, min_pubs=min_pubs,
                                   invert_c=invert_c)
    rows = [("observed", result.observed_density, result.observed_lcc_ratio)]
    rows += [(f"sample_{i:04d}", d, r)
             for i, (d, r) in enumerate(zip(result.densities, result.lcc_ratios))]
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("nullmodel.csv", ["label", "density", "lcc_ratio"], rows)
    arts.write_json("nullmodel_summary.json", {
        "year": year,
        "seed": seed,
        "n_samples": n_samples,
        "sample_size": result.sample_size,
        "pool_size": result.pool_size,
        "c_max": c_max,
        "min_pubs": min_pubs,
        "invert_c": bool(invert_c),
        "observed_density": result.observed_density,
        "mean_density": result.mean_density,
        "sd_density": result.sd_density,
        "observed_lcc_ratio": result.observed_lcc_ratio,
        "mean_lcc_ratio": result.mean_lcc_ratio,
        "sd_lcc_ratio": result.sd_lcc_ratio,
        "params": _params_dict(params),
    })
    arts.finalize("nullmodel", {"corpus": path},
                  {"format": fmt, "year": year, "seed": seed,
                   "n_samples": n_samples, "c_max": c_max,
                   "min_pubs": min_pubs, "invert_c": bool(invert_c),
                   "params": _params_dict(params)})
    return arts


def cmd_validate(args, config):
    corpus, path, fmt = _load_corpus(args)
    flags_path = _require_file(args.flags, "flag list")
    params = _detector_params(config, args)
    year = args.year
    seed = _setting(config, "analysis", "seed", args.seed, DEFAULT_SEED)
    n_baseline = _setting(config, "analysis", "baseline_samples",
                          args.baseline_samples, 100)
    flaglist = load_flaglist(flags_path)
    cohort = suspicious_cohort(corpus, year, params)
    window = cohort.window
    report = flaglist_overlap(corpus, [cohort], flaglist, window)
    summary = asdict(report)
    summary["window"] = list(report.window)
    if n_baseline > 0:
        baseline = random_publication_baseline(
            corpus, [cohort], report.n_flagged_eligible, window,
            n_baseline, seed)
        summary["baseline"] = baseline
    metrics = [
        ("n_flagged_eligible", report.n_flagged_eligible),
        ("pct_direct", report.pct_direct),
        ("pct_one_degree", report.pct_one_degree),
        ("pct_researchers_direct", report.pct_researchers_direct),
        ("pct_researchers_connected", report.pct_researchers_connected),
    ]
    for side in ("matched_stats", "unmatched_stats"):
        for key, value in sorted(summary[side].items()):
            metrics.append((f"{side[:-6]}_{key}", value))
    if n_baseline > 0:
        for key in ("mean_pct_direct", "sd_pct_direct",
                    "mean_pct_one_degree", "sd_pct_one_degree"):
            metrics.append((f"baseline_{key}", summary["baseline"][key]))
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("validate.csv", ["metric", "value"], metrics)
    arts.write_json("validate_summary.json", {
        **summary,
        "year": year,
        "seed": seed,
        "params": _params_dict(params),
    })
    arts.finalize("validate", {"corpus": path, "flags": flags_path},
                  {"format": fmt, "year": year, "seed": seed,
                   "baseline_samples": n_baseline,
                   "params": _params_dict(params)})
    return arts


def cmd_reviews(args, config):
    corpus, path, fmt = _load_corpus(args)
    reviews_path = _require_file(args.reviews, "reviews")
    params = _detector_params(config, args)
    year = args.year
    min_reviews = _setting(config, "analysis", "min_reviews",
                           args.min_reviews, 250)
    span = _setting(config, "analysis", "review_window_years",
                    args.review_window_years, 3)
    records = load_peer_reviews(reviews_path)
    cohort = suspicious_cohort(corpus, year, params)
    window = (cohort.window[1] - span + 1, cohort.window[1])
    result = peer_review_overlap(records, corpus, [cohort], window,
                                 min_reviews=min_reviews)
    members = cohort.lcc_members
    reviewer_rows = [(rid, int(rid in members)) for rid in result["high_reviewers"]]
    journal_rows = [(j["journal_id"], j["reviews"], j["publications"],
                     j["ratio"], j["flagged"]) for j in result["journal_ratios"]]
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("reviewers.csv", ["researcher_id", "in_cohort"], reviewer_rows)
    arts.write_csv("journal_ratios.csv",
                   ["journal_id", "reviews", "publications", "ratio", "flagged"],
                   journal_rows)
    summary = {k: v for k, v in result.items() if k != "journal_ratios"}
    summary["year"] = year
    summary["params"] = _params_dict(params)
    arts.write_json("reviews_summary.json", summary)
    arts.finalize("reviews", {"corpus": path, "reviews": reviews_path},
                  {"format": fmt, "year": year, "min_reviews": min_reviews,
                   "review_window_years": span, "params": _params_dict(params)})
    return arts


REPORT_KINDS = ("publisher", "journal", "country", "institution")


def cmd_report(args, config):
    corpus, path, fmt = _load_corpus(args)
    params = _detector_params(config, args)
    kind = args.kind
    if kind not in REPORT_KINDS:
        raise UsageError(f"unknown report kind: {kind}")
    year = args.year
    arts = ArtifactSet(_outdir(args))
    run_params = {"format": fmt, "kind": kind, "year": year,
                  "params": _params_dict(params)}

    if kind == "publisher":
        lo, hi = corpus.year_range
        first = args.from_year if args.from_year is not None else year
        last = args.to_year if args.to_year is not None else year
        if first > last:
            raise UsageError(f"empty year range {first}..{last}")
        years = range(first, last + 1)
        cohorts = {y: suspicious_cohort(corpus, y, params) for y in years}
        rows = [(r.entity_id, r.year, r.total_pubs, r.implicated_pubs,
                 r.pct_implicated)
                for r in publisher_profile(corpus, cohorts, years)]
        arts.write_csv("report_publisher.csv",
                       ["publisher_id", "year", "total_pubs",
                        "implicated_pubs", "pct_implicated"], rows)
        arts.write_json("report_publisher_summary.json", {
            "years": [first, last],
            "n_publishers": len({r[0] for r in rows}),
        })
        run_params["years"] = [first, last]
    elif kind == "journal":
        cohort = suspicious_cohort(corpus, year, params)
        min_pubs = args.journal_min_pubs if args.journal_min_pubs is not None else 50
        exposure, histogram = journal_exposure(corpus, cohort, year, min_pubs)
        rows = [(r.entity_id, r.year, r.total_pubs, r.implicated_pubs,
                 r.pct_implicated) for r in exposure]
        arts.write_csv("report_journal.csv",
                       ["journal_id", "year", "total_pubs",
                        "implicated_pubs", "pct_implicated"], rows)
        arts.write_json("report_journal_summary.json", {
            "year": year,
            "min_pubs": min_pubs,
            "band_histogram": dict(histogram),
            "n_journals": len(rows),
        })
        run_params["journal_min_pubs"] = min_pubs
    elif kind == "country":
        cohort = suspicious_cohort(corpus, year, params)
        table = country_profile(corpus, cohort)
        header = ["country", "year", "n_cohort_researchers",
                  "n_stage12_workforce", "pct_of_stage12_workforce",
                  "total_articles", "implicated_articles",
                  "pct_articles_implicated", "n_institutions"]
        rows = [tuple(row[k] for k in header) for row in table]
        arts.write_csv("report_country.csv", header, rows)
        arts.write_json("report_country_summary.json", {
            "year": year,
            "n_countries": len(rows),
        })
    else:
        cohort = suspicious_cohort(corpus, year, params)
        min_res = (args.institution_min_researchers
                   if args.institution_min_researchers is not None else 3000)
        table = institution_review_load(corpus, cohort, year, min_res)
        header = ["country", "year", "n_institutions",
                  "avg_connected_per_institution", "avg_junior_connected"]
        rows = [tuple(row[k] for k in header) for row in table]
        arts.write_csv("report_institution.csv", header, rows)
        arts.write_json("report_institution_summary.json", {
            "year": year,
            "min_researchers": min_res,
            "n_countries": len(rows),
        })
        run_params["institution_min_researchers"] = min_res

    arts.finalize("report", {"corpus": path}, run_params)
    return arts


def cmd_synth(args, config):
    synth_cfg = SynthConfig.from_dict(config.get("synth", {}))
    if args.seed is not None:
        synth_cfg.seed = args.seed
    corpus, truth, flags, reviews = generate(synth_cfg)
    outdir = _outdir(args)
    arts = ArtifactSet(outdir)
    for path in write_outputs(outdir, corpus, truth, flags, reviews).values():
        arts.adopt(path)
    arts.write_json("synth_summary.json", {
        "seed": synth_cfg.seed,
        "years": list(synth_cfg.years),
        "n_researchers": len(corpus.profiles),
        "n_publications": len(corpus.publications),
        "n_mill_researchers": len(truth.mill_researchers),
        "n_mill_papers": len(truth.mill_papers),
        "n_flagged": len(flags.pub_ids),
        "n_review_records": len(reviews),
    })
    inputs = {"config": Path(args.config)} if args.config else {}
    arts.finalize("synth", inputs, {"seed": synth_cfg.seed,
                                    "years": list(synth_cfg.years)})
    return arts


def cmd_evaluate(args, config):
    corpus, path, fmt = _load_corpus(args)
    truth_path = _require_file(args.truth, "ground truth")
    params = _detector_params(config, args)
    year = args.year
    truth = load_ground_truth(truth_path)
    cohort = suspicious_cohort(corpus, year, params)
    min_mill = args.min_mill_papers if args.min_mill_papers is not None else 20
    result = evaluate(corpus, cohort, truth, min_mill_papers=min_mill,
                      use_lcc=not args.no_lcc)
    arts = ArtifactSet(_outdir(args))
    arts.write_csv("evaluation.csv", ["metric", "value"],
                   sorted(result.items()))
    arts.write_json("evaluation.json", {
        **result,
        "use_lcc": not args.no_lcc,
        "params": _params_dict(params),
    })
    arts.finalize("evaluate", {"corpus": path, "truth": truth_path},
                  {"format": fmt, "year": year, "min_mill_papers": min_mill,
                   "use_lcc": not args.no_lcc, "params": _params_dict(params)})
    return arts


# -- argument parsing ----------------------------------------------------------


def _add_common(sub, corpus=True, year=True):
    sub.add_argument("--config", help="TOML config file; flags override it")
    sub.add_argument("--out", help="output directory (env MILLNET_OUT)")
    sub.add_argument("--workers", type=int,
                     default=int(os.environ.get("MILLNET_WORKERS", "0")) or None,
                     help="worker hint; results are worker-independent")
    if corpus:
        sub.add_argument("--corpus", help="publications file (JSONL or CSV)")
        sub.add_argument("--format", choices=("jsonl", "csv"),
                         help="corpus format (default: by file extension)")
    if year:
        sub.add_argument("--year", type=int, required=True,
                         help="analysis year")


def _add_detector_flags(sub):
    sub.add_argument("--rare-shape-max", dest="rare_shape_max", type=int)
    sub.add_argument("--min-pubs-per-year", dest="min_pubs_per_year", type=int)
    sub.add_argument("--young-fraction-min", dest="young_fraction_min", type=float)
    sub.add_argument("--lcc-window-years", dest="lcc_window_years", type=int)


def build_parser() -> _Parser:
    parser = _Parser(prog="millnet",
                     description="co-authorship fingerprint analysis pipelines")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("ingest", help="validate a corpus and summarize it")
    _add_common(p, year=False)
    p.set_defaults(func=cmd_ingest)

    p = subs.add_parser("shapes", help="ego network shapes and rarity bins")
    _add_common(p)
    p.add_argument("--freq-mode", choices=("per-year", "global"))
    p.set_defaults(func=cmd_shapes)

    p = subs.add_parser("detect", help="filter cascade and cohort extraction")
    _add_common(p)
    _add_detector_flags(p)
    p.set_defaults(func=cmd_detect)

    p = subs.add_parser("trend", help="per-year cohort trend table")
    _add_common(p, year=False)
    _add_detector_flags(p)
    p.add_argument("--from-year", dest="from_year", type=int)
    p.add_argument("--to-year", dest="to_year", type=int)
    p.set_defaults(func=cmd_trend)

    p = subs.add_parser("nullmodel", help="matched random-sample baselines")
    _add_common(p)
    _add_detector_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-samples", dest="n_samples", type=int)
    p.add_argument("--c-max", dest="c_max", type=float)
    p.add_argument("--min-pubs", dest="min_pubs", type=int)
    p.add_argument("--invert-c", dest="invert_c", action="store_true",
                   help="sample the high-clustering pool instead")
    p.set_defaults(func=cmd_nullmodel)

    p = subs.add_parser("validate", help="flag-list overlap statistics")
    _add_common(p)
    _add_detector_flags(p)
    p.add_argument("--flags", help="flag list CSV (pub_id, flag_type)")
    p.add_argument("--seed", type=int)
    p.add_argument("--baseline-samples", dest="baseline_samples", type=int)
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("reviews", help="peer-review proximity analysis")
    _add_common(p)
    _add_detector_flags(p)
    p.add_argument("--reviews", help="review CSV (researcher_id, year, journal_id, review_count)")
    p.add_argument("--min-reviews", dest="min_reviews", type=int)
    p.add_argument("--review-window-years", dest="review_window_years", type=int)
    p.set_defaults(func=cmd_reviews)

    p = subs.add_parser("report", help="publisher/journal/country/institution exposure")
    _add_common(p)
    _add_detector_flags(p)
    p.add_argument("--kind", required=True, choices=REPORT_KINDS)
    p.add_argument("--from-year", dest="from_year", type=int,
                   help="publisher report: first year")
    p.add_argument("--to-year", dest="to_year", type=int,
                   help="publisher report: last year")
    p.add_argument("--journal-min-pubs", dest="journal_min_pubs", type=int)
    p.add_argument("--institution-min-researchers",
                   dest="institution_min_researchers", type=int)
    p.set_defaults(func=cmd_report)

    p = subs.add_parser("synth", help="generate a labeled synthetic corpus")
    _add_common(p, corpus=False, year=False)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = subs.add_parser("evaluate", help="score a cohort against ground truth")
    _add_common(p)
    _add_detector_flags(p)
    p.add_argument("--truth", help="ground-truth JSON from synth")
    p.add_argument("--min-mill-papers", dest="min_mill_papers", type=int)
    p.add_argument("--no-lcc", dest="no_lcc", action="store_true",
                   help="score all candidates, not just the main component")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"millnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ArtifactSet._live.clear()

    def _cleanup():
        for arts in ArtifactSet._live:
            arts.discard()

    try:
        config = _load_config(getattr(args, "config", None))
        args.func(args, config)
        return EXIT_OK
    except UsageError as exc:
        _cleanup()
        print(f"millnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        _cleanup()
        print(f"millnet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:   # noqa: BLE001 - CLI boundary
        _cleanup()
        print(f"millnet: internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
