"""End-to-end CLI behaviour: artifacts, manifests, exit codes, determinism."""

import csv
import json

import pytest

from millnet.cli import main
from millnet.synthgen import write_outputs

from conftest import small_synth_config
from millnet.synthgen import generate


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    """Synthetic corpus files shared by all CLI tests in this module."""
    path = tmp_path_factory.mktemp("corpus")
    write_outputs(path, *generate(small_synth_config()))
    return path


def run(*argv):
    return main(list(argv))


def read_manifest(outdir):
    with open(outdir / "run_manifest.json") as fh:
        return json.load(fh)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_ingest(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("ingest", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--out", str(out)) == 0
    summary = json.loads((out / "ingest_summary.json").read_text())
    assert summary["n_publications"] > 10000
    assert summary["year_range"] == [1996, 2015]
    manifest = read_manifest(out)
    assert manifest["subcommand"] == "ingest"
    assert "ingest_summary.json" in manifest["artifacts"]
    assert len(manifest["inputs"]) == 1


def test_shapes_columns(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("shapes", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--out", str(out)) == 0
    rows = read_csv(out / "shapes.csv")
    assert list(rows[0]) == ["researcher_id", "year", "total_nodes",
                             "total_edges", "clustering_coefficient",
                             "shape_frequency", "bin"]
    for row in rows[:50]:
        assert 0.0 <= float(row["clustering_coefficient"]) <= 1.0
        assert int(row["bin"]) == len(row["shape_frequency"]) - 1


def test_detect_and_summary(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("detect", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--out", str(out)) == 0
    rows = read_csv(out / "cohort.csv")
    assert list(rows[0]) == ["researcher_id", "passed_filters", "in_lcc"]
    summary = json.loads((out / "detect_summary.json").read_text())
    assert summary["n_candidates"] > 0
    assert summary["n_lcc"] == summary["component_sizes"][0]
    in_lcc = sum(int(r["in_lcc"]) for r in rows)
    assert in_lcc == summary["n_lcc"]


def test_detect_is_deterministic(corpus_dir, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run("detect", "--corpus",
                   str(corpus_dir / "publications.jsonl"),
                   "--year", "2014", "--out", str(out)) == 0
        outs.append(out)
    for fname in ("cohort.csv", "detect_summary.json", "run_manifest.json"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_trend(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("trend", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--from-year", "2009", "--to-year", "2014",
               "--out", str(out)) == 0
    rows = read_csv(out / "trend.csv")
    assert [r["year"] for r in rows] == [str(y) for y in range(2009, 2015)]
    assert float(rows[-1]["pct_lcc"]) > 0.0


def test_nullmodel(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("nullmodel", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--n-samples", "10", "--seed", "5",
               "--out", str(out)) == 0
    rows = read_csv(out / "nullmodel.csv")
    assert rows[0]["label"] == "observed"
    assert len(rows) == 11
    summary = json.loads((out / "nullmodel_summary.json").read_text())
    assert summary["seed"] == 5
    assert summary["observed_density"] > summary["mean_density"]


def test_validate(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("validate", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--flags", str(corpus_dir / "flags.csv"),
               "--baseline-samples", "5", "--out", str(out)) == 0
    metrics = {r["metric"]: float(r["value"])
               for r in read_csv(out / "validate.csv")}
    assert metrics["pct_direct"] <= metrics["pct_one_degree"]
    assert metrics["pct_direct"] > metrics["baseline_mean_pct_direct"]


def test_reviews(corpus_dir, tmp_path):
    out = tmp_path / "o"
    assert run("reviews", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--reviews", str(corpus_dir / "reviews.csv"),
               "--out", str(out)) == 0
    summary = json.loads((out / "reviews_summary.json").read_text())
    assert summary["n_high_reviewers"] > 0
    assert (out / "reviewers.csv").exists()
    assert (out / "journal_ratios.csv").exists()


@pytest.mark.parametrize("kind,artifact", [
    ("publisher", "report_publisher.csv"),
    ("journal", "report_journal.csv"),
    ("country", "report_country.csv"),
    ("institution", "report_institution.csv"),
])
def test_report_kinds(corpus_dir, tmp_path, kind, artifact):
    out = tmp_path / "o"
    assert run("report", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--kind", kind, "--out", str(out)) == 0
    assert (out / artifact).exists()
    manifest = read_manifest(out)
    assert manifest["params"]["kind"] == kind


def test_synth_evaluate_round_trip(tmp_path):
    cfg = tmp_path / "synth.toml"
    cfg.write_text("""
[synth]
seed = 11
years = [1996, 2015]

[synth.organic]
new_researchers_per_year = 400
warmup_researchers_per_year = 150
warmup_until = 2000
hubs_per_year = 15

[synth.mill]
start_year = 2011
papers_per_customer = 25

[synth.mill.customers_per_year]
2011 = 30
2012 = 45
2013 = 60
2014 = 80
2015 = 90
""")
    gen = tmp_path / "gen"
    assert run("synth", "--config", str(cfg), "--out", str(gen)) == 0
    out = tmp_path / "eval"
    assert run("evaluate", "--corpus", str(gen / "publications.jsonl"),
               "--year", "2014", "--truth", str(gen / "ground_truth.json"),
               "--out", str(out)) == 0
    result = json.loads((out / "evaluation.json").read_text())
    assert result["precision"] >= 0.9
    assert result["recall"] >= 0.8


def test_config_flag_precedence(corpus_dir, tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("[detector]\nmin_pubs_per_year = 30\n")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    corpus = str(corpus_dir / "publications.jsonl")
    assert run("detect", "--corpus", corpus, "--year", "2014",
               "--config", str(cfg), "--out", str(out1)) == 0
    assert read_manifest(out1)["params"]["params"]["min_pubs_per_year"] == 30
    assert run("detect", "--corpus", corpus, "--year", "2014",
               "--config", str(cfg), "--min-pubs-per-year", "20",
               "--out", str(out2)) == 0
    assert read_manifest(out2)["params"]["params"]["min_pubs_per_year"] == 20


# -- failure modes ----------------------------------------------------------------

def test_missing_corpus_is_usage_error(tmp_path):
    out = tmp_path / "o"
    assert run("detect", "--corpus", str(tmp_path / "nope.jsonl"),
               "--year", "2014", "--out", str(out)) == 1
    assert not out.exists() or not list(out.glob("*"))


def test_unknown_subcommand_is_usage_error():
    assert run("frobnicate") == 1


def test_bad_data_is_data_error_with_cleanup(corpus_dir, tmp_path):
    broken = tmp_path / "broken.jsonl"
    source = (corpus_dir / "publications.jsonl").read_text().splitlines()
    broken.write_text("\n".join(source[:5] + ["{not json"]))
    out = tmp_path / "o"
    assert run("detect", "--corpus", str(broken), "--year", "2014",
               "--out", str(out)) == 2
    assert not out.exists() or not list(out.glob("*"))


def test_year_outside_corpus_is_internal_invariant(corpus_dir, tmp_path):
    out = tmp_path / "o"
    code = run("detect", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "1890", "--out", str(out))
    assert code == 3
    assert not out.exists() or not list(out.glob("*"))


def test_bad_config_is_usage_error(corpus_dir, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[detector\n")
    assert run("detect", "--corpus", str(corpus_dir / "publications.jsonl"),
               "--year", "2014", "--config", str(cfg),
               "--out", str(tmp_path / "o")) == 1
