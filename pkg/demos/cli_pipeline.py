"""
Drive the full CLI pipeline into ./demo_out.

Mirrors a realistic workflow against file-based artifacts:
1. synth     - write a labeled corpus (publications, flags, reviews, truth)
2. detect    - extract the suspicious cohort for one year
3. trend     - per-year cohort shares (input for the trend figure)
4. nullmodel - matched random-sample density baseline
5. validate  - overlap with the bundled integrity flag list
6. report    - journal exposure table (input for the histogram figure)

Every step writes a run_manifest.json with input/artifact checksums, so a
rerun with the same inputs is byte-for-byte reproducible.
"""

import pathlib
import sys

from millnet.cli import main

OUT = pathlib.Path("demo_out")
YEAR = "2014"

config = OUT / "synth.toml"
OUT.mkdir(exist_ok=True)
config.write_text("""[synth]
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

corpus = str(OUT / "gen" / "publications.jsonl")
steps = [
    ["synth", "--config", str(config), "--out", str(OUT / "gen")],
    ["detect", "--corpus", corpus, "--year", YEAR,
     "--out", str(OUT / "detect")],
    ["trend", "--corpus", corpus, "--from-year", "2005", "--to-year", "2014",
     "--out", str(OUT / "trend")],
    ["nullmodel", "--corpus", corpus, "--year", YEAR,
     "--n-samples", "50", "--seed", "42", "--out", str(OUT / "nullmodel")],
    ["validate", "--corpus", corpus, "--year", YEAR,
     "--flags", str(OUT / "gen" / "flags.csv"),
     "--baseline-samples", "50", "--seed", "9",
     "--out", str(OUT / "validate")],
    ["report", "--corpus", corpus, "--kind", "journal", "--year", YEAR,
     "--journal-min-pubs", "20", "--out", str(OUT / "report")],
]

for argv in steps:
    print(f"$ millnet {' '.join(argv)}")
    code = main(argv)
    if code != 0:
        print(f"step failed with exit code {code}", file=sys.stderr)
        sys.exit(code)

print("\nartifacts:")
for path in sorted(OUT.rglob("*")):
    if path.is_file():
        print(f"  {path}")

print("\nrender figures from the CSVs (requires the figures package):")
print(f"  figures cohort_trend {OUT}/trend/trend.csv trend.png")
print(f"  figures density_histogram {OUT}/nullmodel/nullmodel.csv density.png")
print(f"  figures journal_exposure_hist {OUT}/report/report_journal.csv journals.png")
