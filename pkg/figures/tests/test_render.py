"""Rendering tests for the five figure kinds against the bundled fixtures."""

import csv
from pathlib import Path

import matplotlib.pyplot as plt
import pytest
from matplotlib.colors import to_rgba

from millnet_figures import FigureError, FigureSpec, KINDS, render
from millnet_figures.cli import main as cli_main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIXTURE_FOR_KIND = {
    "cohort_trend": "trend.csv",
    "density_histogram": "nullmodel.csv",
    "publisher_volume": "report_publisher.csv",
    "publisher_pct": "report_publisher.csv",
    "journal_exposure_hist": "report_journal.csv",
}

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def render_fixture(kind, tmp_path, fixture=None):
    out = tmp_path / f"{kind}.png"
    fig = render(FigureSpec(kind, str(fixture or FIXTURES / FIXTURE_FOR_KIND[kind]),
                            str(out)))
    return fig, out


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.mark.parametrize("kind", KINDS)
def test_renders_every_kind_from_fixtures(kind, tmp_path):
    fig, out = render_fixture(kind, tmp_path)
    plt.close(fig)
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_trend_areas_overlap_not_stacked(tmp_path):
    fig, _ = render_fixture("cohort_trend", tmp_path)
    ax = fig.axes[0]
    # two independent filled areas, both anchored at zero (overlapping)
    fills = [c for c in ax.collections if c.get_paths()]
    assert len(fills) == 2
    for fill in fills:
        ys = fill.get_paths()[0].vertices[:, 1]
        assert ys.min() == 0.0
    plt.close(fig)


def test_density_histogram_marks_observed_right_of_baseline(tmp_path):
    with open(FIXTURES / "nullmodel.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    observed = next(float(r["density"]) for r in rows
                    if r["label"] == "observed")
    samples = [float(r["density"]) for r in rows if r["label"] != "observed"]
    assert max(samples) < observed  # baseline mass sits left of the marker

    fig, _ = render_fixture("density_histogram", tmp_path)
    ax = fig.axes[0]
    marker = [ln for ln in ax.lines if ln.get_xdata()[0] == observed]
    assert marker, "observed-density marker line missing"
    plt.close(fig)


def test_journal_histogram_log_axis_and_band_colors(tmp_path):
    src = write_csv(tmp_path / "journals.csv",
                    ["journal_id", "year", "total_pubs", "implicated_pubs",
                     "pct_implicated"],
                    [("j_a", 2014, 100, 1, 1.0),
                     ("j_b", 2014, 100, 3, 3.0),
                     ("j_c", 2014, 100, 5, 5.0),
                     ("j_d", 2014, 100, 5, 5.4)])
    fig, out = render_fixture("journal_exposure_hist", tmp_path, fixture=src)
    ax = fig.axes[0]
    assert ax.get_yscale() == "log"
    color_at = {p.get_x(): p.get_facecolor() for p in ax.patches
                if p.get_width() == 1.0}
    assert color_at[1.0] == to_rgba("tab:green")
    assert color_at[3.0] == to_rgba("tab:orange")
    assert color_at[5.0] == to_rgba("tab:red")
    assert out.read_bytes()[:8] == PNG_MAGIC
    plt.close(fig)


def test_journal_histogram_fixture_uses_log_axis(tmp_path):
    fig, _ = render_fixture("journal_exposure_hist", tmp_path)
    assert fig.axes[0].get_yscale() == "log"
    plt.close(fig)


def test_journal_histogram_degenerate_all_zero(tmp_path):
    src = write_csv(tmp_path / "zeros.csv",
                    ["journal_id", "pct_implicated"],
                    [(f"j{i}", 0.0) for i in range(7)])
    fig, _ = render_fixture("journal_exposure_hist", tmp_path, fixture=src)
    ax = fig.axes[0]
    bars = [p for p in ax.patches if p.get_width() == 1.0]
    assert len(bars) == 1 and bars[0].get_x() == 0.0
    assert bars[0].get_height() == 7
    plt.close(fig)


def test_missing_column_error_names_it(tmp_path):
    src = write_csv(tmp_path / "bad.csv", ["journal_id", "year"],
                    [("j1", 2014)])
    with pytest.raises(FigureError, match="pct_implicated"):
        render(FigureSpec("journal_exposure_hist", str(src),
                          str(tmp_path / "o.png")))


def test_empty_csv_rejected(tmp_path):
    src = write_csv(tmp_path / "empty.csv",
                    ["label", "density", "lcc_ratio"], [])
    with pytest.raises(FigureError, match="no data rows"):
        render(FigureSpec("density_histogram", str(src),
                          str(tmp_path / "o.png")))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec("pie_chart", "x.csv", "y.png")


def test_cli_success_and_exit_codes(tmp_path):
    out = tmp_path / "trend.png"
    assert cli_main(["cohort_trend", str(FIXTURES / "trend.csv"),
                     str(out)]) == 0
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert cli_main(["cohort_trend"]) == 1                       # usage
    assert cli_main(["pie_chart", "a.csv", "b.png"]) == 1        # usage
    assert cli_main(["cohort_trend", str(tmp_path / "nope.csv"),
                     str(tmp_path / "x.png")]) == 2              # data
    bad = write_csv(tmp_path / "bad.csv", ["year"], [(2014,)])
    assert cli_main(["cohort_trend", str(bad),
                     str(tmp_path / "x.png")]) == 2              # schema


def test_rerun_overwrites_identically(tmp_path):
    out = tmp_path / "jrn.png"
    for _ in range(2):
        fig = render(FigureSpec("journal_exposure_hist",
                                str(FIXTURES / "report_journal.csv"),
                                str(out)))
        plt.close(fig)
    first = out.read_bytes()
    fig = render(FigureSpec("journal_exposure_hist",
                            str(FIXTURES / "report_journal.csv"), str(out)))
    plt.close(fig)
    assert out.read_bytes() == first
