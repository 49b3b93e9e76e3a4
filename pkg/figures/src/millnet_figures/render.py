"""Render millnet CSV artifacts as static PNG figures.

Each figure kind is bound to the documented column contract of one CLI
artifact. Rendering reads only the CSV; nothing here touches pipeline
internals, so the figures can be produced on any machine that has the
artifact files. Styling is fixed so reruns overwrite the same bytes.
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Patch

KINDS = ("cohort_trend", "density_histogram", "publisher_volume",
         "publisher_pct", "journal_exposure_hist")

# columns each kind needs from its input CSV
REQUIRED_COLUMNS = {
    "cohort_trend": ("year", "pct_candidates", "pct_lcc"),
    "density_histogram": ("label", "density"),
    "publisher_volume": ("publisher_id", "year", "implicated_pubs"),
    "publisher_pct": ("publisher_id", "year", "pct_implicated"),
    "journal_exposure_hist": ("journal_id", "pct_implicated"),
}

# exposure bands for the journal histogram, as (upper bound %, color)
BAND_COLORS = ((2.0, "tab:green"), (4.0, "tab:orange"),
               (math.inf, "tab:red"))
BAND_LABELS = ("< 2%", "2-4%", ">= 4%")


class FigureError(Exception):
    """The input CSV does not satisfy the figure's data contract."""


@dataclass
class FigureSpec:
    kind: str
    input_csv: str
    output_path: str
    title: str | None = None
    dpi: int = 120
    figsize: tuple = (8.0, 5.0)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind: {self.kind}")


def load_rows(path, required):
    """Read a CSV and check the header for the columns a figure needs."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise FigureError(f"{path}: empty file, no header row")
            missing = [col for col in required
                       if col not in reader.fieldnames]
            if missing:
                raise FigureError(
                    f"{path}: missing column(s) {', '.join(missing)}")
            rows = list(reader)
    except OSError as exc:
        raise FigureError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FigureError(f"{path}: no data rows")
    return rows


def _floats(rows, column, path):
    try:
        return [float(row[column]) for row in rows]
    except ValueError as exc:
        raise FigureError(f"{path}: non-numeric value in {column}") from exc


def band_color(pct: float) -> str:
    for bound, color in BAND_COLORS:
        if pct < bound:
            return color
    return BAND_COLORS[-1][1]


def _render_cohort_trend(ax, rows, path):
    """Candidate and main-component shares as overlapping filled areas."""
    data = sorted(zip(_floats(rows, "year", path),
                      _floats(rows, "pct_candidates", path),
                      _floats(rows, "pct_lcc", path)))
    years = [d[0] for d in data]
    # overlapping areas from a shared zero baseline, not stacked
    ax.fill_between(years, [d[1] for d in data], color="tab:blue",
                    alpha=0.45, label="candidates")
    ax.fill_between(years, [d[2] for d in data], color="tab:red",
                    alpha=0.55, label="main component")
    ax.set_xlabel("year")
    ax.set_ylabel("% of early-career researchers")
    ax.legend(loc="upper left")
    return "suspicious cohort share by year"


def _render_density_histogram(ax, rows, path):
    """Baseline sample densities, with the observed value as a marker line."""
    densities = _floats(rows, "density", path)
    samples = [d for row, d in zip(rows, densities)
               if row["label"] != "observed"]
    observed = [d for row, d in zip(rows, densities)
                if row["label"] == "observed"]
    if not samples:
        raise FigureError(f"{path}: no baseline sample rows")
    ax.hist(samples, bins=30, color="tab:gray", edgecolor="white",
            label="matched random samples")
    if observed:
        ax.axvline(observed[0], color="tab:red", linewidth=2,
                   label="observed cohort")
    ax.set_xlabel("graph density")
    ax.set_ylabel("samples")
    ax.legend(loc="upper right")
    return "cohort density against matched baseline"


def _series_by_entity(rows, value_col, path):
    series = {}
    years = _floats(rows, "year", path)
    values = _floats(rows, value_col, path)
    for row, year, value in zip(rows, years, values):
        series.setdefault(row["publisher_id"], []).append((year, value))
    return {pid: sorted(points) for pid, points in series.items()}


def _render_publisher_lines(ax, rows, path, value_col, ylabel):
    series = _series_by_entity(rows, value_col, path)
    # most exposed publishers first so line colors are stable across reruns
    order = sorted(series, key=lambda p: (-max(v for _, v in series[p]), p))
    for pid in order:
        points = series[pid]
        ax.plot([p[0] for p in points], [p[1] for p in points],
                marker="o", markersize=3, label=pid)
    ax.set_xlabel("year")
    ax.set_ylabel(ylabel)
    if len(order) <= 12:
        ax.legend(loc="upper left", fontsize="small")


def _render_publisher_volume(ax, rows, path):
    _render_publisher_lines(ax, rows, path, "implicated_pubs",
                            "implicated publications")
    return "implicated publication volume by publisher"


def _render_publisher_pct(ax, rows, path):
    _render_publisher_lines(ax, rows, path, "pct_implicated",
                            "% of publications implicated")
    return "implicated publication share by publisher"


def _render_journal_exposure_hist(ax, rows, path):
    """1%-wide exposure bins on a log10 count axis, colored by band."""
    pcts = _floats(rows, "pct_implicated", path)
    n_bins = max(int(math.floor(max(pcts))) + 1, 1)
    counts = [0] * n_bins
    for pct in pcts:
        counts[min(int(math.floor(pct)), n_bins - 1)] += 1
    lefts = list(range(n_bins))
    colors = [band_color(left) for left in lefts]
    ax.bar(lefts, counts, width=1.0, align="edge", color=colors,
           edgecolor="white")
    ax.set_yscale("log")
    ax.set_xlabel("% of journal output implicated (1% bins)")
    ax.set_ylabel("journals (log scale)")
    ax.legend(handles=[Patch(color=c, label=l) for (_, c), l
                       in zip(BAND_COLORS, BAND_LABELS)],
              loc="upper right")
    return "journal exposure histogram"


_RENDERERS = {
    "cohort_trend": _render_cohort_trend,
    "density_histogram": _render_density_histogram,
    "publisher_volume": _render_publisher_volume,
    "publisher_pct": _render_publisher_pct,
    "journal_exposure_hist": _render_journal_exposure_hist,
}


def render(spec: FigureSpec):
    """Render one figure kind from its CSV and write the image.

    Returns the matplotlib Figure so callers (tests, notebooks) can inspect
    axes, scales, and colors; the caller owns closing it.
    """
    rows = load_rows(spec.input_csv, REQUIRED_COLUMNS[spec.kind])
    fig, ax = plt.subplots(figsize=spec.figsize)
    try:
        default_title = _RENDERERS[spec.kind](ax, rows, spec.input_csv)
        ax.set_title(spec.title or default_title)
        fig.tight_layout()
        out = Path(spec.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=spec.dpi)
    except Exception:
        plt.close(fig)
        raise
    return fig
