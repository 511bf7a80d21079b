"""CSV and SVG output.

All CSVs are UTF-8 with ``\\n`` line endings; floats are written with
``repr`` so they read back bit-for-bit.  SVGs are drawn with matplotlib
under fixed settings (hash salt, no date metadata) so identical inputs give
identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from .analysis import AnnulusRegion, GridResult, RegionReport, Status  # noqa: E402
from .matrixlab import LabReport, ResidualReport  # noqa: E402

REGION_HEADER = ("channel", "inner", "outer", "inner_closed", "outer_closed")
POINTS_HEADER = ("re", "im")
GRID_HEADER = ("r", "theta", "status", "witness")
RESIDUAL_HEADER = ("N", "residual", "observed_ratio")
FINLAB_HEADER = ("trial", "max_excess", "boundary_violations", "lemma24_violations")

SVG_SIZE = 800
STATUS_COLORS = {
    Status.IN.value: "#1b7837",
    Status.EXCLUDED.value: "#b2182b",
    Status.UNDETERMINED.value: "#f1a340",
}


def _num(x: float) -> str:
    return repr(float(x))


def _flag(b: Optional[bool]) -> str:
    return "undetermined" if b is None else ("true" if b else "false")


def _parse_flag(s: str) -> Optional[bool]:
    return {"true": True, "false": False, "undetermined": None}[s]


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def region_csv(report: RegionReport) -> str:
    rows = []
    for i, reg in enumerate(report.shift_regions):
        flags = ("empty", "empty") if reg.empty else (_flag(reg.inner_closed), _flag(reg.outer_closed))
        rows.append((str(i), _num(reg.inner_radius), _num(reg.outer_radius)) + flags)
    return _csv_text(REGION_HEADER, rows)


def points_csv(report: RegionReport) -> str:
    return _csv_text(POINTS_HEADER, [(_num(z.real), _num(z.imag)) for z in report.discrete_points])


def grid_csv(result: GridResult) -> str:
    return _csv_text(GRID_HEADER, [(_num(r.r), _num(r.theta), r.status.value, _num(r.witness)) for r in result.rows])


def residual_csv(report: ResidualReport) -> str:
    rows = [(str(n), _num(res), _num(q)) for n, res, q in zip(report.levels, report.residual_norms, report.observed_ratios)]
    return _csv_text(RESIDUAL_HEADER, rows)


def finlab_csv(report: LabReport) -> str:
    rows = [(str(r.trial), _num(r.max_excess), str(r.boundary_violations), str(r.positivity_violations)) for r in report.rows]
    return _csv_text(FINLAB_HEADER, rows)


def write_text(path: str | Path, text: str) -> Path:
    p = Path(path)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return p


def _read_rows(path: str | Path, header: Sequence[str]) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != tuple(header):
            raise ValueError(f"{path}: expected header {','.join(header)}")
        return list(reader)


def read_region_csv(path) -> list[AnnulusRegion]:
    out = []
    for row in _read_rows(path, REGION_HEADER):
        inner, outer = float(row["inner"]), float(row["outer"])
        if row["inner_closed"] == "empty":
            out.append(AnnulusRegion(inner, outer, False, False, empty=True))
            continue
        ic, oc = _parse_flag(row["inner_closed"]), _parse_flag(row["outer_closed"])
        out.append(AnnulusRegion(inner, outer, ic, oc, inner == outer and bool(ic or oc)))
    return out


def read_points_csv(path) -> list[complex]:
    return [complex(float(r["re"]), float(r["im"])) for r in _read_rows(path, POINTS_HEADER)]


@dataclass(frozen=True)
class GridPoint:
    r: float
    theta: float
    status: str


def read_grid_csv(path) -> list[GridPoint]:
    return [GridPoint(float(r["r"]), float(r["theta"]), r["status"]) for r in _read_rows(path, GRID_HEADER)]


# -- SVG -----------------------------------------------------------------------

def _header_comment(extent: float) -> str:
    s = SVG_SIZE / 2
    return (
        "<!-- spread-spectra plot: lambda = r*exp(i*theta) is drawn at "
        f"x = {s:g}*(1 + r*cos(theta)/{extent!r}), y = {s:g}*(1 - r*sin(theta)/{extent!r}) "
        f"in the {SVG_SIZE}x{SVG_SIZE} viewBox. Circles: solid = boundary included, "
        "dashed = excluded, dotted = undetermined. -->\n"
    )


def _style(closed: Optional[bool]) -> str:
    return "-" if closed else ("--" if closed is False else ":")


def render_svg(regions: Sequence[AnnulusRegion], points: Sequence[complex] = (),
               grid: Sequence[GridPoint] = ()) -> str:
    """Predicted regions, diagonal eigenvalues and classified grid points as an SVG document."""
    radii = [reg.outer_radius for reg in regions] + [abs(z) for z in points] + [g.r for g in grid]
    extent = 1.1 * max([1.0] + radii)
    with plt.rc_context({"svg.hashsalt": "spread-spectra", "svg.fonttype": "path"}):
        fig = plt.figure(figsize=(SVG_SIZE / 72, SVG_SIZE / 72), dpi=72)
        ax = fig.add_axes((0, 0, 1, 1))
        ax.set_xlim(-extent, extent)
        ax.set_ylim(-extent, extent)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.axhline(0, color="#cccccc", lw=0.5, zorder=0)
        ax.axvline(0, color="#cccccc", lw=0.5, zorder=0)
        for status, color in STATUS_COLORS.items():
            pts = [g for g in grid if g.status == status]
            if pts:
                xs = [g.r * math.cos(g.theta) for g in pts]
                ys = [g.r * math.sin(g.theta) for g in pts]
                ax.scatter(xs, ys, s=6, c=color, linewidths=0, gid=f"grid-{status}", zorder=1)
        for i, reg in enumerate(regions):
            if reg.empty:
                continue
            if reg.degenerate_circle:
                circles = [("circle", reg.inner_radius, True)]
            else:
                circles = [("inner", reg.inner_radius, reg.inner_closed), ("outer", reg.outer_radius, reg.outer_closed)]
            for label, r, closed in circles:
                if r <= 0:
                    continue
                ax.add_patch(Circle((0, 0), r, fill=False, lw=1.5, ls=_style(closed), color="#2166ac",
                                    gid=f"circle-{i}-{label}", zorder=2))
        for j, z in enumerate(points):
            ax.plot([z.real], [z.imag], marker="o", ms=7, color="#762a83", ls="none", gid=f"point-{j}", zorder=3)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    svg = buf.getvalue()
    head, sep, rest = svg.partition("?>\n")
    if not sep:
        return _header_comment(extent) + svg
    return head + sep + _header_comment(extent) + rest


def region_svg(report: RegionReport, grid: GridResult | None = None) -> str:
    pts = () if grid is None else [GridPoint(r.r, r.theta, r.status.value) for r in grid.rows]
    return render_svg(report.shift_regions, report.discrete_points, pts)
