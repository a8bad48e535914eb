"""CSV parsing and multi-panel CI-band rendering.

The expected CSV is the simulation sweep output; panels and curves are
picked by column groups, so the same renderer covers the main grid (panels
complexity x incentive scheme, curves by norm weight) and the sensitivity
sweeps (panels by complexity, curves by the swept variable plus the
no-norms benchmark).
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

CSV_COLUMNS = ("scenario_id", "K", "C", "S", "rho", "alpha", "beta", "w1", "w2",
               "D", "N_S", "t", "mean", "ci_low", "ci_high", "n_runs")

_INT_COLS = {"K", "C", "S", "D", "N_S", "t", "n_runs"}
_FLOAT_COLS = {"rho", "alpha", "beta", "w1", "w2", "mean", "ci_low", "ci_high"}

FIGURES = ("main", "degree", "rho", "nsoc")


class ParseError(ValueError):
    """The CSV does not conform to the documented sweep schema."""


@dataclass
class SeriesGroup:
    """One curve: a scenario's period series with its confidence band."""

    scenario_id: str
    meta: dict
    t: np.ndarray
    mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray


@dataclass
class FigureSpec:
    """What to render: which columns split panels, which split curves."""

    csv_path: Path
    panel_cols: tuple
    curve_cols: tuple
    out_path: Path
    shade_ci: bool = True
    xlabel: str = "Time steps"
    ylabel: str = "Overall performance"
    title: str = ""


_PRESETS = {
    # columns -> (panel grouping, curve grouping)
    "main": (("KCS", "alpha"), ("w2",)),
    "degree": (("KCS",), ("w2", "D")),
    "rho": (("KCS",), ("w2", "rho")),
    "nsoc": (("KCS",), ("w2", "N_S")),
}


def figure_spec(figure, csv_path, out_path, shade_ci=True):
    """The shipped grouping preset for one of the known figures."""
    if figure not in _PRESETS:
        raise ParseError(f"unknown figure {figure!r}, expected one of {FIGURES}")
    panel_cols, curve_cols = _PRESETS[figure]
    return FigureSpec(csv_path=Path(csv_path), panel_cols=panel_cols,
                      curve_cols=curve_cols, out_path=Path(out_path),
                      shade_ci=shade_ci)


def read_series(csv_path):
    """Parse a sweep CSV into one SeriesGroup per scenario, t ascending.

    Raises ParseError naming the missing column or the malformed cell.
    """
    path = Path(csv_path)
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in CSV_COLUMNS:
            if col not in header:
                raise ParseError(f"{path}: missing column '{col}'")
        rows = {}
        for lineno, row in enumerate(reader, start=2):
            parsed = {}
            for col in CSV_COLUMNS:
                raw = row.get(col)
                if raw is None or raw == "":
                    raise ParseError(f"{path}:{lineno}: missing value for '{col}'")
                try:
                    if col in _INT_COLS:
                        parsed[col] = int(raw)
                    elif col in _FLOAT_COLS:
                        parsed[col] = float(raw)
                    else:
                        parsed[col] = raw
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: bad value {raw!r} "
                                     f"for '{col}'") from exc
            rows.setdefault(parsed["scenario_id"], []).append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    groups = []
    for sid, entries in rows.items():
        entries.sort(key=lambda r: r["t"])
        meta = {k: entries[0][k] for k in CSV_COLUMNS if k not in
                ("t", "mean", "ci_low", "ci_high")}
        meta["KCS"] = f"K={meta['K']}, C={meta['C']}, S={meta['S']}"
        groups.append(SeriesGroup(
            scenario_id=sid, meta=meta,
            t=np.array([r["t"] for r in entries]),
            mean=np.array([r["mean"] for r in entries]),
            ci_low=np.array([r["ci_low"] for r in entries]),
            ci_high=np.array([r["ci_high"] for r in entries])))
    return groups


def _group_key(group, cols):
    return tuple(group.meta[c] for c in cols)


def _curve_label(cols, key):
    names = {"w2": "$w_2$", "alpha": r"$\alpha$", "rho": r"$\rho$",
             "D": "D", "N_S": "$N_S$"}
    return ", ".join(f"{names.get(c, c)}={v:g}" if isinstance(v, float)
                     else f"{names.get(c, c)}={v}" for c, v in zip(cols, key))


def render(spec):
    """Render the figure described by `spec` and save it to spec.out_path.

    Panels form a grid: columns are the distinct values of the first panel
    column (ascending), rows the remaining panel-key combinations (numeric
    keys descending, so e.g. alpha=1 sits on top).  Within a panel one curve
    per curve-key, CI band shaded when enabled.  Returns the figure.
    """
    groups = read_series(spec.csv_path)
    for col in tuple(spec.panel_cols) + tuple(spec.curve_cols):
        if groups and col not in groups[0].meta:
            raise ParseError(f"unknown grouping column '{col}'")

    col_vals = sorted({g.meta[spec.panel_cols[0]] for g in groups})
    row_cols = tuple(spec.panel_cols[1:])
    if row_cols:
        row_vals = sorted({_group_key(g, row_cols) for g in groups}, reverse=True)
    else:
        row_vals = [()]
    n_rows, n_cols = len(row_vals), len(col_vals)

    fig, axes = plt.subplots(n_rows, n_cols, squeeze=False, sharex=True,
                             figsize=(4.2 * n_cols, 2.6 * n_rows))
    for ir, rkey in enumerate(row_vals):
        for ic, cval in enumerate(col_vals):
            ax = axes[ir][ic]
            panel = [g for g in groups
                     if g.meta[spec.panel_cols[0]] == cval
                     and _group_key(g, row_cols) == rkey]
            panel.sort(key=lambda g: _group_key(g, spec.curve_cols))
            for g in panel:
                label = _curve_label(spec.curve_cols, _group_key(g, spec.curve_cols))
                line, = ax.plot(g.t, g.mean, lw=1.1, label=label)
                if spec.shade_ci:
                    ax.fill_between(g.t, g.ci_low, g.ci_high, alpha=0.25,
                                    color=line.get_color(), lw=0)
            title = str(cval)
            if rkey:
                title += "  |  " + _curve_label(row_cols, rkey)
            ax.set_title(title, fontsize=9)
            if ir == n_rows - 1:
                ax.set_xlabel(spec.xlabel)
            if ic == 0:
                ax.set_ylabel(spec.ylabel)
            if ir == 0 and ic == n_cols - 1:
                ax.legend(fontsize=7, frameon=False)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path)
    return fig
