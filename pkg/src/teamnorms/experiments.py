"""Scenario grids, replication, CI aggregation, and CSV emission.

A grid is the cross product of swept parameter lists over a fixed base
scenario.  Every cell gets a canonical string id and a base seed derived
from (grid base seed, id hash), so results are a pure function of the grid
and seed, independent of cell ordering, worker counts, or how sub-grids are
merged.  Aggregation reports the per-period mean with a normal-approximation
confidence interval (99.9% by default, matching a two-sided z of 3.2905).
"""

import hashlib
from dataclasses import dataclass, replace

import numpy as np
import yaml
from scipy.stats import norm

from .engine import ScenarioParams, replicate
from .errors import ParameterError
from .team import DecisionWeights, IncentiveScheme

CSV_COLUMNS = ("scenario_id", "K", "C", "S", "rho", "alpha", "beta", "w1", "w2",
               "D", "N_S", "t", "mean", "ci_low", "ci_high", "n_runs")

FIGURES = ("main", "degree", "rho", "nsoc")

# Sensitivity sweeps are reconstructions (the source figures do not list the
# exact values); see README.
DEGREE_SWEEP = (0, 1, 2, 3)
NSOC_SWEEP = (0, 1, 2, 3, 4)
RHO_SWEEP = (0.0, 0.3, 0.6, 0.9, 0.95)

MAIN_COMPLEXITY = ((2, 0, 0), (2, 2, 2))
MAIN_SCHEMES = ((1.0, 0.0), (0.75, 0.25), (0.25, 0.75))
MAIN_WEIGHTS = ((1.0, 0.0), (0.7, 0.3), (0.5, 0.5))


def _fmt(x):
    """Short canonical decimal for ids and CSV parameter columns."""
    return format(float(x), "g")


def scenario_id(params):
    """Canonical cell key, joinable by the plotting layer."""
    return (f"K{params.k}C{params.c}S{params.s}"
            f"_a{_fmt(params.scheme.alpha)}_w{_fmt(params.weights.w2)}"
            f"_d{params.d}_ns{params.n_s}_rho{_fmt(params.rho)}")


def _cell_seed(base_seed, sid):
    """Stable 64-bit per-cell seed from the base seed and the cell id."""
    digest = hashlib.sha256(sid.encode("ascii")).digest()
    ss = np.random.SeedSequence(entropy=(int(base_seed), int.from_bytes(digest[:8], "big")))
    return int(ss.generate_state(2, np.uint64)[0])


@dataclass
class AggregateSeries:
    """Per-period mean and confidence band over runs."""

    mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    n_runs: int


@dataclass
class CellResult:
    scenario_id: str
    params: ScenarioParams
    aggregate: AggregateSeries


def aggregate(matrix, confidence=0.999):
    """Column means of an (R, T) run matrix with mean +- z*sd/sqrt(R) bands."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ParameterError("aggregation needs an (R, T) matrix with R >= 2")
    if not 0.0 < confidence < 1.0:
        raise ParameterError(f"confidence={confidence} outside (0, 1)")
    r = matrix.shape[0]
    mean = matrix.mean(axis=0)
    sd = matrix.std(axis=0, ddof=1)
    z = float(norm.ppf(0.5 + confidence / 2.0))
    half = z * sd / np.sqrt(r)
    return AggregateSeries(mean=mean, ci_low=mean - half, ci_high=mean + half, n_runs=r)


@dataclass
class ScenarioGrid:
    """Cross product of swept values over a fixed base scenario.

    Unset sweep lists default to the base scenario's value.  `runs` is the
    replication count per cell and `confidence` the two-sided CI level.
    """

    base: ScenarioParams
    complexity: tuple = None   # (k, c, s) triples
    schemes: tuple = None      # (alpha, beta) pairs
    weights: tuple = None      # (w1, w2) pairs
    degrees: tuple = None
    n_social: tuple = None
    rhos: tuple = None
    runs: int = 200
    confidence: float = 0.999

    def __post_init__(self):
        b = self.base

        def given(value, default):
            return default if value is None else tuple(value)

        self.complexity = tuple((int(k), int(c), int(s)) for k, c, s in
                                given(self.complexity, ((b.k, b.c, b.s),)))
        self.schemes = tuple((float(a), float(x)) for a, x in
                             given(self.schemes, ((b.scheme.alpha, b.scheme.beta),)))
        self.weights = tuple((float(w1), float(w2)) for w1, w2 in
                             given(self.weights, ((b.weights.w1, b.weights.w2),)))
        self.degrees = tuple(int(d) for d in given(self.degrees, (b.d,)))
        self.n_social = tuple(int(v) for v in given(self.n_social, (b.n_s,)))
        self.rhos = tuple(float(v) for v in given(self.rhos, (b.rho,)))
        if self.runs < 1:
            raise ParameterError(f"runs={self.runs} must be at least 1")
        for name in ("complexity", "schemes", "weights", "degrees", "n_social", "rhos"):
            if not getattr(self, name):
                raise ParameterError(f"swept list {name} is empty")
        self.cells()  # validate every cell eagerly

    def cells(self):
        """(scenario_id, params) per cell, in declaration order."""
        out = []
        for k, c, s in self.complexity:
            for a, bta in self.schemes:
                for w1, w2 in self.weights:
                    for d in self.degrees:
                        for n_s in self.n_social:
                            for rho in self.rhos:
                                cell = replace(self.base, k=k, c=c, s=s,
                                               scheme=IncentiveScheme(a, bta),
                                               weights=DecisionWeights(w1, w2),
                                               d=d, n_s=n_s, rho=rho)
                                sid = scenario_id(cell)
                                out.append((sid, replace(cell, seed=_cell_seed(self.base.seed, sid))))
        return out


def run_grid(grid, workers=None, progress=None):
    """Aggregate every cell of the grid; output independent of worker count.

    Returns {scenario_id: CellResult} in declaration order.  A failing cell
    aborts the sweep with the offending cell named.
    """
    cells = grid.cells()
    results = {}
    for idx, (sid, params) in enumerate(cells):
        if progress is not None:
            progress(f"[{idx + 1}/{len(cells)}] {sid}: {grid.runs} runs")
        try:
            matrix = replicate(params, grid.runs, workers=workers)
        except Exception as exc:
            raise RuntimeError(f"cell {sid} failed: {exc}") from exc
        results[sid] = CellResult(scenario_id=sid, params=params,
                                  aggregate=aggregate(matrix, grid.confidence))
    return results


def write_csv(results, path):
    """One row per (cell, period): cells in declaration order, t ascending.

    Statistics carry 12 significant digits, so a re-run of the same grid
    overwrites the file with identical bytes.
    """
    if not results:
        raise ParameterError("no results to write")
    cells = results.values() if isinstance(results, dict) else list(results)
    lines = [",".join(CSV_COLUMNS)]
    for cell in cells:
        p = cell.params
        agg = cell.aggregate
        prefix = (f"{cell.scenario_id},{p.k},{p.c},{p.s},{_fmt(p.rho)},"
                  f"{_fmt(p.scheme.alpha)},{_fmt(p.scheme.beta)},"
                  f"{_fmt(p.weights.w1)},{_fmt(p.weights.w2)},{p.d},{p.n_s}")
        for t in range(agg.mean.size):
            lines.append(f"{prefix},{t + 1},{agg.mean[t]:.12g},"
                         f"{agg.ci_low[t]:.12g},{agg.ci_high[t]:.12g},{agg.n_runs}")
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write {path}: {exc}") from exc


def figure_grids(figure, base, runs=200, confidence=0.999):
    """Grids backing one of the shipped figures.

    `main` is the full default grid (2 complexities x 3 incentive schemes x
    3 norm weights).  The sensitivity figures pair a no-norms benchmark cell
    (w=(1,0), base values) with a sweep at alpha=1, w=(0.5,0.5) over the
    reconstructed value lists above, for both complexity levels.
    """
    if figure not in FIGURES:
        raise ParameterError(f"unknown figure {figure!r}, expected one of {FIGURES}")
    kw = dict(runs=runs, confidence=confidence)
    if figure == "main":
        return [ScenarioGrid(base, complexity=MAIN_COMPLEXITY, schemes=MAIN_SCHEMES,
                             weights=MAIN_WEIGHTS, **kw)]
    benchmark = ScenarioGrid(base, complexity=MAIN_COMPLEXITY,
                             schemes=((1.0, 0.0),), weights=((1.0, 0.0),), **kw)
    sweep_kw = dict(complexity=MAIN_COMPLEXITY, schemes=((1.0, 0.0),),
                    weights=((0.5, 0.5),), **kw)
    if figure == "degree":
        sweep = ScenarioGrid(base, degrees=DEGREE_SWEEP, **sweep_kw)
    elif figure == "nsoc":
        sweep = ScenarioGrid(base, n_social=NSOC_SWEEP, **sweep_kw)
    else:
        sweep = ScenarioGrid(base, rhos=RHO_SWEEP, **sweep_kw)
    return [benchmark, sweep]


def run_figure(figure, base, runs=200, confidence=0.999, workers=None, progress=None):
    """Run every grid behind a figure and merge the results."""
    merged = {}
    for grid in figure_grids(figure, base, runs, confidence):
        merged.update(run_grid(grid, workers=workers, progress=progress))
    return merged


_PARAM_KEYS = {"m", "p", "n", "k", "c", "s", "rho", "t_l", "n_s", "d",
               "t_max", "scheme", "weights", "seed"}
_SWEEP_KEYS = {"complexity", "scheme", "weights", "d", "n_s", "rho"}
_TOP_KEYS = {"params", "runs", "confidence", "sweep"}


def _pair(value, what):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParameterError(f"{what} must be a [x, y] pair, got {value!r}")
    return float(value[0]), float(value[1])


def load_config(path):
    """Parse a YAML scenario/grid config into a ScenarioGrid.

    The file mirrors the ScenarioParams field names under `params` (with
    `scheme: [alpha, beta]` and `weights: [w1, w2]` pairs) plus optional
    `runs`, `confidence`, and a `sweep` section of value lists; a template
    ships at configs/scenario.yaml.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ParameterError(f"malformed YAML in {path}: {exc}") from exc
    if not isinstance(raw, dict) or "params" not in raw:
        raise ParameterError(f"{path}: expected a mapping with a 'params' section")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ParameterError(f"{path}: unknown top-level keys {sorted(unknown)}")
    pd = dict(raw["params"] or {})
    unknown = set(pd) - _PARAM_KEYS
    if unknown:
        raise ParameterError(f"{path}: unknown params keys {sorted(unknown)}")
    if "scheme" in pd:
        pd["scheme"] = IncentiveScheme(*_pair(pd["scheme"], "params.scheme"))
    if "weights" in pd:
        pd["weights"] = DecisionWeights(*_pair(pd["weights"], "params.weights"))
    base = ScenarioParams(**pd)

    sweep = dict(raw.get("sweep") or {})
    unknown = set(sweep) - _SWEEP_KEYS
    if unknown:
        raise ParameterError(f"{path}: unknown sweep keys {sorted(unknown)}")

    def triples(values):
        out = []
        for v in values:
            if not isinstance(v, (list, tuple)) or len(v) != 3:
                raise ParameterError(f"sweep.complexity entries must be [k, c, s], got {v!r}")
            out.append(tuple(int(x) for x in v))
        return tuple(out)

    return ScenarioGrid(
        base,
        complexity=triples(sweep["complexity"]) if "complexity" in sweep else None,
        schemes=tuple(_pair(v, "sweep.scheme entry") for v in sweep["scheme"])
        if "scheme" in sweep else None,
        weights=tuple(_pair(v, "sweep.weights entry") for v in sweep["weights"])
        if "weights" in sweep else None,
        degrees=tuple(int(v) for v in sweep["d"]) if "d" in sweep else None,
        n_social=tuple(int(v) for v in sweep["n_s"]) if "n_s" in sweep else None,
        rhos=tuple(float(v) for v in sweep["rho"]) if "rho" in sweep else None,
        runs=int(raw.get("runs", 200)),
        confidence=float(raw.get("confidence", 0.999)),
    )
