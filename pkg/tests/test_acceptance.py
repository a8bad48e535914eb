"""Acceptance suite at desk scale: R=200 runs, T=500 periods per cell.

One test per criterion; each prints a single `[acceptance] criterion N ...`
pass/fail line.  Cell matrices are computed once per session and shared.

Pinned statistic definitions (used consistently below):
  * final-100 mean of a cell: per-run mean of the last 100 periods, then the
    run average; its standard error se uses the run-level ddof=1 sd, and a
    CI half-width is Z * se with Z the two-sided 99.9% normal quantile.
  * pooled CI half-width of a gap between cells a and b: Z * hypot(se_a, se_b).
  * "within 2 CI half-widths" for a cell set: every pairwise |mean_i - mean_j|
    < 2 * Z * hypot(se_i, se_j).
  * plateau of a run: mean of its last 50 periods; its convergence period is
    the first t (1-based) whose value reaches 95% of that plateau.
The base seed was fixed before any results were inspected.  Criterion 8
(plotting) lives in the plotting package's own test suite.
"""

import itertools
import subprocess
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats as sstats

import teamnorms as tn
from teamnorms.experiments import _cell_seed

BASE_SEED = 20260810
R_RUNS = 200
CONFIDENCE = 0.999
Z = float(sstats.norm.ppf(0.5 + CONFIDENCE / 2.0))

LOW, HIGH = (2, 0, 0), (2, 2, 2)
ALPHAS = (1.0, 0.75, 0.25)
W2S = (0.0, 0.3, 0.5)


def _params(kcs, alpha, w2, rho=0.3, d=2, n_s=2):
    k, c, s = kcs
    p = tn.ScenarioParams(k=k, c=c, s=s, rho=rho, d=d, n_s=n_s,
                          scheme=tn.IncentiveScheme(alpha, round(1 - alpha, 10)),
                          weights=tn.DecisionWeights(round(1 - w2, 10), w2),
                          seed=BASE_SEED)
    return replace(p, seed=_cell_seed(BASE_SEED, tn.scenario_id(p)))


class CellStore:
    """Lazy per-cell (R, T) matrices keyed by scenario id."""

    def __init__(self):
        self._cache = {}

    def matrix(self, *args, **kwargs):
        params = _params(*args, **kwargs)
        sid = tn.scenario_id(params)
        if sid not in self._cache:
            self._cache[sid] = tn.replicate(params, R_RUNS)
        return self._cache[sid]

    def final100(self, *args, **kwargs):
        """(mean, se) of the final-100 statistic for one cell."""
        fm = self.matrix(*args, **kwargs)[:, -100:].mean(axis=1)
        return float(fm.mean()), float(fm.std(ddof=1) / np.sqrt(fm.size))


@pytest.fixture(scope="session")
def cells():
    return CellStore()


def _verdict(name, ok, detail):
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------


def test_criterion_1_complexity_ordering(cells):
    """High complexity underperforms low complexity in every scheme/weight
    cell: means ordered at every t >= 50 and 99.9% bands disjoint over the
    final 100 periods."""
    problems = []
    for alpha in ALPHAS:
        for w2 in W2S:
            low = tn.aggregate(cells.matrix(LOW, alpha, w2), CONFIDENCE)
            high = tn.aggregate(cells.matrix(HIGH, alpha, w2), CONFIDENCE)
            if not np.all(high.mean[49:] < low.mean[49:]):
                problems.append(f"means cross at a={alpha} w2={w2}")
            if not np.all(high.ci_high[-100:] < low.ci_low[-100:]):
                problems.append(f"bands overlap at a={alpha} w2={w2}")
    _verdict("criterion 1 (complexity ordering)", not problems,
             "; ".join(problems) or "9/9 cells ordered with disjoint bands")


def test_criterion_2_norm_cost(cells):
    """Performance drops as the norm weight grows: strict decrease across
    w2 in {0, 0.3, 0.5} per (complexity, alpha) cell, the 0 vs 0.5 gap beats
    the pooled CI half-width, and the drop is larger at high complexity."""
    problems = []
    notes = []
    for kcs, label in ((LOW, "low"), (HIGH, "high")):
        for alpha in ALPHAS:
            trio = [cells.final100(kcs, alpha, w2) for w2 in W2S]
            means = [m for m, _ in trio]
            if not means[0] > means[1] > means[2]:
                problems.append(
                    f"not strictly decreasing at {label} a={alpha}: "
                    + " > ".join(f"{m:.4f}" for m in means))
            gap = means[0] - means[2]
            pooled = Z * float(np.hypot(trio[0][1], trio[2][1]))
            if gap <= pooled:
                problems.append(f"gap {gap:.4f} <= pooled hw {pooled:.4f} "
                                f"at {label} a={alpha}")
    for alpha in ALPHAS:
        drop_low = cells.final100(LOW, alpha, 0.0)[0] - cells.final100(LOW, alpha, 0.5)[0]
        drop_high = cells.final100(HIGH, alpha, 0.0)[0] - cells.final100(HIGH, alpha, 0.5)[0]
        notes.append(f"a={alpha}: drop high {drop_high:.4f} vs low {drop_low:.4f}")
        if drop_high <= drop_low:
            problems.append(f"high-complexity drop not larger at a={alpha}")
    _verdict("criterion 2 (norm cost)", not problems,
             "; ".join(problems) if problems else "; ".join(notes))


def _convergence_median(matrix):
    periods = []
    for row in matrix:
        plateau = row[-50:].mean()
        periods.append(int(np.argmax(row >= 0.95 * plateau)) + 1)
    return float(np.median(periods))


def test_criterion_3_incentives_without_norms(cells):
    """At w2=0: team-weighted incentives converge faster under high
    complexity (median first period reaching 95% of the run's plateau), and
    low-complexity plateaus are scheme-indifferent within the CI."""
    problems = []
    med_team = _convergence_median(cells.matrix(HIGH, 0.25, 0.0))
    med_own = _convergence_median(cells.matrix(HIGH, 1.0, 0.0))
    if not med_team < med_own:
        problems.append(f"median convergence {med_team} !< {med_own}")
    low_stats = [cells.final100(LOW, alpha, 0.0) for alpha in ALPHAS]
    for (i, a), (j, b) in itertools.combinations(enumerate(low_stats), 2):
        diff = abs(a[0] - b[0])
        limit = Z * float(np.hypot(a[1], b[1]))
        if diff >= limit:
            problems.append(f"low-complexity plateaus differ: schemes {i},{j} "
                            f"diff {diff:.4f} >= {limit:.4f}")
    _verdict("criterion 3 (incentive effect absent norms)", not problems,
             "; ".join(problems) or
             f"median convergence {med_team} < {med_own}; plateaus within CI")


def test_criterion_4_correlation_offset(cells):
    """High landscape correlation offsets the norm cost at low complexity
    (rho=0.95 with norms is not below the no-norms benchmark by more than
    one CI half-width) while the rho sweep is flat at high complexity."""
    problems = []
    with_norms = cells.final100(LOW, 1.0, 0.5, rho=0.95)
    bench = cells.final100(LOW, 1.0, 0.0, rho=0.3)
    floor = bench[0] - Z * bench[1]
    if not with_norms[0] >= floor:
        problems.append(f"rho=0.95 mean {with_norms[0]:.4f} < benchmark floor {floor:.4f}")
    sweep = {rho: cells.final100(HIGH, 1.0, 0.5, rho=rho)
             for rho in tn.experiments.RHO_SWEEP}
    for (r1, a), (r2, b) in itertools.combinations(sweep.items(), 2):
        diff = abs(a[0] - b[0])
        limit = 2 * Z * float(np.hypot(a[1], b[1]))
        if diff >= limit:
            problems.append(f"high-complexity rho {r1} vs {r2} differ: "
                            f"{diff:.4f} >= {limit:.4f}")
    _verdict("criterion 4 (correlation offset)", not problems,
             "; ".join(problems) or
             f"rho=0.95 with norms {with_norms[0]:.4f} >= floor {floor:.4f}; "
             "high-complexity sweep flat")


def test_criterion_5_degree_and_social_bits(cells):
    """Network degree barely matters (spread within 2 CI half-widths over
    D in {1,2,3}) while more social bits strictly deepen the norm cost
    (N_S in {0,2,4} at w2=0.5); both at high complexity."""
    problems = []
    degree = {d: cells.final100(HIGH, 1.0, 0.5, d=d) for d in (1, 2, 3)}
    for (d1, a), (d2, b) in itertools.combinations(degree.items(), 2):
        diff = abs(a[0] - b[0])
        limit = 2 * Z * float(np.hypot(a[1], b[1]))
        if diff >= limit:
            problems.append(f"degree {d1} vs {d2} differ: {diff:.4f} >= {limit:.4f}")
    nsoc = [(v, cells.final100(HIGH, 1.0, 0.5, n_s=v)[0]) for v in (0, 2, 4)]
    if not (nsoc[0][1] > nsoc[1][1] > nsoc[2][1]):
        problems.append("N_S means not strictly decreasing: "
                        + ", ".join(f"ns{v}={m:.4f}" for v, m in nsoc))
    _verdict("criterion 5 (degree insensitivity, social-bit sensitivity)",
             not problems, "; ".join(problems) or
             "degree spread within limits; N_S strictly decreasing")


# ---------------------------------------------------------------------------


def _naive_global_max(structure, tables):
    m, n, p = structure.m, structure.n, structure.p
    best_val, best_bits = -1.0, None
    for bits in itertools.product((0, 1), repeat=m):
        agent_means = []
        for a in range(p):
            vals = []
            for j in range(n):
                i = a * n + j
                key = 0
                for dep in structure.deps[i]:
                    key = key * 2 + bits[dep]
                vals.append(tables[i][key])
            agent_means.append(sum(vals) / n)
        team = sum(agent_means) / p
        if team > best_val:
            best_val, best_bits = team, bits
    return np.array(best_bits, dtype=np.uint8), best_val


def _eq9_reference(bits, records, t, t_l, n_s):
    if t <= t_l or not records or n_s == 0:
        return 0.0
    acc = Fraction(0)
    for _, rec in records:
        acc += Fraction(sum(1 for x, y in zip(bits, rec) if x == y), n_s)
    return float(acc / len(records))


def test_criterion_6_oracle_suite():
    """(a) enumeration vs a naive enumerator, exactly; (b) compliance vs an
    exact re-derivation on 1e4 random memories, exactly; (c) cross-agent
    table correlation within +-0.02 of rho at >= 1e5 samples; (d) KS
    uniformity of the marginals at significance 0.01."""
    problems = []

    # (a) exhaustive enumeration against the independent oracle
    for shape in ((3, 4, 2, 1, 2), (2, 5, 3, 0, 0), (2, 4, 2, 2, 1), (4, 3, 2, 1, 3)):
        rng = np.random.default_rng(sum(shape) * 7 + 1)
        st = tn.build_interaction_structure(*shape, rng)
        land = tn.build_landscape(st, 0.3, rng)
        oracle_bits, oracle_val = _naive_global_max(st, land.tables)
        cfg, val = tn.enumerate_global_max(land)
        if val != oracle_val or not np.array_equal(cfg.bits, oracle_bits):
            problems.append(f"enumeration mismatch on {shape}")

    # (b) compliance against the exact record-averaged form
    rng = np.random.default_rng(61)
    for _ in range(10_000):
        n_s = int(rng.integers(1, 5))
        mem = tn.NormMemory(n_s)
        for t in range(1, int(rng.integers(1, 30))):
            mem.add(t, tuple(rng.integers(0, 2, size=n_s)))
        bits = tuple(rng.integers(0, 2, size=n_s))
        t, t_l = int(rng.integers(1, 120)), int(rng.integers(1, 60))
        if tn.compliance(bits, mem, t, t_l) != _eq9_reference(bits, mem.entries, t, t_l, n_s):
            problems.append("compliance mismatch")
            break

    # (c) cross-agent correlation of corresponding entries
    rng = np.random.default_rng(67)
    st = tn.build_interaction_structure(4, 4, 2, 2, 2, rng)
    pair_count = 0
    for rho in (0.0, 0.3, 0.9, 1.0):
        xs, ys = [], []
        for _ in range(33):
            per_agent = tn.copula_tables(st, rho, rng).reshape(4, 4, -1)
            for a in range(4):
                for b in range(a + 1, 4):
                    xs.append(per_agent[a].ravel())
                    ys.append(per_agent[b].ravel())
        x, y = np.concatenate(xs), np.concatenate(ys)
        pair_count = x.size
        r = float(np.corrcoef(x, y)[0, 1])
        if abs(r - rho) > 0.02:
            problems.append(f"correlation {r:.4f} off target {rho}")
    if pair_count < 100_000:
        problems.append(f"only {pair_count} correlation samples")

    # (d) KS uniformity of marginal table entries
    entries = np.concatenate([tn.copula_tables(st, 0.3, rng).reshape(4, 4, -1)[0].ravel()
                              for _ in range(196)])
    if entries.size < 100_000:
        problems.append(f"only {entries.size} KS samples")
    pvalue = float(sstats.kstest(entries, "uniform").pvalue)
    if pvalue <= 0.01:
        problems.append(f"KS rejects uniformity: p={pvalue:.4f}")

    _verdict("criterion 6 (oracle suite)", not problems,
             "; ".join(problems) or
             f"enumeration, compliance, correlation, KS all verified (KS p={pvalue:.3f})")


def test_criterion_7_cli_determinism(tmp_path):
    """Two full default-grid sweeps at R=200 with different worker counts
    emit byte-identical CSVs."""
    outputs = []
    for workers in (2, 3):
        out = tmp_path / f"w{workers}"
        proc = subprocess.run(
            [sys.executable, "-m", "teamnorms.cli", "sweep", "--figure", "main",
             "--runs", str(R_RUNS), "--seed", str(BASE_SEED),
             "--workers", str(workers), "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outputs.append((out / "main.csv").read_bytes())
    ok = outputs[0] == outputs[1]
    _verdict("criterion 7 (determinism)", ok,
             f"main grid CSVs byte-identical across workers 2 and 3 "
             f"({len(outputs[0])} bytes)" if ok else "CSV bytes differ")
