"""Correlated NK(C,S) performance landscapes over partitioned bitstrings.

A team decision problem is an M-bit vector split into P contiguous blocks of
N bits, one per agent.  Each task (bit) i contributes a value looked up in a
uniform-random table indexed by the bits of its dependency list: itself,
K tasks from the same block and C tasks from each of S other blocks.  Agent
performance is the mean contribution of its block, team performance the mean
of agent performances.  Landscapes of different agents are coupled through a
Gaussian copula so that corresponding table entries have a chosen Pearson
correlation; the global maximum over all 2**M configurations is found by
exhaustive enumeration and used to normalize simulated trajectories.

Bit conventions (fixed so that dumps and tests are bit-exact):
  * configuration integers pack bits most-significant-first, i.e. bit
    (M-1-i) of the integer is task i, so ascending integers enumerate bit
    vectors in lexicographic order;
  * a dependency list is ordered (self, internal ascending, external
    ascending by absolute task index) and table patterns pack those bits
    most-significant-first.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._kernels import expand_values
from .errors import CapabilityError, ParameterError

# Exhaustive enumeration is required for normalization; refuse anything
# larger than this many bits.
ENUM_BUDGET_BITS = 20

# Attempts at rejection-sampling a regular dependency pattern before falling
# back to the deterministic circulant construction.
_MAX_REJECTIONS = 10_000

_FORMAT_TAG = "teamnorms-landscape v1"


class TeamConfig:
    """An M-bit team configuration partitioned into P blocks of N bits.

    Within each block the first N - N_S bits are private and the last N_S
    are social.  Instances are immutable; `with_flip` returns a copy.
    """

    __slots__ = ("bits", "n", "n_s")

    def __init__(self, bits, n, n_s=0):
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ParameterError("bits must be a non-empty 1-D vector")
        if not np.all((arr == 0) | (arr == 1)):
            raise ParameterError("bits must be 0/1 valued")
        if n < 1 or arr.size % n != 0:
            raise ParameterError(f"bit count {arr.size} is not a multiple of block size {n}")
        if not 0 <= n_s <= n:
            raise ParameterError(f"social bit count n_s={n_s} must lie in [0, n={n}]")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "n_s", int(n_s))

    def __setattr__(self, name, value):
        raise AttributeError("TeamConfig is immutable")

    def __reduce__(self):
        # keeps copy/deepcopy/pickle working despite the frozen __setattr__
        return (TeamConfig, (np.asarray(self.bits), self.n, self.n_s))

    @property
    def m(self):
        return self.bits.size

    @property
    def p(self):
        return self.bits.size // self.n

    def block(self, p):
        """The N-bit slice owned by agent p (a copy)."""
        return self.bits[p * self.n:(p + 1) * self.n].copy()

    def private(self, p):
        """The first N - N_S bits of agent p's block."""
        return self.bits[p * self.n:p * self.n + self.n - self.n_s].copy()

    def social(self, p):
        """The last N_S bits of agent p's block."""
        return self.bits[(p + 1) * self.n - self.n_s:(p + 1) * self.n].copy()

    def with_flip(self, i):
        """A copy with task i flipped."""
        bits = self.bits.copy()
        bits[i] ^= 1
        return TeamConfig(bits, self.n, self.n_s)

    @property
    def index(self):
        """The configuration packed into an integer, task 0 most significant."""
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | int(b)
        return idx

    @classmethod
    def from_index(cls, idx, m, n, n_s=0):
        bits = np.array([(idx >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.uint8)
        return cls(bits, n, n_s)

    def __eq__(self, other):
        if not isinstance(other, TeamConfig):
            return NotImplemented
        return (self.n == other.n and self.n_s == other.n_s
                and np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.bits.tobytes(), self.n, self.n_s))

    def __repr__(self):
        blocks = ["".join(str(b) for b in self.block(p)) for p in range(self.p)]
        return f"TeamConfig({'|'.join(blocks)}, n_s={self.n_s})"


@dataclass(frozen=True, eq=False)
class InteractionStructure:
    """Which tasks feed each contribution, with regularity guarantees.

    deps[i] lists the 1 + K + C*S task indices whose bits index task i's
    contribution table, self first.  The pattern of within-block offsets is
    identical for every agent (block symmetry), every task appears in
    exactly K internal lists of its own block and exactly C*S external
    lists, and external dependencies come C from each of S distinct other
    blocks.
    """

    p: int
    n: int
    k: int
    c: int
    s: int
    deps: np.ndarray  # (M, 1 + K + C*S) int64

    @property
    def m(self):
        return self.p * self.n

    @property
    def n_external(self):
        return self.c * self.s if (self.c > 0 and self.s > 0) else 0

    @property
    def deps_width(self):
        return 1 + self.k + self.n_external


def _regular_choice_matrix(n, per_row, rng, exclude_diagonal):
    """Rows of `per_row` column choices with every column chosen `per_row`
    times; uniform over such matrices via rejection sampling, circulant
    fallback if the sampler keeps missing."""
    if per_row == 0:
        return [[] for _ in range(n)]
    for _ in range(_MAX_REJECTIONS):
        counts = np.zeros(n, dtype=np.int64)
        rows = []
        for j in range(n):
            pool = [q for q in range(n) if not (exclude_diagonal and q == j)]
            chosen = rng.choice(len(pool), size=per_row, replace=False)
            row = sorted(pool[q] for q in chosen)
            rows.append(row)
            for q in row:
                counts[q] += 1
        if np.all(counts == per_row):
            return rows
    start = 1 if exclude_diagonal else 0
    return [[(j + o) % n for o in range(start, start + per_row)] for j in range(n)]


def check_structure_params(p, n, k, c, s, max_bits=ENUM_BUDGET_BITS):
    """Validate structure parameters, returning them as plain ints."""
    for name, v in (("p", p), ("n", n), ("k", k), ("c", c), ("s", s)):
        if int(v) != v or v < 0:
            raise ParameterError(f"{name} must be a non-negative integer, got {v!r}")
    p, n, k, c, s = int(p), int(n), int(k), int(c), int(s)
    if p < 1 or n < 1:
        raise ParameterError("need at least one agent and one task per agent")
    if k > n - 1:
        raise ParameterError(f"k={k} violates k <= n-1={n - 1}: "
                             "internal couplings must fit inside one block")
    if c > 0:
        if not 1 <= s <= p - 1:
            raise ParameterError(f"s={s} violates 1 <= s <= p-1={p - 1} required when c > 0")
        if c > n:
            raise ParameterError(f"c={c} violates c <= n={n}: "
                                 "cannot couple to more tasks than a block holds")
    elif s > p - 1:
        raise ParameterError(f"s={s} violates s <= p-1={p - 1}")
    if p * n > max_bits:
        raise CapabilityError(f"m={p * n} exceeds the exhaustive-enumeration budget "
                              f"of {max_bits} bits")
    return p, n, k, c, s


def build_interaction_structure(p, n, k, c, s, rng, max_bits=ENUM_BUDGET_BITS):
    """Sample a regular, block-symmetric dependency structure.

    The within-block internal pattern and the per-offset external patterns
    are sampled once and replicated across agents (external partner blocks
    taken as fixed offsets modulo P), which keeps corresponding table
    entries well-defined for cross-agent correlation.
    """
    p, n, k, c, s = check_structure_params(p, n, k, c, s, max_bits)
    m = p * n

    internal = _regular_choice_matrix(n, k, rng, exclude_diagonal=True)

    externals = []  # (block offset, per-position column choices)
    if c > 0 and s > 0:
        offsets = sorted(int(o) for o in rng.choice(np.arange(1, p), size=s, replace=False))
        for off in offsets:
            externals.append((off, _regular_choice_matrix(n, c, rng, exclude_diagonal=False)))

    width = 1 + k + (c * s if externals else 0)
    deps = np.empty((m, width), dtype=np.int64)
    for a in range(p):
        for j in range(n):
            i = a * n + j
            row = [i]
            row.extend(sorted(a * n + jj for jj in internal[j]))
            ext = []
            for off, mat in externals:
                ext.extend(((a + off) % p) * n + jj for jj in mat[j])
            row.extend(sorted(ext))
            deps[i] = row
    return InteractionStructure(p=p, n=n, k=k, c=c, s=s, deps=deps)


def validate_structure(structure):
    """Check every structural invariant; raises ParameterError on violation."""
    p, n, k = structure.p, structure.n, structure.k
    m = structure.m
    deps = structure.deps
    if deps.shape != (m, structure.deps_width):
        raise ParameterError(f"deps shape {deps.shape} != {(m, structure.deps_width)}")
    n_ext = structure.n_external
    internal_in = np.zeros(m, dtype=int)
    external_in = np.zeros(m, dtype=int)
    for i in range(m):
        row = deps[i]
        if row[0] != i:
            raise ParameterError(f"deps[{i}] does not start with {i}")
        if len(set(row.tolist())) != len(row):
            raise ParameterError(f"deps[{i}] has repeated indices")
        if row.min() < 0 or row.max() >= m:
            raise ParameterError(f"deps[{i}] out of range")
        block = i // n
        internal = [int(d) for d in row[1:] if d // n == block]
        external = [int(d) for d in row[1:] if d // n != block]
        if len(internal) != k:
            raise ParameterError(f"deps[{i}] has {len(internal)} internal entries, expected {k}")
        if len(external) != n_ext:
            raise ParameterError(f"deps[{i}] has {len(external)} external entries, expected {n_ext}")
        if n_ext:
            per_block = {}
            for d in external:
                per_block[d // n] = per_block.get(d // n, 0) + 1
            if len(per_block) != structure.s or set(per_block.values()) != {structure.c}:
                raise ParameterError(f"deps[{i}] external entries are not c={structure.c} "
                                     f"from each of s={structure.s} blocks")
        for d in internal:
            internal_in[d] += 1
        for d in external:
            external_in[d] += 1
    if not np.all(internal_in == k):
        raise ParameterError("internal in-degrees are not uniformly k")
    if not np.all(external_in == n_ext):
        raise ParameterError("external in-degrees are not uniformly c*s")
    # Block symmetry: within-block offset patterns of agent 0 replicate.
    for a in range(p):
        for j in range(n):
            ref = deps[j]
            row = deps[a * n + j]
            ref_off = sorted(((int(d) // n - 0) % p, int(d) % n) for d in ref[1:])
            row_off = sorted(((int(d) // n - a) % p, int(d) % n) for d in row[1:])
            if ref_off != row_off:
                raise ParameterError(f"deps[{a * n + j}] breaks block symmetry")
    return structure


def copula_tables(structure, rho, rng):
    """Uniform(0,1) contribution tables with cross-agent correlation rho.

    Each (within-block position, bit pattern) cell draws a P-variate
    equicorrelated standard normal, mapped through the normal CDF.  The
    normal-scale correlation 2*sin(pi*rho/6) makes the Pearson correlation
    of the resulting uniforms exactly rho; rho=1 shares the common factor
    only, so tables are bitwise identical across agents.
    """
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho={rho} outside [0, 1]")
    p, n = structure.p, structure.n
    n_patterns = 1 << structure.deps_width
    # exact endpoints: rho=1 must share the common factor only (bitwise
    # identical tables) and rho=0 must drop it entirely
    if rho == 1.0:
        rstar = 1.0
    elif rho == 0.0:
        rstar = 0.0
    else:
        rstar = 2.0 * np.sin(np.pi * rho / 6.0)
    common = rng.standard_normal((n, n_patterns))
    own = rng.standard_normal((p, n, n_patterns))
    z = np.sqrt(rstar) * common[np.newaxis, :, :] + np.sqrt(1.0 - rstar) * own
    return ndtr(z).reshape(p * n, n_patterns)


class Landscape:
    """Contribution tables plus the exhaustively enumerated global optimum.

    `agent_values[a, idx]` and `team_values[idx]` tabulate agent and team
    performance for every configuration integer; they are what simulation
    runs read, and `global_max` (the maximum of `team_values`, ties broken
    toward the lexicographically smallest configuration) normalizes traces.
    Immutable after construction.
    """

    def __init__(self, structure, tables, rho):
        if not 0.0 <= rho <= 1.0:
            raise ParameterError(f"rho={rho} outside [0, 1]")
        if structure.m > ENUM_BUDGET_BITS:
            raise CapabilityError(f"m={structure.m} exceeds the exhaustive-enumeration "
                                  f"budget of {ENUM_BUDGET_BITS} bits")
        tables = np.ascontiguousarray(tables, dtype=np.float64)
        expected = (structure.m, 1 << structure.deps_width)
        if tables.shape != expected:
            raise ParameterError(f"tables shape {tables.shape} != {expected}")
        if tables.min() < 0.0 or tables.max() > 1.0:
            raise ParameterError("table values must lie in [0, 1]")
        self.structure = structure
        self.tables = tables
        self.tables.setflags(write=False)
        self.rho = float(rho)
        self.agent_values, self.team_values = expand_values(
            tables, structure.deps, structure.n, structure.p)
        self.agent_values.setflags(write=False)
        self.team_values.setflags(write=False)
        best = int(np.argmax(self.team_values))
        self.global_max = float(self.team_values[best])
        self.global_argmax = TeamConfig.from_index(best, structure.m, structure.n)

    @property
    def m(self):
        return self.structure.m

    @property
    def p(self):
        return self.structure.p

    @property
    def n(self):
        return self.structure.n


def build_landscape(structure, rho, rng):
    """Generate correlated tables for `structure` and enumerate the optimum."""
    return Landscape(structure, copula_tables(structure, rho, rng), rho)


def contribution(land, i, cfg):
    """Table value of task i under cfg; depends only on the bits in deps[i]."""
    pat = 0
    for d in land.structure.deps[i]:
        pat = (pat << 1) | int(cfg.bits[d])
    return float(land.tables[i, pat])


def agent_performance(land, p, cfg):
    """Mean contribution of the N tasks in agent p's block."""
    n = land.structure.n
    acc = 0.0
    for j in range(n):
        acc += contribution(land, p * n + j, cfg)
    return acc / n


def team_performance(land, cfg):
    """Mean of agent performances."""
    acc = 0.0
    for a in range(land.structure.p):
        acc += agent_performance(land, a, cfg)
    return acc / land.structure.p


def enumerate_global_max(land):
    """The enumerated optimum as (config, value); ties resolved at
    construction toward the lexicographically smallest bit vector."""
    return land.global_argmax, land.global_max


def save_landscape(land, path, seed=None):
    """Write the stable v1 text dump: a header line, one deps line and one
    table line per task (entries in pattern order, shortest round-trip
    decimal).  `seed` is recorded for provenance only (-1 if unknown)."""
    s = land.structure
    lines = [_FORMAT_TAG,
             f"m={s.m} p={s.p} n={s.n} k={s.k} c={s.c} s={s.s} "
             f"rho={land.rho!r} seed={-1 if seed is None else int(seed)}"]
    for i in range(s.m):
        lines.append(f"deps {i}: " + " ".join(str(int(d)) for d in s.deps[i]))
    for i in range(s.m):
        lines.append(f"table {i}: " + " ".join(repr(float(v)) for v in land.tables[i]))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_landscape(path):
    """Read a v1 text dump back into a Landscape (optimum recomputed)."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != _FORMAT_TAG:
        raise ParameterError(f"{path}: not a '{_FORMAT_TAG}' file")
    header = dict(item.split("=", 1) for item in lines[1].split())
    try:
        m, p, n = int(header["m"]), int(header["p"]), int(header["n"])
        k, c, s = int(header["k"]), int(header["c"]), int(header["s"])
        rho = float(header["rho"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"{path}: malformed header: {exc}") from exc
    if m != p * n:
        raise ParameterError(f"{path}: header m={m} != p*n={p * n}")
    deps_rows = []
    tables_rows = []
    for ln in lines[2:]:
        if ln.startswith("deps "):
            deps_rows.append([int(v) for v in ln.split(":", 1)[1].split()])
        elif ln.startswith("table "):
            tables_rows.append([float(v) for v in ln.split(":", 1)[1].split()])
        elif ln.strip():
            raise ParameterError(f"{path}: unexpected line {ln[:40]!r}")
    if len(deps_rows) != m or len(tables_rows) != m:
        raise ParameterError(f"{path}: expected {m} deps and {m} table lines, "
                             f"got {len(deps_rows)} and {len(tables_rows)}")
    structure = InteractionStructure(p=p, n=n, k=k, c=c, s=s,
                                     deps=np.array(deps_rows, dtype=np.int64))
    validate_structure(structure)
    return Landscape(structure, np.array(tables_rows, dtype=np.float64), rho)
