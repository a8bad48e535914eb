"""Per-period schedule driver with seed-deterministic replication.

Each period runs five phases: expire memories, every agent evaluates one
random own-block flip against the status quo (reading only the previous
period's configuration), all chosen blocks are written simultaneously, the
implemented social bits are shared over the network, and the normalized team
performance is recorded.

Randomness is split into non-overlapping substreams per run: the run seed
for replication index i is SeedSequence(base_seed, spawn_key=(i,)), and a
run derives child streams for landscape construction, the initial bitstring,
and one proposal stream per agent.  Proposal positions are pre-drawn as one
vectorized draw per agent stream, which is bitwise identical to drawing one
position per period from the same stream, so the object-level `step` path
and the compiled `run` path consume identical randomness.

There are two ways to execute a run.  `init_run` + `step` walk the schedule
with the public operations (useful for inspection and as the reference
semantics); `run` executes the same schedule in a compiled kernel.  Both
produce bit-identical traces.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import simulate_run
from .errors import ParameterError
from .landscape import (ENUM_BUDGET_BITS, TeamConfig, build_interaction_structure,
                        build_landscape, check_structure_params, team_performance)
from .norms import NormMemory, expire, ring_network, share
from .team import DecisionWeights, IncentiveScheme, choose


@dataclass(frozen=True)
class ScenarioParams:
    """Every scenario knob in one validated record."""

    m: int = 16
    p: int = 4
    n: int = 4
    k: int = 2
    c: int = 0
    s: int = 0
    rho: float = 0.3
    t_l: int = 50
    n_s: int = 2
    d: int = 2
    t_max: int = 500
    scheme: IncentiveScheme = IncentiveScheme(1.0, 0.0)
    weights: DecisionWeights = DecisionWeights(1.0, 0.0)
    seed: int = 0

    def __post_init__(self):
        check_structure_params(self.p, self.n, self.k, self.c, self.s, ENUM_BUDGET_BITS)
        if self.m != self.p * self.n:
            raise ParameterError(f"m={self.m} must equal p*n={self.p * self.n}")
        if not 0 <= self.n_s <= self.n:
            raise ParameterError(f"n_s={self.n_s} must lie in [0, n={self.n}]")
        if self.t_max < 1:
            raise ParameterError(f"t_max={self.t_max} must be positive")
        if not 1 <= self.t_l < self.t_max:
            raise ParameterError(f"t_l={self.t_l} must satisfy 1 <= t_l < t_max={self.t_max}")
        if not 0.0 <= self.rho <= 1.0:
            raise ParameterError(f"rho={self.rho} outside [0, 1]")
        if self.p < 2 and self.scheme.beta != 0.0:
            raise ParameterError("residual weight beta > 0 needs at least two agents")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ParameterError(f"seed must be a non-negative integer, got {self.seed!r}")
        ring_network(self.p, self.d)  # validates the degree


@dataclass
class RunTrace:
    """One run's normalized performance series and where it ended."""

    series: np.ndarray
    final_config: TeamConfig
    seed: np.random.SeedSequence


@dataclass
class RunState:
    """Mutable state walked by `step`; `t` is the next period to execute."""

    params: ScenarioParams
    landscape: object
    network: object
    config: TeamConfig
    memories: list
    proposals: np.ndarray  # (t_max, p) within-block positions
    t: int = 1
    trace: list = field(default_factory=list)


def derive_run_seed(base_seed, index):
    """Non-overlapping run seed for replication index `index`."""
    return np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(index),))


def run_streams(params, run_seed):
    """(landscape_rng, init_rng, agent_rngs) derived from one run seed."""
    if isinstance(run_seed, (int, np.integer)):
        run_seed = np.random.SeedSequence(int(run_seed))
    base_key = tuple(run_seed.spawn_key)

    def child(i):
        ss = np.random.SeedSequence(entropy=run_seed.entropy, spawn_key=base_key + (i,))
        return np.random.default_rng(ss)

    landscape_rng = child(0)
    init_rng = child(1)
    agent_rngs = tuple(child(2 + a) for a in range(params.p))
    return landscape_rng, init_rng, agent_rngs


def init_run(params, run_seed=None):
    """Fresh landscape, uniform initial bitstring, empty memories, period 1."""
    if run_seed is None:
        run_seed = derive_run_seed(params.seed, 0)
    landscape_rng, init_rng, agent_rngs = run_streams(params, run_seed)
    structure = build_interaction_structure(params.p, params.n, params.k,
                                            params.c, params.s, landscape_rng)
    land = build_landscape(structure, params.rho, landscape_rng)
    bits = init_rng.integers(0, 2, size=params.m).astype(np.uint8)
    config = TeamConfig(bits, params.n, params.n_s)
    proposals = np.column_stack(
        [agent_rngs[a].integers(0, params.n, size=params.t_max) for a in range(params.p)]
    ).astype(np.int64)
    memories = [NormMemory(params.n_s) for _ in range(params.p)]
    network = ring_network(params.p, params.d)
    return RunState(params=params, landscape=land, network=network, config=config,
                    memories=memories, proposals=proposals)


def step(state, agent_order=None):
    """Advance one period using the public operations.

    `agent_order` only permutes the evaluation sequence; decisions are
    simultaneous (every agent reads the period t-1 configuration), so any
    order yields the same period-t configuration.  Mutates and returns
    `state`.
    """
    params = state.params
    t = state.t
    if t > params.t_max:
        raise ParameterError(f"run already complete at t_max={params.t_max}")
    for mem in state.memories:
        expire(mem, t, params.t_l)

    previous = state.config
    order = list(range(params.p)) if agent_order is None else list(agent_order)
    new_bits = previous.bits.copy()
    for a in order:
        task = a * params.n + int(state.proposals[t - 1, a])
        candidate = previous.with_flip(task)
        picked = choose(a, previous, candidate, state.landscape, params.scheme,
                        params.weights, state.memories[a], t, params.t_l)
        new_bits[a * params.n:(a + 1) * params.n] = picked.block(a)
    state.config = TeamConfig(new_bits, params.n, params.n_s)

    share(state.network, t, state.config, state.memories)
    state.trace.append(team_performance(state.landscape, state.config)
                       / state.landscape.global_max)
    state.t += 1
    return state


def run(params, run_seed=None):
    """Execute a full run on the compiled kernel; trace has t_max entries."""
    if run_seed is None:
        run_seed = derive_run_seed(params.seed, 0)
    elif isinstance(run_seed, (int, np.integer)):
        run_seed = np.random.SeedSequence(int(run_seed))
    landscape_rng, init_rng, agent_rngs = run_streams(params, run_seed)
    structure = build_interaction_structure(params.p, params.n, params.k,
                                            params.c, params.s, landscape_rng)
    land = build_landscape(structure, params.rho, landscape_rng)
    bits = init_rng.integers(0, 2, size=params.m).astype(np.uint8)
    x0 = 0
    for b in bits:
        x0 = (x0 << 1) | int(b)
    proposals = np.column_stack(
        [agent_rngs[a].integers(0, params.n, size=params.t_max) for a in range(params.p)]
    ).astype(np.int64)
    sources = np.array(ring_network(params.p, params.d).sources,
                       dtype=np.int64).reshape(params.p, -1)
    series, x_final = simulate_run(
        land.agent_values, land.team_values, land.global_max, np.int64(x0),
        proposals, sources, params.n, params.n_s, params.t_l,
        float(params.scheme.alpha), float(params.scheme.beta),
        float(params.weights.w1), float(params.weights.w2))
    final = TeamConfig.from_index(int(x_final), params.m, params.n, params.n_s)
    return RunTrace(series=series, final_config=final, seed=run_seed)


def _run_series(job):
    params, index = job
    return run(params, derive_run_seed(params.seed, index)).series


def replicate(params, r, workers=None):
    """R independent runs as an (R, t_max) matrix of normalized performance.

    Run i uses derive_run_seed(params.seed, i); rows are assembled by run
    index, so the matrix is identical for any worker count.
    """
    if r < 1:
        raise ParameterError(f"run count r={r} must be at least 1")
    jobs = [(params, i) for i in range(r)]
    if workers is None or workers <= 1:
        rows = [_run_series(job) for job in jobs]
    else:
        chunk = max(1, r // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_series, jobs, chunksize=chunk))
    return np.vstack(rows)
