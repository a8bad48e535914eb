"""Numba-compiled hot paths for landscape expansion and single runs.

Both kernels are arithmetic mirrors of the pure-Python operations in
:mod:`teamnorms.landscape`, :mod:`teamnorms.team` and :mod:`teamnorms.norms`:
every float accumulation happens left-to-right in the same order, and norm
compliance is an integer match count divided exactly once.  Tests assert
bit-identical results between the two paths, so any edit here must keep the
operation order in sync with the public functions.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def expand_values(tables, deps, n, p):
    """Tabulate per-agent and team performance for every configuration.

    tables: (M, 2**L) contribution lookup, one row per task.
    deps:   (M, L) dependency indices, self first; patterns pack the bits
            of deps[i] most-significant-first.
    Configuration integers map bit (M-1-i) to task i, so ascending integers
    enumerate bit vectors in lexicographic order.

    Returns (agent_values, team_values) of shapes (p, 2**M) and (2**M,).
    """
    m = n * p
    l = deps.shape[1]
    size = 1 << m
    agent_values = np.empty((p, size), dtype=np.float64)
    team_values = np.empty(size, dtype=np.float64)
    for cfg in range(size):
        team_acc = 0.0
        for a in range(p):
            acc = 0.0
            for j in range(n):
                i = a * n + j
                pat = 0
                for q in range(l):
                    pat = (pat << 1) | ((cfg >> (m - 1 - deps[i, q])) & 1)
                acc += tables[i, pat]
            val = acc / n
            agent_values[a, cfg] = val
            team_acc += val
        team_values[cfg] = team_acc / p
    return agent_values, team_values


@njit(cache=True)
def simulate_run(agent_values, team_values, global_max, x0, proposals,
                 sources, n, n_s, t_l, alpha, beta, w1, w2):
    """Run the per-period schedule for T periods and return the trace.

    proposals: (T, P) within-block flip positions, one per agent per period.
    sources:   (P, d_in) agents each agent receives social bits from.
    Returns (series, x_final) where series[t-1] is the normalized team
    performance of the period-t configuration.
    """
    p = agent_values.shape[0]
    m = n * p
    t_max = proposals.shape[0]
    d_in = sources.shape[1]

    # Ring-buffer memories: at most t_l distinct timestamps alive after the
    # share phase, d_in records per timestamp.
    cap = d_in * t_l if d_in > 0 else 1
    mem_ts = np.full((p, cap), -1, dtype=np.int64)
    mem_bits = np.zeros((p, cap, n_s), dtype=np.uint8)
    head = np.zeros(p, dtype=np.int64)
    tail = np.zeros(p, dtype=np.int64)
    count = np.zeros(p, dtype=np.int64)
    ones = np.zeros((p, n_s), dtype=np.int64)

    series = np.empty(t_max, dtype=np.float64)
    x = np.int64(x0)

    for t in range(1, t_max + 1):
        # Phase 1: forget records older than the sliding window.
        for a in range(p):
            while count[a] > 0 and mem_ts[a, tail[a]] <= t - t_l:
                for j in range(n_s):
                    ones[a, j] -= mem_bits[a, tail[a], j]
                tail[a] = (tail[a] + 1) % cap
                count[a] -= 1

        # Phase 2: every agent evaluates its one-bit proposal against the
        # status quo, reading only the period t-1 configuration.
        flips = np.int64(0)
        for a in range(p):
            task = a * n + proposals[t - 1, a]
            cand = x ^ (np.int64(1) << (m - 1 - task))

            own_sq = agent_values[a, x]
            own_cd = agent_values[a, cand]
            if p > 1:
                racc_sq = 0.0
                racc_cd = 0.0
                for q in range(p):
                    if q != a:
                        racc_sq += agent_values[q, x]
                        racc_cd += agent_values[q, cand]
                res_sq = racc_sq / (p - 1)
                res_cd = racc_cd / (p - 1)
            else:
                res_sq = 0.0
                res_cd = 0.0
            inc_sq = alpha * own_sq + beta * res_sq
            inc_cd = alpha * own_cd + beta * res_cd

            soc_sq = 0.0
            soc_cd = 0.0
            if t > t_l and count[a] > 0 and n_s > 0:
                match_sq = 0
                match_cd = 0
                for j in range(n_s):
                    jtask = a * n + (n - n_s) + j
                    shift = m - 1 - jtask
                    if (x >> shift) & 1 == 1:
                        match_sq += ones[a, j]
                    else:
                        match_sq += count[a] - ones[a, j]
                    if (cand >> shift) & 1 == 1:
                        match_cd += ones[a, j]
                    else:
                        match_cd += count[a] - ones[a, j]
                denom = count[a] * n_s
                soc_sq = match_sq / denom
                soc_cd = match_cd / denom

            if w1 * inc_cd + w2 * soc_cd > w1 * inc_sq + w2 * soc_sq:
                flips ^= np.int64(1) << (m - 1 - task)

        # Phase 3: all chosen blocks are written simultaneously.
        x = x ^ flips

        # Phase 4: share the implemented period-t social bits.
        for a in range(p):
            for e in range(d_in):
                src = sources[a, e]
                h = head[a]
                mem_ts[a, h] = t
                for j in range(n_s):
                    jtask = src * n + (n - n_s) + j
                    bit = np.uint8((x >> (m - 1 - jtask)) & 1)
                    mem_bits[a, h, j] = bit
                    ones[a, j] += bit
                head[a] = (h + 1) % cap
                count[a] += 1

        # Phase 5: record normalized team performance.
        series[t - 1] = team_values[x] / global_max

    return series, x
