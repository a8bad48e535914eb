"""Peer sharing of social-task decisions, finite memory, and norm compliance.

Agents broadcast the social bits of their implemented block over a fixed
network each period; receivers keep the records for a sliding window of T_L
periods.  Compliance of a social bit vector is the fraction of matching
(position, record) pairs in memory, and is defined to be 0 until the memory
span has elapsed, so norms only start to bind after period T_L.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class SocialNetwork:
    """Who receives whose social bits.

    `sources[q]` lists the agents whose shared bits agent q stores each
    period.  For even degree this is the symmetric ring construction
    (offsets +-1 .. +-d/2); degree 1 is a directed cycle (receive from the
    predecessor, send to the successor) because a bidirectional 1-regular
    graph would disconnect the team; odd degree > 1 adds the antipodal
    agent and needs an even team size.  Degree 0 means no sharing.
    """

    p: int
    d: int
    sources: tuple

    @property
    def neighbors(self):
        return self.sources


def ring_network(p, d):
    """Build the nearest-neighbor sharing network for p agents, degree d."""
    if p < 1:
        raise ParameterError(f"p={p} must be positive")
    if not 0 <= d <= p - 1:
        raise ParameterError(f"degree d={d} violates 0 <= d <= p-1={p - 1}")
    if d == 1:
        sources = tuple(((q - 1) % p,) for q in range(p))
    else:
        offsets = list(range(1, d // 2 + 1))
        srcs = []
        for q in range(p):
            near = {(q + o) % p for o in offsets} | {(q - o) % p for o in offsets}
            if d % 2 == 1:
                if p % 2 != 0:
                    raise ParameterError(f"odd degree d={d} needs an even team size, got p={p}")
                near.add((q + p // 2) % p)
            srcs.append(tuple(sorted(near)))
        sources = tuple(srcs)
    return SocialNetwork(p=p, d=d, sources=sources)


class NormMemory:
    """Timestamped store of peers' shared social bits.

    Records arrive in timestamp order and expire once they are T_L periods
    old.  Per-position one-counts are maintained incrementally so compliance
    is an exact integer ratio however large the memory is.
    """

    def __init__(self, n_s):
        if n_s < 0:
            raise ParameterError(f"n_s={n_s} must be non-negative")
        self.n_s = int(n_s)
        self._records = deque()
        self._ones = [0] * self.n_s

    def __len__(self):
        return len(self._records)

    @property
    def entries(self):
        """Records as (timestamp, bits tuple), oldest first."""
        return list(self._records)

    def add(self, t, social_bits):
        bits = tuple(int(b) for b in social_bits)
        if len(bits) != self.n_s:
            raise ParameterError(f"record has {len(bits)} bits, memory expects {self.n_s}")
        if self._records and t < self._records[-1][0]:
            raise ParameterError("records must be added in timestamp order")
        self._records.append((int(t), bits))
        for j, b in enumerate(bits):
            self._ones[j] += b

    def drop_older_than(self, cutoff):
        """Remove records with timestamp <= cutoff."""
        while self._records and self._records[0][0] <= cutoff:
            _, bits = self._records.popleft()
            for j, b in enumerate(bits):
                self._ones[j] -= b

    def match_count(self, social_bits):
        """Total matching (position, record) pairs against the stored records."""
        total = 0
        count = len(self._records)
        for j, b in enumerate(social_bits):
            total += self._ones[j] if int(b) == 1 else count - self._ones[j]
        return total


def share(net, t, cfg, memories):
    """Deliver every agent's period-t social bits along the network links.

    Each receiver q gains one record (t, social bits of src) per source;
    nothing else changes.  Mutates and returns `memories`.
    """
    social = [cfg.social(a) for a in range(net.p)]
    for q in range(net.p):
        for src in net.sources[q]:
            memories[q].add(t, social[src])
    return memories


def expire(mem, t, t_l):
    """Keep exactly the records with timestamp > t - t_l (window width t_l).

    A record stamped t' is usable through period t' + t_l - 1 and is removed
    at period t' + t_l.  Mutates and returns `mem`.
    """
    mem.drop_older_than(t - t_l)
    return mem


def compliance(social_bits, mem, t, t_l):
    """Fraction of matching social bits across remembered records.

    Zero while t <= t_l (norms are not formed yet), for an empty memory, and
    for a zero-width social vector.  Otherwise the integer match count
    divided once by (records * n_s), which equals the mean over records of
    each record's matching-bit fraction.
    """
    bits = np.asarray(social_bits)
    if bits.size != mem.n_s:
        raise ParameterError(f"social_bits has {bits.size} bits, memory expects {mem.n_s}")
    if t <= t_l or len(mem) == 0 or mem.n_s == 0:
        return 0.0
    return mem.match_count(bits) / (len(mem) * mem.n_s)
