"""Sharing network, memory expiry, and norm-compliance tests."""

from fractions import Fraction

import numpy as np
import pytest

import teamnorms as tn


def eq9_reference(social_bits, records, t, t_l, n_s):
    """Record-averaged matching fraction, evaluated in exact arithmetic."""
    if t <= t_l or not records or n_s == 0:
        return 0.0
    acc = Fraction(0)
    for _, rec in records:
        matches = sum(1 for a, b in zip(social_bits, rec) if a == b)
        acc += Fraction(matches, n_s)
    return float(acc / len(records))


# ---------------------------------------------------------------------------
# networks


def test_ring_of_four_connects_adjacent_agents():
    net = tn.ring_network(4, 2)
    assert net.sources == ((1, 3), (0, 2), (1, 3), (0, 2))


def test_even_degree_networks_are_bidirectional_and_regular():
    for p, d in [(4, 2), (5, 2), (6, 4), (8, 2)]:
        net = tn.ring_network(p, d)
        for q in range(p):
            assert len(net.sources[q]) == d
            assert q not in net.sources[q]
            for other in net.sources[q]:
                assert q in net.sources[other]


def test_degree_one_is_a_directed_cycle():
    net = tn.ring_network(4, 1)
    assert net.sources == ((3,), (0,), (1,), (2,))


def test_degree_three_on_four_agents_is_complete():
    net = tn.ring_network(4, 3)
    for q in range(4):
        assert sorted(net.sources[q]) == sorted(set(range(4)) - {q})


def test_degree_zero_shares_nothing():
    net = tn.ring_network(4, 0)
    assert net.sources == ((), (), (), ())


def test_network_degree_validation():
    with pytest.raises(tn.ParameterError, match="0 <= d"):
        tn.ring_network(4, 4)
    with pytest.raises(tn.ParameterError, match="even team size"):
        tn.ring_network(5, 3)


# ---------------------------------------------------------------------------
# sharing


def distinct_config():
    """p=4, n=4, n_s=2 config whose social pairs identify the sender."""
    bits = [0, 0, 0, 0,  # agent 0 social (0, 0)
            0, 0, 0, 1,  # agent 1 social (0, 1)
            0, 0, 1, 0,  # agent 2 social (1, 0)
            0, 0, 1, 1]  # agent 3 social (1, 1)
    return tn.TeamConfig(bits, n=4, n_s=2)


def test_share_adds_one_record_per_link():
    net = tn.ring_network(4, 2)
    memories = [tn.NormMemory(2) for _ in range(4)]
    tn.share(net, 1, distinct_config(), memories)
    assert all(len(m) == 2 for m in memories)


def test_ring_share_delivers_only_adjacent_social_bits():
    net = tn.ring_network(4, 2)
    memories = [tn.NormMemory(2) for _ in range(4)]
    tn.share(net, 5, distinct_config(), memories)
    assert memories[0].entries == [(5, (0, 1)), (5, (1, 1))]  # from agents 1 and 3
    assert memories[2].entries == [(5, (0, 1)), (5, (1, 1))]


def test_own_social_bits_never_enter_own_memory():
    cfg = distinct_config()
    senders = {tuple(cfg.social(a)): a for a in range(4)}
    for d in (1, 2, 3):
        net = tn.ring_network(4, d)
        memories = [tn.NormMemory(2) for _ in range(4)]
        tn.share(net, 1, cfg, memories)
        for q in range(4):
            assert all(senders[rec] != q for _, rec in memories[q].entries)


# ---------------------------------------------------------------------------
# expiry


def test_expiry_keeps_exactly_the_window():
    mem = tn.NormMemory(1)
    for t in range(1, 8):
        mem.add(t, (1,))
    tn.expire(mem, 7, 3)  # keep stamps > 4
    assert [ts for ts, _ in mem.entries] == [5, 6, 7]


def test_record_expires_exactly_at_stamp_plus_span():
    mem = tn.NormMemory(1)
    mem.add(10, (1,))
    tn.expire(mem, 10 + 3 - 1, 3)
    assert len(mem) == 1  # still usable through t' + t_l - 1
    tn.expire(mem, 10 + 3, 3)
    assert len(mem) == 0


def test_expiring_fresh_or_empty_memory_is_a_no_op():
    mem = tn.NormMemory(2)
    tn.expire(mem, 100, 50)
    assert len(mem) == 0
    mem.add(80, (0, 1))
    tn.expire(mem, 100, 50)
    assert mem.entries == [(80, (0, 1))]


def test_records_must_arrive_in_timestamp_order():
    mem = tn.NormMemory(1)
    mem.add(5, (1,))
    with pytest.raises(tn.ParameterError, match="order"):
        mem.add(4, (0,))


# ---------------------------------------------------------------------------
# compliance


def test_compliance_is_zero_before_norms_form():
    mem = tn.NormMemory(2)
    mem.add(1, (1, 1))
    mem.add(2, (1, 1))
    assert tn.compliance((1, 1), mem, t=50, t_l=50) == 0.0
    assert tn.compliance((1, 1), mem, t=51, t_l=50) == 1.0


def test_compliance_of_fully_matching_memory_is_one():
    mem = tn.NormMemory(3)
    for t in range(1, 6):
        mem.add(t, (1, 0, 1))
    assert tn.compliance((1, 0, 1), mem, t=99, t_l=10) == 1.0
    assert tn.compliance((0, 1, 0), mem, t=99, t_l=10) == 0.0


def test_compliance_hand_case():
    mem = tn.NormMemory(2)
    mem.add(1, (0, 0))
    mem.add(2, (1, 1))
    # one matching bit per record: (0.5 + 0.5) / 2
    assert tn.compliance((0, 1), mem, t=60, t_l=50) == 0.5


def test_empty_memory_and_zero_social_width_give_zero():
    assert tn.compliance((0, 1), tn.NormMemory(2), t=99, t_l=10) == 0.0
    assert tn.compliance((), tn.NormMemory(0), t=99, t_l=10) == 0.0


def test_compliance_matches_exact_reference_on_random_memories():
    rng = np.random.default_rng(17)
    for _ in range(500):
        n_s = int(rng.integers(1, 5))
        mem = tn.NormMemory(n_s)
        for t in range(1, int(rng.integers(1, 40))):
            mem.add(t, tuple(rng.integers(0, 2, size=n_s)))
        bits = tuple(rng.integers(0, 2, size=n_s))
        t, t_l = int(rng.integers(1, 100)), int(rng.integers(1, 60))
        got = tn.compliance(bits, mem, t, t_l)
        want = eq9_reference(bits, mem.entries, t, t_l, n_s)
        assert got == want


def test_compliance_invariant_under_record_permutation():
    rng = np.random.default_rng(19)
    records = [tuple(rng.integers(0, 2, size=2)) for _ in range(12)]
    a, b = tn.NormMemory(2), tn.NormMemory(2)
    for rec in records:
        a.add(7, rec)
    for rec in reversed(records):
        b.add(7, rec)
    bits = (1, 0)
    assert tn.compliance(bits, a, 99, 10) == tn.compliance(bits, b, 99, 10)


def test_single_social_bit_compliance_is_observed_frequency():
    mem = tn.NormMemory(1)
    draws = [1, 1, 0, 1, 0, 0, 0, 1, 1, 1]
    for t, b in enumerate(draws, start=1):
        mem.add(t, (b,))
    assert tn.compliance((1,), mem, 99, 10) == sum(draws) / len(draws)
    assert tn.compliance((0,), mem, 99, 10) == 1 - sum(draws) / len(draws)


def test_memory_reaches_steady_state_size_under_ring_sharing():
    p, d, t_l = 4, 2, 6
    net = tn.ring_network(p, d)
    memories = [tn.NormMemory(2) for _ in range(p)]
    cfg = distinct_config()
    for t in range(1, 30):
        for mem in memories:
            tn.expire(mem, t, t_l)
        tn.share(net, t, cfg, memories)
        if t >= t_l:
            assert all(len(m) == d * t_l for m in memories)
    for mem in memories:
        assert all(ts > 29 - t_l for ts, _ in mem.entries)
