from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapset.ensemble import EnsembleSpec, TannerGraph, realize_degree_sequence, sample_tanner_graph
from trapset.enumeration import (
    A_MAX_BUDGET,
    BruteForceScaleError,
    CycleBudgetError,
    EnumerationBudgetError,
    brute_force_census,
    census,
    count_four_cycles,
    enumerate_cycles,
    enumerate_structures,
    iter_structure_instances,
)
from trapset.structures import CATEGORIES, induce

from conftest import SPEC_36, SPEC_IRR, sampled


# -- cycles -------------------------------------------------------------------


def test_cycles_four_cycle_graph(four_cycle):
    recs = enumerate_cycles(four_cycle, 4, debug_check_unique=True)
    assert len(recs) == 1
    rec = recs[0]
    assert rec.length == 4 and rec.chordless
    assert rec.variable_degree_counts == {2: 2}
    assert rec.check_degree_counts == {2: 2}


def test_cycles_k23_hand_count(k23):
    # Three pairs of checks, each pair closing one 4-cycle through both vars.
    recs = enumerate_cycles(k23, 4, debug_check_unique=True)
    assert len(recs) == 3
    assert all(r.chordless for r in recs)
    # Two variables cannot host a 6-cycle: lengths stay at 4.
    recs6 = enumerate_cycles(k23, 6, debug_check_unique=True)
    assert sorted(r.length for r in recs6) == [4, 4, 4]


def test_cycles_match_pair_hash_counter():
    for seed in (1, 2, 3):
        g = sampled(SPEC_IRR, seed=seed)
        recs = enumerate_cycles(g, 4, debug_check_unique=True)
        assert len(recs) == count_four_cycles(g)


def test_cycles_budget_error():
    g = sampled(SPEC_36, seed=5)
    with pytest.raises(CycleBudgetError) as err:
        enumerate_cycles(g, 8, max_steps=50)
    assert err.value.cap == 50


def test_cycles_unique_emission_on_sampled_graph():
    g = sampled(SPEC_36, seed=8)
    enumerate_cycles(g, 8, debug_check_unique=True)  # raises on duplicates


def test_chordless_six_cycle_ensemble_mean():
    # Mean chordless 6-cycle count over seeds of the (3,6), n=1008 ensemble
    # against the asymptotic 166.6 (three standard errors of 8 draws).
    spec = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=1008)
    seq = realize_degree_sequence(spec)
    counts = []
    for seed in range(8):
        g = sample_tanner_graph(seq, seed=seed)
        recs = enumerate_cycles(g, 6)
        counts.append(sum(1 for r in recs if r.length == 6 and r.chordless))
    mean = sum(counts) / len(counts)
    sd = (sum((x - mean) ** 2 for x in counts) / (len(counts) - 1)) ** 0.5
    assert abs(mean - 1000 / 6) <= 3 * sd / len(counts) ** 0.5 + 1e-9


# -- structure census ---------------------------------------------------------


def test_enumerate_four_cycle_ss(four_cycle):
    table = enumerate_structures(four_cycle, "SS", a_max=2, b_max=10)
    assert table.nonzero() == {("SS", 2, 0): 1}


def test_enumerate_tight_pair_ets(tight_pair):
    table = enumerate_structures(tight_pair, "ETS", a_max=2, b_max=10)
    assert table.count("ETS", 2, 2) == 1


def test_brute_force_empty_budget(four_cycle):
    assert brute_force_census(four_cycle, 0, 10).nonzero() == {}


def test_brute_force_four_cycle(four_cycle):
    table = brute_force_census(four_cycle, 2, 10)
    for cat in ("SS", "ETS", "LETS", "ABS", "EABS", "TS"):
        assert table.count(cat, 2, 0) == 1


def test_brute_force_refuses_large_graphs():
    g = sampled({"lam": {3: 1.0}, "rho": {6: 1.0}, "n": 66}, seed=1)
    with pytest.raises(BruteForceScaleError):
        brute_force_census(g, 3, 5)


def test_enumerate_budget_guard(four_cycle):
    with pytest.raises(ValueError):
        enumerate_structures(four_cycle, "ETS", a_max=A_MAX_BUDGET + 1, b_max=5)
    with pytest.raises(ValueError):
        enumerate_structures(four_cycle, "XYZ", a_max=2, b_max=5)


def test_enumerate_max_sets_partial_result():
    g = sampled(SPEC_36, seed=4)
    with pytest.raises(EnumerationBudgetError) as err:
        enumerate_structures(g, "TS", a_max=5, b_max=15, max_sets=100)
    assert err.value.level >= 1
    assert isinstance(err.value.partial.nonzero(), dict)


def test_oracle_equivalence_seeded():
    for spec_kwargs, seed in ((SPEC_36, 21), (SPEC_IRR, 22)):
        g = sampled(spec_kwargs, seed=seed)
        reference = brute_force_census(g, 4, 12)
        fast = census(g, CATEGORIES, 4, 12)
        assert reference.same_counts(fast)


def test_prefix_stability_in_a_max():
    g = sampled(SPEC_36, seed=6)
    t4 = census(g, CATEGORIES, 4, 10)
    t5 = census(g, CATEGORIES, 5, 10)
    for (cat, a, b), v in t4.nonzero().items():
        assert t5.count(cat, a, b) == v
    assert {k: v for k, v in t5.nonzero().items() if k[1] <= 4} == t4.nonzero()


def test_b_max_windowing():
    g = sampled(SPEC_36, seed=6)
    wide = census(g, CATEGORIES, 4, 12)
    narrow = census(g, CATEGORIES, 4, 3)
    assert narrow.nonzero() == {k: v for k, v in wide.nonzero().items() if k[2] <= 3}


def test_worker_count_invariance():
    g = sampled({"lam": {3: 1.0}, "rho": {6: 1.0}, "n": 60}, seed=10)
    serial = enumerate_structures(g, "LETS", 5, 5, workers=1)
    threaded = enumerate_structures(g, "LETS", 5, 5, workers=2)
    assert serial.same_counts(threaded)


def test_instance_iterator_matches_census():
    g = sampled(SPEC_IRR, seed=30)
    table = census(g, CATEGORIES, 4, 12)
    tally: Counter = Counter()
    for inst in iter_structure_instances(g, "TS", 4, 12):
        tally[("TS", inst.a, inst.b)] += 1
    assert dict(tally) == {k: v for k, v in table.nonzero().items() if k[0] == "TS"}
    lets_tally: Counter = Counter()
    for inst in iter_structure_instances(g, "LETS", 4, 12):
        lets_tally[("LETS", inst.a, inst.b)] += 1
    assert dict(lets_tally) == {k: v for k, v in table.nonzero().items() if k[0] == "LETS"}


def test_cycle_structure_consistency():
    # Chordless 2a-cycles whose induced subgraph stays in the floor class
    # are exactly the (a, a(d_v - 2)) leafless sets.
    g = sampled({"lam": {3: 1.0}, "rho": {6: 1.0}, "n": 48}, seed=7)
    table = census(g, ("LETS",), 5, 5)
    by_len: Counter = Counter()
    for rec in enumerate_cycles(g, 10):
        if rec.chordless and induce(g, rec.variables).b == len(rec.variables):
            by_len[rec.length] += 1
    for a in (2, 3, 4, 5):
        assert by_len.get(2 * a, 0) == table.count("LETS", a, a)


def test_eabs_equals_lets_for_degree3(six_cycle_exits):
    g = sampled(SPEC_36, seed=12)
    table = census(g, ("LETS", "EABS"), 4, 8)
    lets = {k[1:]: v for k, v in table.nonzero().items() if k[0] == "LETS"}
    eabs = {k[1:]: v for k, v in table.nonzero().items() if k[0] == "EABS"}
    assert lets == eabs


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(2, 10),
    nc=st.integers(1, 8),
    edge_bits=st.data(),
)
def test_census_equals_oracle_on_random_graphs(n, nc, edge_bits):
    pairs = [(u, w) for u in range(n) for w in range(nc)]
    chosen = edge_bits.draw(
        st.lists(st.sampled_from(pairs), min_size=1, max_size=min(24, len(pairs)), unique=True)
    )
    graph = TannerGraph(n, nc, iter(chosen))
    reference = brute_force_census(graph, 4, 16)
    fast = census(graph, CATEGORIES, 4, 16)
    assert reference.same_counts(fast)


def test_table_csv_deterministic(four_cycle):
    t = brute_force_census(four_cycle, 2, 10)
    assert t.to_csv() == t.to_csv()
    assert t.to_csv().splitlines()[0] == "category,a,b,count"
