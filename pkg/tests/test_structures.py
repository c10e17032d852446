import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapset.ensemble import EnsembleSpec
from trapset.enumeration import iter_structure_instances
from trapset.structures import (
    ClassKind,
    UnsupportedCategoryError,
    Verdict,
    class_trichotomy,
    classify,
    cycle_rank,
    induce,
)
from trapset.asymptotics import lets_expected

from conftest import SPEC_36, SPEC_IRR, sampled


def test_induce_four_cycle(four_cycle):
    inst = induce(four_cycle, [0, 1])
    assert inst.a == 2 and inst.b == 0
    assert inst.checks_even == frozenset({0, 1})
    assert not inst.checks_odd
    assert len(inst.induced_edges) == 4


def test_induce_six_cycle_with_exits(six_cycle_exits):
    inst = induce(six_cycle_exits, [0, 1, 2])
    assert inst.a == 3 and inst.b == 3
    assert inst.checks_odd == frozenset({3, 4, 5})
    assert inst.checks_even == frozenset({0, 1, 2})


def test_induce_validates_ids(four_cycle):
    with pytest.raises(ValueError):
        induce(four_cycle, [])
    with pytest.raises(ValueError):
        induce(four_cycle, [0, 2])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 500), size=st.integers(1, 5), data=st.data())
def test_induce_parity_oracle(seed, size, data):
    g = sampled(SPEC_IRR, seed=seed)
    members = data.draw(
        st.lists(st.integers(0, g.n - 1), min_size=size, max_size=size, unique=True)
    )
    inst = induce(g, members)
    # Independent tally: count each check's edges into the set directly.
    tally = {}
    for u in set(members):
        for w in g.variable_neighbors(u):
            tally[w] = tally.get(w, 0) + 1
    odd = {w for w, d in tally.items() if d % 2 == 1}
    assert inst.b == len(odd)
    assert inst.checks_odd == frozenset(odd)


def test_classify_shared_check_pair(shared_one_check):
    cats = classify(induce(shared_one_check, [0, 1]), shared_one_check)
    assert cats.is_ets and not cats.is_lets
    assert not cats.is_ss and not cats.is_abs


def test_classify_degree2_cycle(six_cycle_deg2):
    inst = induce(six_cycle_deg2, [0, 1, 2])
    assert inst.b == 0
    cats = classify(inst, six_cycle_deg2)
    assert cats.is_ss and cats.is_ets and cats.is_lets and cats.is_abs and cats.is_eabs
    assert cats.is_ts


def test_classify_eight_cycle_pendants(eight_cycle_pendants):
    inst = induce(eight_cycle_pendants, [0, 1, 2, 3])
    assert (inst.a, inst.b) == (4, 4)
    cats = classify(inst, eight_cycle_pendants)
    assert cats.is_abs and cats.is_ets and cats.is_lets and cats.is_eabs
    assert not cats.is_ss


def test_cycle_rank_tree(tree_four_vars):
    inst = induce(tree_four_vars, [0, 1, 2, 3])
    assert (inst.a, inst.b) == (4, 2)
    verdict = cycle_rank(inst)
    assert verdict.cycle_rank == 0
    assert verdict.exponent == 1
    assert verdict.verdict is Verdict.TENDS_TO_INFINITY


def test_cycle_rank_single_cycle(six_cycle_deg2):
    verdict = cycle_rank(induce(six_cycle_deg2, [0, 1, 2]))
    assert verdict.cycle_rank == 1
    assert verdict.exponent == 0
    assert verdict.verdict is Verdict.TENDS_TO_CONSTANT


def test_cycle_rank_two_cycles(k23):
    verdict = cycle_rank(induce(k23, [0, 1]))
    assert verdict.cycle_rank == 2
    assert verdict.exponent == -1
    assert verdict.verdict is Verdict.TENDS_TO_ZERO


def test_hierarchy_on_sampled_graphs():
    for seed in (3, 4):
        g = sampled(SPEC_IRR, seed=seed)
        for inst in iter_structure_instances(g, "TS", a_max=4):
            cats = classify(inst, g)
            if cats.is_lets:
                assert cats.is_ets
            if cats.is_eabs:
                assert cats.is_abs
                # All variable degrees are >= 2 here, so EABS implies LETS.
                assert cats.is_lets


def test_edge_accounting_variable_regular():
    g = sampled(SPEC_36, seed=9)
    d_v = 3
    seen_ets = 0
    for inst in iter_structure_instances(g, "ETS", a_max=4):
        seen_ets += 1
        assert 2 * (inst.node_count - inst.edge_count) == 2 * inst.a + inst.b - inst.a * d_v
    assert seen_ets > 0


def test_trichotomy_spec_examples():
    d3 = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=100)
    d4 = EnsembleSpec(lam={4: 1.0}, rho={8: 1.0}, n=100)
    assert class_trichotomy("ETS", 2, 4, d3).kind is ClassKind.ALL_INFINITY
    assert class_trichotomy("LETS", 4, 6, d3).kind is ClassKind.IMPOSSIBLE
    assert class_trichotomy("ABS", 3, 4, d4).kind is ClassKind.IMPOSSIBLE


def test_trichotomy_regular_table():
    d3 = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=100)
    assert class_trichotomy("ETS", 4, 4, d3).kind is ClassKind.ALL_CONSTANT
    assert class_trichotomy("ETS", 4, 2, d3).kind is ClassKind.ALL_ZERO
    assert class_trichotomy("LETS", 4, 4, d3).kind is ClassKind.ALL_CONSTANT
    assert class_trichotomy("LETS", 4, 4, d3).witness is not None
    assert class_trichotomy("ABS", 4, 4, d3).kind is ClassKind.MIXED
    assert class_trichotomy("ABS", 4, 3, d3).kind is ClassKind.ALL_ZERO
    assert class_trichotomy("SS", 4, 1, d3).kind is ClassKind.ALL_ZERO
    d2 = EnsembleSpec(lam={2: 1.0}, rho={4: 1.0}, n=100)
    assert class_trichotomy("SS", 4, 0, d2).kind is ClassKind.MIXED
    assert class_trichotomy("SS", 4, 4, d2).kind is ClassKind.IMPOSSIBLE
    assert class_trichotomy("EABS", 4, 0, d2).kind is ClassKind.ALL_CONSTANT


def test_trichotomy_irregular():
    irr = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=100)
    assert class_trichotomy("ETS", 4, 5, irr).kind is ClassKind.MIXED
    assert class_trichotomy("ETS", 4, 5, irr).consistent is False
    assert class_trichotomy("LETS", 4, 3, irr).kind is ClassKind.ALL_ZERO
    assert class_trichotomy("LETS", 4, 9, irr).kind is ClassKind.IMPOSSIBLE
    assert class_trichotomy("LETS", 4, 6, irr).kind is ClassKind.MIXED
    assert class_trichotomy("ABS", 4, 4, irr).kind is ClassKind.MIXED
    assert class_trichotomy("ABS", 4, 3, irr).kind is ClassKind.ALL_ZERO


def test_trichotomy_rejects_raw_ts():
    spec = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=10)
    with pytest.raises(UnsupportedCategoryError):
        class_trichotomy("TS", 3, 3, spec)
    with pytest.raises(UnsupportedCategoryError):
        class_trichotomy("FABS", 3, 3, spec)


def test_verdict_rank_consistency_on_enumerated_sets():
    # Connected instances: growth <=> rank 0, constant <=> rank 1,
    # vanishing <=> rank >= 2, all through the exponent.
    for spec_kwargs, seed in ((SPEC_36, 15), (SPEC_IRR, 16)):
        g = sampled(spec_kwargs, seed=seed)
        checked = 0
        for inst in iter_structure_instances(g, "TS", a_max=4):
            verdict = cycle_rank(inst)
            assert verdict.exponent == inst.node_count - inst.edge_count
            if verdict.verdict is Verdict.TENDS_TO_INFINITY:
                assert verdict.cycle_rank == 0 and verdict.exponent > 0
            elif verdict.verdict is Verdict.TENDS_TO_CONSTANT:
                assert verdict.cycle_rank == 1 and verdict.exponent == 0
            else:
                assert verdict.cycle_rank >= 2 and verdict.exponent < 0
            checked += 1
        assert checked > 0


def test_trichotomy_consistent_with_lets_expected():
    # Variable-regular grid: the expectation is nonzero exactly where the
    # class verdict is the constant one.
    for d_v, d_c in ((3, 6), (4, 8)):
        spec = EnsembleSpec(lam={d_v: 1.0}, rho={d_c: 1.0}, n=100)
        for a in range(2, 7):
            for b in range(0, a * d_v + 1):
                verdict = class_trichotomy("LETS", a, b, spec)
                value = lets_expected(spec, a, b)
                if verdict.kind in (ClassKind.ALL_ZERO, ClassKind.IMPOSSIBLE):
                    assert value == 0.0, (a, b)
                elif verdict.kind is ClassKind.ALL_CONSTANT:
                    assert value > 0.0, (a, b)
