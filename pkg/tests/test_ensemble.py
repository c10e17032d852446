import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapset.ensemble import (
    EnsembleError,
    EnsembleSpec,
    InfeasibleSpecError,
    SamplingBudgetError,
    TannerGraph,
    girth,
    realize_degree_sequence,
    sample_tanner_graph,
)
from trapset.enumeration import count_four_cycles, enumerate_cycles


def test_spec_validation():
    with pytest.raises(EnsembleError):
        EnsembleSpec(lam={3: 0.9}, rho={6: 1.0}, n=10)
    with pytest.raises(EnsembleError):
        EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=0)
    with pytest.raises(EnsembleError):
        EnsembleSpec(lam={0: 1.0}, rho={6: 1.0}, n=10)
    with pytest.raises(EnsembleError):
        EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=10, girth_min=5)
    spec = EnsembleSpec(lam={2: 0.5, 4: 0.5}, rho={3: 1.0}, n=12)
    assert spec.d_vmin == 2 and spec.d_vmax == 4
    assert not spec.degenerate_degree_one
    assert EnsembleSpec(lam={1: 0.5, 3: 0.5}, rho={3: 1.0}, n=12).degenerate_degree_one


def test_spec_moments_and_fractions():
    spec = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=1000)
    assert math.isclose(spec.var_moment, 0.4286 * 2 + 0.5714 * 3)
    assert math.isclose(spec.check_moment, 6.0)
    fracs = spec.var_node_fractions
    assert math.isclose(fracs[3], 0.5, rel_tol=1e-3)
    assert math.isclose(spec.avg_check_degree, 7.0)


def test_realize_trivial_symmetric():
    seq = realize_degree_sequence(EnsembleSpec(lam={2: 1.0}, rho={2: 1.0}, n=2))
    assert seq.variable_degrees == (2, 2)
    assert seq.check_degrees == (2, 2)
    assert seq.edge_count == 4


def test_realize_biregular_1008():
    seq = realize_degree_sequence(EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=1008))
    assert seq.variable_degrees == (3,) * 1008
    assert seq.check_degrees == (6,) * 504
    assert seq.edge_count == 3024


def test_realize_irregular_1000():
    # lam_3/3 == lam_4/4: equal node fractions on the variable side.
    spec = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=1000)
    seq = realize_degree_sequence(spec)
    assert seq.variable_degrees.count(3) == 500
    assert seq.variable_degrees.count(4) == 500
    assert seq.check_degrees == (7,) * 500
    assert seq.edge_count == 3500


def test_realize_infeasible_names_deficit():
    with pytest.raises(InfeasibleSpecError) as err:
        realize_degree_sequence(EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=1001))
    assert err.value.deficit == 3


def test_realize_too_small_for_support():
    with pytest.raises(InfeasibleSpecError):
        realize_degree_sequence(EnsembleSpec(lam={2: 0.999, 9: 0.001}, rho={3: 1.0}, n=3))


def test_realize_mixed_check_side_repair():
    # Rounded totals miss by two edges; one node moves from degree 5 to 7.
    spec = EnsembleSpec(lam={3: 1.0}, rho={5: 0.5, 7: 0.5}, n=20)
    seq = realize_degree_sequence(spec)
    assert sum(seq.check_degrees) == 60
    counts = {d: seq.check_degrees.count(d) for d in (5, 7)}
    fracs = spec.check_node_fractions
    for d, c in counts.items():
        assert abs(c / seq.n_checks - fracs[d]) <= spec.d_cmax / seq.n_checks


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(20, 200),
    w3=st.integers(1, 9),
    dc=st.sampled_from([4, 5, 6]),
)
def test_realize_handshake_and_fraction_bounds(n, w3, dc):
    lam = {2: w3 / 10, 3: 1 - w3 / 10}
    spec = EnsembleSpec(lam=lam, rho={dc: 1.0}, n=n)
    try:
        seq = realize_degree_sequence(spec)
    except InfeasibleSpecError:
        return  # indivisible edge totals are a legitimate refusal
    assert sum(seq.variable_degrees) == sum(seq.check_degrees)
    assert len(seq.variable_degrees) == n
    fracs = spec.var_node_fractions
    for d in lam:
        count = seq.variable_degrees.count(d)
        assert abs(count / n - fracs[d]) <= spec.d_vmax / n


def test_sample_unique_four_cycle():
    seq = realize_degree_sequence(EnsembleSpec(lam={2: 1.0}, rho={2: 1.0}, n=2))
    expected = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for seed in (0, 1, 17, 2**60):
        g = sample_tanner_graph(seq, seed=seed)
        assert sorted(g.edges()) == expected


def test_sample_degree_fidelity_and_simplicity():
    spec = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=56)
    seq = realize_degree_sequence(spec)
    g = sample_tanner_graph(seq, seed=3, max_retries=10**6)
    assert g.variable_degrees == seq.variable_degrees
    assert g.check_degrees == seq.check_degrees
    for u in range(g.n):
        nbrs = g.variable_neighbors(u)
        assert len(set(nbrs)) == len(nbrs)


def test_sample_deterministic():
    spec = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=1000)
    seq = realize_degree_sequence(spec)
    a = sample_tanner_graph(seq, seed=99)
    b = sample_tanner_graph(seq, seed=99)
    c = sample_tanner_graph(seq, seed=100)
    assert a.to_text() == b.to_text()
    assert a.to_text() != c.to_text()


def test_sample_girth_conditioning_4000():
    spec = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=4000)
    seq = realize_degree_sequence(spec)
    g = sample_tanner_graph(seq, seed=11, girth_min=6)
    assert g.edge_count == 12000
    assert girth(g) >= 6


def test_sample_girth_budget_error():
    seq = realize_degree_sequence(EnsembleSpec(lam={2: 1.0}, rho={2: 1.0}, n=2))
    with pytest.raises(SamplingBudgetError) as err:
        sample_tanner_graph(seq, seed=0, girth_min=6, max_retries=50)
    assert err.value.reason == "girth"
    assert err.value.attempts >= 1


def test_girth_small_shapes(four_cycle, path_graph):
    assert girth(four_cycle) == 4
    assert girth(path_graph) is None


def test_girth_matches_cycle_enumeration():
    spec = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=48)
    seq = realize_degree_sequence(spec)
    for seed in (5, 6):
        g = sample_tanner_graph(seq, seed=seed, max_retries=10**5)
        recs = enumerate_cycles(g, 8)
        assert girth(g) == min(r.length for r in recs)
    g6 = sample_tanner_graph(seq, seed=7, girth_min=6, max_retries=10**5)
    assert girth(g6) >= 6
    assert all(r.length >= 6 for r in enumerate_cycles(g6, 6))


def test_four_cycle_monte_carlo_mean():
    # Sample mean over 300 draws against the asymptotic 4-cycle count
    # ((d_v-1)(d_c-1))^2 / 4 = 25, within three standard errors.
    spec = EnsembleSpec(lam={3: 1.0}, rho={6: 1.0}, n=500)
    seq = realize_degree_sequence(spec)
    counts = [
        count_four_cycles(sample_tanner_graph(seq, seed=1000 + t)) for t in range(300)
    ]
    mean = np.mean(counts)
    se = np.std(counts, ddof=1) / math.sqrt(len(counts))
    assert abs(mean - 25.0) <= 3 * se


def test_graph_text_roundtrip(four_cycle):
    text = four_cycle.to_text()
    assert text.splitlines()[0] == "2 2 4"
    again = TannerGraph.from_text(text)
    assert again.to_text() == text
    with pytest.raises(EnsembleError):
        TannerGraph.from_text("2 2 3\n0 0\n0 1\n")
    with pytest.raises(EnsembleError):
        TannerGraph.from_text("")


def test_graph_rejects_parallel_edges():
    with pytest.raises(EnsembleError):
        TannerGraph(1, 1, iter([(0, 0), (0, 0)]))


def test_spec_json_roundtrip():
    spec = EnsembleSpec(lam={3: 0.4286, 4: 0.5714}, rho={7: 1.0}, n=1000, girth_min=6)
    again = EnsembleSpec.from_json_dict(spec.to_json_dict())
    assert again == spec
