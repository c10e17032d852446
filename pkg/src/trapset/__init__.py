"""Trapping-set census and asymptotic multiplicity prediction for random
LDPC Tanner-graph ensembles.

The package splits into: `ensemble` (degree-sequence realization and
configuration-model sampling), `structures` (induced subgraphs and the
TS/SS/ETS/LETS/ABS/EABS taxonomy), `enumeration` (exhaustive cycle and
structure counting plus a brute-force oracle), `asymptotics` (closed-form
expected multiplicities), and `harness` (Monte Carlo comparison runs and
report emission).  `cli` exposes all of it as the `trapset` command.
"""

from .ensemble import (
    DegreeSequencePair,
    EnsembleSpec,
    TannerGraph,
    girth,
    realize_degree_sequence,
    sample_tanner_graph,
)
from .structures import (
    CATEGORIES,
    CategorySet,
    StructureInstance,
    class_trichotomy,
    classify,
    cycle_rank,
    induce,
)
from .enumeration import (
    CycleRecord,
    MultiplicityTable,
    brute_force_census,
    census,
    enumerate_cycles,
    enumerate_structures,
)
from .asymptotics import (
    ApproxBound,
    CycleSignature,
    basic_tree_count_B,
    catalan_general,
    ets_expected_biregular,
    ets_expected_irregular_min_b,
    ets_expected_variable_regular,
    expected_cycles,
    expected_cycles_partial_signature,
    expected_cycles_with_signature,
    forest_partitions,
    lets_expected,
    specht_ratio,
    ss_expected_a0,
)
from .harness import ExperimentConfig, compare, emit_report, predict_table, run_experiment

__version__ = "0.1.0"
