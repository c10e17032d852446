"""Induced subgraphs of variable-node subsets and their taxonomy.

A subset S of variable nodes induces the subgraph G(S) containing S, its
check neighborhood, and all edges in between.  Checks split by induced
degree parity into unsatisfied (odd, counted by b) and satisfied (even);
the taxonomy predicates below are all local to G(S).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .ensemble import EnsembleSpec, TannerGraph

__all__ = [
    "CATEGORIES",
    "StructureInstance",
    "CategorySet",
    "Verdict",
    "AsymptoticVerdict",
    "ClassKind",
    "ClassVerdict",
    "UnsupportedCategoryError",
    "induce",
    "classify",
    "cycle_rank",
    "class_trichotomy",
]

CATEGORIES = ("TS", "SS", "ETS", "LETS", "ABS", "EABS")


class UnsupportedCategoryError(ValueError):
    """Category outside the supported taxonomy (or with no class-level rule)."""


@dataclass(frozen=True)
class StructureInstance:
    """An induced subgraph G(S), recorded as its variable set plus check split."""

    variables: tuple[int, ...]
    checks_odd: frozenset[int]
    checks_even: frozenset[int]
    induced_edges: tuple[tuple[int, int], ...]

    @property
    def a(self) -> int:
        return len(self.variables)

    @property
    def b(self) -> int:
        return len(self.checks_odd)

    @property
    def checks(self) -> frozenset[int]:
        return self.checks_odd | self.checks_even

    @property
    def node_count(self) -> int:
        return self.a + len(self.checks_odd) + len(self.checks_even)

    @property
    def edge_count(self) -> int:
        return len(self.induced_edges)


def induce(graph: TannerGraph, variables: Iterable[int]) -> StructureInstance:
    """Build the induced subgraph of a variable subset.

    Raises ValueError for an empty set or out-of-range ids.
    """
    var_set = sorted(set(int(v) for v in variables))
    if not var_set:
        raise ValueError("variable set must be nonempty")
    if var_set[0] < 0 or var_set[-1] >= graph.n:
        raise ValueError(f"variable id out of range 0..{graph.n - 1}: {var_set}")
    edges = []
    check_deg: dict[int, int] = {}
    for u in var_set:
        for w in graph.variable_neighbors(u):
            edges.append((u, w))
            check_deg[w] = check_deg.get(w, 0) + 1
    odd = frozenset(w for w, d in check_deg.items() if d % 2 == 1)
    even = frozenset(w for w, d in check_deg.items() if d % 2 == 0)
    return StructureInstance(
        variables=tuple(var_set),
        checks_odd=odd,
        checks_even=even,
        induced_edges=tuple(edges),
    )


@dataclass(frozen=True)
class CategorySet:
    """Membership flags for one structure; every structure is a TS."""

    is_ss: bool
    is_ets: bool
    is_lets: bool
    is_abs: bool
    is_eabs: bool

    @property
    def is_ts(self) -> bool:
        return True

    def labels(self) -> tuple[str, ...]:
        out = ["TS"]
        for name, flag in (
            ("SS", self.is_ss),
            ("ETS", self.is_ets),
            ("LETS", self.is_lets),
            ("ABS", self.is_abs),
            ("EABS", self.is_eabs),
        ):
            if flag:
                out.append(name)
        return tuple(out)

    def matches(self, category: str) -> bool:
        if category not in CATEGORIES:
            raise UnsupportedCategoryError(f"unknown category {category!r}")
        return {
            "TS": True,
            "SS": self.is_ss,
            "ETS": self.is_ets,
            "LETS": self.is_lets,
            "ABS": self.is_abs,
            "EABS": self.is_eabs,
        }[category]


def classify(inst: StructureInstance, graph: Optional[TannerGraph] = None) -> CategorySet:
    """Evaluate all category predicates on an instance.

    SS: every induced check degree >= 2.  ETS: degrees all 1 or 2.
    LETS: ETS where each variable touches >= 2 satisfied (even) checks.
    ABS: each variable touches strictly more satisfied than unsatisfied
    checks.  EABS: ABS and ETS.

    The graph argument is accepted for interface symmetry; every edge of a
    member variable is induced, so the instance already carries the degrees.
    """
    check_deg: dict[int, int] = {}
    sat_per_var: dict[int, int] = {v: 0 for v in inst.variables}
    unsat_per_var: dict[int, int] = {v: 0 for v in inst.variables}
    for _, w in inst.induced_edges:
        check_deg[w] = check_deg.get(w, 0) + 1
    for u, w in inst.induced_edges:
        if check_deg[w] % 2 == 0:
            sat_per_var[u] += 1
        else:
            unsat_per_var[u] += 1
    degrees = check_deg.values()
    is_ss = all(d >= 2 for d in degrees)
    is_ets = all(d <= 2 for d in degrees)
    is_lets = is_ets and all(s >= 2 for s in sat_per_var.values())
    is_abs = all(sat_per_var[v] > unsat_per_var[v] for v in inst.variables)
    return CategorySet(
        is_ss=is_ss,
        is_ets=is_ets,
        is_lets=is_lets,
        is_abs=is_abs,
        is_eabs=is_abs and is_ets,
    )


class Verdict(enum.Enum):
    """Limit of the expected multiplicity as the block length grows."""

    TENDS_TO_INFINITY = "infinity"
    TENDS_TO_CONSTANT = "constant"
    TENDS_TO_ZERO = "zero"


@dataclass(frozen=True)
class AsymptoticVerdict:
    exponent: int
    cycle_rank: int
    verdict: Verdict


def cycle_rank(inst: StructureInstance) -> AsymptoticVerdict:
    """Cycle rank and asymptotic verdict of an induced subgraph.

    The multiplicity of a local structure scales as n**(|V| - |E|), so the
    verdict follows the sign of that exponent.  For connected structures
    this coincides with the cycle count: rank 0 (forest) grows without
    bound, rank 1 (unicyclic) tends to a constant, rank >= 2 vanishes.
    Disconnected structures are resolved by the exponent rule.
    """
    nodes = [("v", v) for v in inst.variables] + [("c", w) for w in inst.checks]
    index = {node: i for i, node in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in inst.induced_edges:
        ru, rw = find(index[("v", u)]), find(index[("c", w)])
        if ru != rw:
            parent[ru] = rw
    components = sum(1 for i, p in enumerate(parent) if find(i) == i)
    exponent = len(nodes) - len(inst.induced_edges)
    rank = len(inst.induced_edges) - len(nodes) + components
    if exponent > 0:
        verdict = Verdict.TENDS_TO_INFINITY
    elif exponent == 0:
        verdict = Verdict.TENDS_TO_CONSTANT
    else:
        verdict = Verdict.TENDS_TO_ZERO
    return AsymptoticVerdict(exponent=exponent, cycle_rank=rank, verdict=verdict)


class ClassKind(enum.Enum):
    IMPOSSIBLE = "Impossible"
    ALL_ZERO = "AllZero"
    MIXED = "Mixed"
    ALL_CONSTANT = "AllConstant"
    ALL_INFINITY = "AllInfinity"


@dataclass(frozen=True)
class ClassVerdict:
    """Asymptotic behavior of every structure in an (a, b) class.

    ``consistent`` is True when all non-isomorphic members share one limit;
    ``witness`` names the surviving shape for classes whose constant-limit
    members are characterized exactly.
    """

    kind: ClassKind
    consistent: Optional[bool]
    reason: str
    witness: Optional[str] = None


def _regular_trichotomy(category: str, a: int, b: int, d: int) -> ClassVerdict:
    parity_ok = (a * d - b) % 2 == 0
    ceil_half = -(-d // 2)

    if category == "ETS":
        if b > a * d:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "b exceeds the induced edge count")
        if not parity_ok:
            return ClassVerdict(
                ClassKind.IMPOSSIBLE, None, "a*d_v - b must be even for degree-1/2 checks"
            )
        if b > a * (d - 2):
            return ClassVerdict(
                ClassKind.ALL_INFINITY, True, "every member is a forest (b/a > d_v - 2)"
            )
        if b == a * (d - 2):
            return ClassVerdict(
                ClassKind.ALL_CONSTANT,
                True,
                "every member contains exactly one cycle",
                witness="single even cycle with tree appendages, all variables degree d_v",
            )
        return ClassVerdict(ClassKind.ALL_ZERO, True, "every member has >= 2 cycles (b/a < d_v - 2)")

    if category == "LETS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has no satisfied check")
        if b > a * (d - 2):
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "leafless classes require b <= a(d_v - 2)")
        if not parity_ok:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a*d_v - b must be even")
        if b == a * (d - 2):
            return ClassVerdict(
                ClassKind.ALL_CONSTANT,
                True,
                "members are exactly the chordless cycles of length 2a",
                witness="simple chordless cycle of length 2a",
            )
        return ClassVerdict(ClassKind.ALL_ZERO, True, "every member has >= 2 cycles")

    if category == "EABS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has no satisfied check")
        if b > a * (ceil_half - 1):
            return ClassVerdict(
                ClassKind.IMPOSSIBLE, None, "b <= a(ceil(d_v/2) - 1) for absorbing classes"
            )
        if not parity_ok:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a*d_v - b must be even")
        if d >= 4:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "all absorbing classes vanish at d_v >= 4")
        # For d_v in {2, 3} elementary absorbing sets coincide with LETSs.
        if b == a * (d - 2):
            return ClassVerdict(
                ClassKind.ALL_CONSTANT,
                True,
                "members are exactly the chordless cycles of length 2a",
                witness="simple chordless cycle of length 2a",
            )
        return ClassVerdict(ClassKind.ALL_ZERO, True, "every member has >= 2 cycles")

    if category == "ABS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has no satisfied check")
        if b > a * (ceil_half - 1):
            return ClassVerdict(
                ClassKind.IMPOSSIBLE, None, "b <= a(ceil(d_v/2) - 1) for absorbing classes"
            )
        if d >= 4:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "all absorbing classes vanish at d_v >= 4")
        if d == 3:
            if b == a:
                return ClassVerdict(
                    ClassKind.MIXED,
                    False,
                    "cycle-shaped members persist, all others vanish",
                    witness="simple cycle of length 2a, all variables degree 3",
                )
            return ClassVerdict(ClassKind.ALL_ZERO, True, "b != a classes vanish at d_v = 3")
        # d == 2: only b == 0 is possible (handled bound above).
        return ClassVerdict(
            ClassKind.MIXED,
            False,
            "cycle-shaped members persist, all others vanish",
            witness="simple cycle of length 2a, all variables degree 2",
        )

    if category == "SS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has only degree-1 checks")
        if 3 * b > a * d:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "odd checks need degree >= 3 in a stopping set")
        if d >= 3:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "stopping sets vanish at d_v >= 3")
        # d == 2.
        if b >= a:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "degree-2 stopping sets require b < a")
        if b == 0:
            return ClassVerdict(
                ClassKind.MIXED,
                False,
                "cycle-shaped members persist, all others vanish",
                witness="simple cycle of length 2a, all variables degree 2",
            )
        return ClassVerdict(ClassKind.ALL_ZERO, True, "b > 0 stopping-set classes vanish")

    raise UnsupportedCategoryError(f"no class-level rule for category {category!r}")


def _irregular_trichotomy(category: str, a: int, b: int, spec: EnsembleSpec) -> ClassVerdict:
    q, qmax = spec.d_vmin, spec.d_vmax
    ceil_half_max = -(-qmax // 2)

    if category == "ETS":
        if b > a * qmax:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "b exceeds the maximum induced edge count")
        return ClassVerdict(
            ClassKind.MIXED, False, "elementary classes behave inconsistently in irregular ensembles"
        )

    if category == "LETS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has no satisfied check")
        if b > a * (qmax - 2):
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "leafless classes require b <= a(d_vmax - 2)")
        if b < a * (q - 2):
            return ClassVerdict(ClassKind.ALL_ZERO, True, "every member has >= 2 cycles below the b floor")
        return ClassVerdict(
            ClassKind.MIXED,
            False,
            "cycle-shaped members persist, all others vanish",
            witness="simple cycle of length 2a with variable degrees summing to 2a + b",
        )

    if category in ("ABS", "EABS"):
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has no satisfied check")
        if b > a * (ceil_half_max - 1):
            return ClassVerdict(
                ClassKind.IMPOSSIBLE, None, "b <= a(ceil(d_vmax/2) - 1) for absorbing classes"
            )
        if q >= 4:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "all absorbing classes vanish at d_vmin >= 4")
        if q == 3 and b != a:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "only b == a survives at d_vmin = 3")
        if b > a:
            return ClassVerdict(
                ClassKind.ALL_ZERO, True, "surviving members carry at most one odd check per variable"
            )
        return ClassVerdict(
            ClassKind.MIXED,
            False,
            "cycle-shaped members with degree-2/3 variables persist, all others vanish",
            witness="simple cycle of length 2a over degree-2/3 variables with b degree-3 variables",
        )

    if category == "SS":
        if a == 1:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "a single variable has only degree-1 checks")
        if 3 * b > a * qmax:
            return ClassVerdict(ClassKind.IMPOSSIBLE, None, "odd checks need degree >= 3 in a stopping set")
        if q >= 3:
            return ClassVerdict(ClassKind.ALL_ZERO, True, "stopping sets vanish at d_vmin >= 3")
        if b == 0:
            return ClassVerdict(
                ClassKind.MIXED,
                False,
                "cycle-shaped members persist, all others vanish",
                witness="simple cycle of length 2a, all variables degree 2",
            )
        return ClassVerdict(ClassKind.ALL_ZERO, True, "b > 0 stopping-set classes vanish")

    raise UnsupportedCategoryError(f"no class-level rule for category {category!r}")


def class_trichotomy(category: str, a: int, b: int, spec: EnsembleSpec) -> ClassVerdict:
    """Asymptotic verdict for the whole (a, b) class of a category.

    Variable-regular ensembles get the exact table keyed on b/a versus
    d_v - 2; irregular ensembles get the proven special cases and an
    inconsistency flag elsewhere.  Raw TS classes have no class-level rule
    and raise :class:`UnsupportedCategoryError`.
    """
    if category not in CATEGORIES or category == "TS":
        raise UnsupportedCategoryError(
            f"no class-level verdict rule for category {category!r}"
        )
    if a < 1 or b < 0:
        raise ValueError(f"invalid class (a={a}, b={b})")
    if b > a * spec.d_vmax:
        return ClassVerdict(ClassKind.IMPOSSIBLE, None, "b exceeds the maximum induced edge count")
    if spec.is_variable_regular:
        return _regular_trichotomy(category, a, b, spec.d_vmin)
    return _irregular_trichotomy(category, a, b, spec)
