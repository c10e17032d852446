"""Exhaustive counting of cycles and connected trapping-set structures.

Three independent engines cross-validate each other:

* :func:`enumerate_structures` — the production path, a compiled ESU walk
  over connected variable sets (see ``_kernels``);
* :func:`iter_structure_instances` — a plain-Python generator with the same
  growth rule, used where the caller wants the actual sets;
* :func:`brute_force_census` — the oracle: breadth-first set expansion with
  a visited-set, classifying through the structures module.  Exponential,
  refused above 64 variables.

Only connected sets are counted: a disconnected trapping set is a disjoint
union of smaller connected ones, so the connected census carries all the
information.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .ensemble import TannerGraph
from .structures import CATEGORIES, StructureInstance, classify, induce

__all__ = [
    "CycleRecord",
    "MultiplicityTable",
    "EnumerationBudgetError",
    "CycleBudgetError",
    "BruteForceScaleError",
    "enumerate_cycles",
    "count_four_cycles",
    "enumerate_structures",
    "iter_structure_instances",
    "brute_force_census",
]

A_MAX_BUDGET = 12
CYCLE_STEP_BUDGET = 10**8

_ELEMENTARY = frozenset({"ETS", "LETS", "EABS"})


class EnumerationBudgetError(RuntimeError):
    """Set-visit budget exhausted; carries the partial table and the size reached."""

    def __init__(self, message: str, partial: "MultiplicityTable", level: int):
        super().__init__(message)
        self.partial = partial
        self.level = level


class CycleBudgetError(RuntimeError):
    """Cycle-search step budget exhausted; carries the partial record list."""

    def __init__(self, message: str, partial: list, cap: int):
        super().__init__(message)
        self.partial = partial
        self.cap = cap


class BruteForceScaleError(ValueError):
    """Brute-force subset census refused: the graph is too large."""


@dataclass(frozen=True)
class CycleRecord:
    """One cycle, canonicalized, with its degree tallies taken in the host graph."""

    length: int
    chordless: bool
    variable_degree_counts: dict[int, int]
    check_degree_counts: dict[int, int]
    variables: tuple[int, ...]
    checks: tuple[int, ...]


@dataclass
class MultiplicityTable:
    """Counts (or expectations) keyed by (category, a, b)."""

    entries: dict[tuple[str, int, int], float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def count(self, category: str, a: int, b: int) -> float:
        return self.entries.get((category, a, b), 0)

    def add(self, category: str, a: int, b: int, value: float = 1) -> None:
        key = (category, a, b)
        self.entries[key] = self.entries.get(key, 0) + value

    def merge(self, other: "MultiplicityTable") -> None:
        for key, value in other.entries.items():
            self.entries[key] = self.entries.get(key, 0) + value

    def filtered(self, category: str) -> "MultiplicityTable":
        return MultiplicityTable(
            entries={k: v for k, v in self.entries.items() if k[0] == category},
            metadata=dict(self.metadata),
        )

    def nonzero(self) -> dict[tuple[str, int, int], float]:
        return {k: v for k, v in sorted(self.entries.items()) if v != 0}

    def same_counts(self, other: "MultiplicityTable") -> bool:
        return self.nonzero() == other.nonzero()

    def to_csv(self) -> str:
        lines = ["category,a,b,count"]
        for (cat, a, b), value in sorted(self.entries.items()):
            if value == 0:
                continue
            rendered = str(int(value)) if float(value).is_integer() else repr(value)
            lines.append(f"{cat},{a},{b},{rendered}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Cycle enumeration
# ---------------------------------------------------------------------------


def enumerate_cycles(
    graph: TannerGraph,
    c_max: int,
    max_steps: int = CYCLE_STEP_BUDGET,
    debug_check_unique: bool = False,
) -> list[CycleRecord]:
    """All cycles of length <= c_max, each exactly once.

    Depth-first path search rooted at each variable node; a cycle is
    emitted only from its minimum variable id, traversed in the direction
    whose first check id is smaller than its last, which canonicalizes
    rotation and reflection.  Raises :class:`CycleBudgetError` with the
    partial result once max_steps node expansions are spent.
    """
    if c_max < 4 or c_max % 2 != 0:
        raise ValueError(f"c_max must be even and >= 4, got {c_max}")
    records: list[CycleRecord] = []
    steps = 0
    half_max = c_max // 2
    seen_keys: set = set()

    for root in range(graph.n):
        root_checks = set(graph.variable_neighbors(root))
        path_vars = [root]
        path_checks: list[int] = []
        used_vars = {root}
        used_checks: set[int] = set()

        def dfs(var: int):
            nonlocal steps
            steps += 1
            if steps > max_steps:
                raise CycleBudgetError(
                    f"cycle search exceeded {max_steps} steps", records, max_steps
                )
            for c in graph.variable_neighbors(var):
                if c in used_checks:
                    continue
                # Close back to the root (canonical direction only).
                if c in root_checks and len(path_vars) >= 2 and c > path_checks[0]:
                    _record_cycle(
                        graph, path_vars, path_checks + [c], records, seen_keys,
                        debug_check_unique,
                    )
                if len(path_vars) < half_max:
                    used_checks.add(c)
                    path_checks.append(c)
                    for w in graph.check_neighbors(c):
                        if w > root and w not in used_vars:
                            used_vars.add(w)
                            path_vars.append(w)
                            dfs(w)
                            path_vars.pop()
                            used_vars.remove(w)
                    path_checks.pop()
                    used_checks.remove(c)

        dfs(root)
    return records


def _record_cycle(
    graph: TannerGraph,
    path_vars: list[int],
    path_checks: list[int],
    records: list[CycleRecord],
    seen_keys: set,
    debug_check_unique: bool,
) -> None:
    variables = tuple(path_vars)
    checks = tuple(path_checks)
    length = len(variables) + len(checks)
    # Cycle edges: v_i -- c_i -- v_{i+1}, the last check closing to the root.
    cycle_edges = set()
    for i, c in enumerate(checks):
        cycle_edges.add((variables[i], c))
        cycle_edges.add((variables[(i + 1) % len(variables)], c))
    chordless = True
    check_set = set(checks)
    for v in variables:
        for c in graph.variable_neighbors(v):
            if c in check_set and (v, c) not in cycle_edges:
                chordless = False
                break
        if not chordless:
            break
    if debug_check_unique:
        key = _canonical_cycle_key(variables, checks)
        if key in seen_keys:
            raise AssertionError(f"cycle emitted twice: {key}")
        seen_keys.add(key)
    records.append(
        CycleRecord(
            length=length,
            chordless=chordless,
            variable_degree_counts=dict(Counter(graph.variable_degree(v) for v in variables)),
            check_degree_counts=dict(Counter(graph.check_degree(c) for c in checks)),
            variables=tuple(sorted(variables)),
            checks=tuple(sorted(checks)),
        )
    )


def _canonical_cycle_key(variables: tuple[int, ...], checks: tuple[int, ...]) -> tuple:
    """Lexicographically smallest rotation/reflection of the node sequence."""
    seq: list[tuple[int, int]] = []
    for i, v in enumerate(variables):
        seq.append((0, v))
        seq.append((1, checks[i]))
    best = None
    k = len(seq)
    for direction in (seq, seq[::-1]):
        for shift in range(k):
            cand = tuple(direction[(shift + i) % k] for i in range(k))
            if cand[0][0] != 0:
                continue
            if best is None or cand < best:
                best = cand
    return best


def count_four_cycles(graph: TannerGraph) -> int:
    """Number of 4-cycles, via pairs of checks shared by a variable pair."""
    pair_counts: Counter = Counter()
    for u in range(graph.n):
        nbrs = graph.variable_neighbors(u)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                pair_counts[(nbrs[i], nbrs[j])] += 1
    return sum(k * (k - 1) // 2 for k in pair_counts.values())


# ---------------------------------------------------------------------------
# Structure census (compiled path)
# ---------------------------------------------------------------------------


def _run_kernel(
    graph: TannerGraph,
    a_max: int,
    b_cap: int,
    elementary: bool,
    max_sets: Optional[int],
    workers: int,
) -> tuple[np.ndarray, int, int]:
    from . import _kernels

    vc_indptr, vc_indices, cv_indptr, cv_indices = graph.csr()
    counts = np.zeros((6, a_max + 1, b_cap + 1), dtype=np.int64)
    status = np.zeros(2, dtype=np.int64)
    if workers <= 1 or graph.n < 4 * workers or max_sets:
        _kernels.census_kernel(
            vc_indptr, vc_indices, cv_indptr, cv_indices,
            a_max, b_cap, elementary, 0, graph.n,
            0 if max_sets is None else int(max_sets), counts, status,
        )
        return counts, int(status[0]), int(status[1])
    # Roots partition the work; per-worker tables merge by addition, so the
    # result does not depend on the worker count or schedule.
    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, graph.n, workers + 1).astype(np.int64)
    parts = [np.zeros_like(counts) for _ in range(workers)]
    stats = [np.zeros(2, dtype=np.int64) for _ in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(
                _kernels.census_kernel,
                vc_indptr, vc_indices, cv_indptr, cv_indices,
                a_max, b_cap, elementary, int(bounds[i]), int(bounds[i + 1]),
                0, parts[i], stats[i],
            )
            for i in range(workers)
        ]
        for f in futures:
            f.result()
    for part in parts:
        counts += part
    return counts, int(sum(int(s[0]) for s in stats)), -1


def enumerate_structures(
    graph: TannerGraph,
    category: str,
    a_max: int,
    b_max: int,
    max_sets: Optional[int] = None,
    workers: int = 1,
) -> MultiplicityTable:
    """Count every connected variable set of size <= a_max in the category.

    Sets grow from each variable by adding variables that share an induced
    check, with minimum-id rooting so each connected set is generated once.
    Structures with b > b_max are classified but not recorded.  For the
    elementary categories the search prunes sets containing a check of
    induced degree >= 3, which no elementary superset can repair.

    Raises :class:`EnumerationBudgetError` (with the partial table) when
    max_sets visits are exhausted.
    """
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    if not (0 <= a_max <= A_MAX_BUDGET):
        raise ValueError(f"a_max must be within 0..{A_MAX_BUDGET}, got {a_max}")
    if b_max < 0:
        raise ValueError(f"b_max must be >= 0, got {b_max}")
    table = MultiplicityTable(
        metadata={"n": graph.n, "a_max": a_max, "b_max": b_max, "category": category}
    )
    if a_max == 0 or graph.n == 0:
        return table
    dvmax = max(graph.variable_degrees, default=0)
    b_cap = min(b_max, a_max * dvmax) if dvmax else 0
    elementary = category in _ELEMENTARY
    counts, visited, truncated = _run_kernel(
        graph, a_max, b_cap, elementary, max_sets, workers
    )
    plane = CATEGORIES.index(category)
    for a in range(1, a_max + 1):
        for b in range(0, b_cap + 1):
            v = int(counts[plane, a, b])
            if v:
                table.add(category, a, b, v)
    table.metadata["sets_visited"] = visited
    if truncated >= 0:
        raise EnumerationBudgetError(
            f"enumeration budget {max_sets} exhausted at size {truncated}",
            partial=table,
            level=truncated,
        )
    return table


def census(
    graph: TannerGraph,
    categories: tuple[str, ...],
    a_max: int,
    b_max: int,
    workers: int = 1,
) -> MultiplicityTable:
    """One table covering several categories, enumerating as few times as
    possible: a single elementary walk serves ETS/LETS/EABS, a single
    general walk serves everything."""
    cats = tuple(dict.fromkeys(categories))
    for cat in cats:
        if cat not in CATEGORIES:
            raise ValueError(f"unknown category {cat!r}")
    table = MultiplicityTable(metadata={"n": graph.n, "a_max": a_max, "b_max": b_max})
    if a_max == 0 or graph.n == 0:
        return table
    dvmax = max(graph.variable_degrees, default=0)
    b_cap = min(b_max, a_max * dvmax) if dvmax else 0
    elementary_only = all(c in _ELEMENTARY for c in cats)
    counts, visited, _ = _run_kernel(
        graph, a_max, b_cap, elementary_only, None, workers
    )
    for cat in cats:
        plane = CATEGORIES.index(cat)
        for a in range(1, a_max + 1):
            for b in range(0, b_cap + 1):
                v = int(counts[plane, a, b])
                if v:
                    table.add(cat, a, b, v)
    table.metadata["sets_visited"] = visited
    return table


# ---------------------------------------------------------------------------
# Plain-Python reference walk (yields the actual sets)
# ---------------------------------------------------------------------------


def iter_structure_instances(
    graph: TannerGraph,
    category: str,
    a_max: int,
    b_max: Optional[int] = None,
) -> Iterator[StructureInstance]:
    """Yield the instances the census would count, smallest root first.

    Same growth rule as :func:`enumerate_structures`, in plain Python;
    intended for instance dumps and cross-checks, not for large graphs.
    """
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    elementary = category in _ELEMENTARY
    for inst in _iter_connected_sets(graph, a_max, elementary):
        if b_max is not None and inst.b > b_max:
            continue
        if classify(inst, graph).matches(category):
            yield inst


def _iter_connected_sets(
    graph: TannerGraph, a_max: int, elementary: bool
) -> Iterator[StructureInstance]:
    n = graph.n
    check_deg: dict[int, int] = {}
    seen = bytearray(n)

    def add_var(u: int) -> Optional[list[int]]:
        touched = []
        for c in graph.variable_neighbors(u):
            d = check_deg.get(c, 0)
            if elementary and d >= 2:
                for t in touched:
                    check_deg[t] -= 1
                return None
            check_deg[c] = d + 1
            touched.append(c)
        return touched

    def remove(touched: list[int]) -> None:
        for c in touched:
            check_deg[c] -= 1

    def extend(root: int, members: list[int], ext: list[int]) -> Iterator[list[int]]:
        yield members
        if len(members) == a_max:
            return
        for pos, u in enumerate(ext):
            touched = add_var(u)
            if touched is None:
                continue
            members.append(u)
            child_ext = ext[pos + 1 :]
            fresh = []
            for c in graph.variable_neighbors(u):
                if check_deg[c] == 1:
                    for w in graph.check_neighbors(c):
                        if w > root and not seen[w]:
                            seen[w] = 1
                            fresh.append(w)
            yield from extend(root, members, child_ext + fresh)
            for w in fresh:
                seen[w] = 0
            members.pop()
            remove(touched)

    for root in range(n):
        seen[root] = 1
        touched = add_var(root)
        exclusives = []
        for c in graph.variable_neighbors(root):
            for w in graph.check_neighbors(c):
                if w > root and not seen[w]:
                    seen[w] = 1
                    exclusives.append(w)
        if a_max >= 1:
            for members in extend(root, [root], exclusives):
                yield induce(graph, members)
        for w in exclusives:
            seen[w] = 0
        seen[root] = 0
        if touched:
            remove(touched)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_census(graph: TannerGraph, a_max: int, b_max: int) -> MultiplicityTable:
    """Oracle census over all connected variable subsets of size <= a_max.

    Breadth-first set expansion over the shares-an-induced-check relation
    with visited-set deduplication; every subset is classified through
    induce/classify and tallied into all six category planes at once.
    Exponential in a_max: refuses graphs with more than 64 variables.
    """
    if graph.n > 64:
        raise BruteForceScaleError(
            f"brute-force census is for n <= 64 graphs, got n = {graph.n}"
        )
    table = MultiplicityTable(
        metadata={"n": graph.n, "a_max": a_max, "b_max": b_max, "engine": "brute-force"}
    )
    if a_max == 0:
        return table
    sharing: list[set[int]] = [set() for _ in range(graph.n)]
    for w in range(graph.n_checks):
        members = graph.check_neighbors(w)
        for u in members:
            sharing[u].update(members)
    for u in range(graph.n):
        sharing[u].discard(u)

    visited: set[frozenset[int]] = set()
    queue: deque[frozenset[int]] = deque()
    for u in range(graph.n):
        s = frozenset((u,))
        visited.add(s)
        queue.append(s)
    while queue:
        current = queue.popleft()
        inst = induce(graph, current)
        if inst.b <= b_max:
            cats = classify(inst, graph)
            table.add("TS", inst.a, inst.b, 1)
            for name, flag in (
                ("SS", cats.is_ss),
                ("ETS", cats.is_ets),
                ("LETS", cats.is_lets),
                ("ABS", cats.is_abs),
                ("EABS", cats.is_eabs),
            ):
                if flag:
                    table.add(name, inst.a, inst.b, 1)
        if len(current) < a_max:
            neighborhood = set()
            for u in current:
                neighborhood |= sharing[u]
            for w in neighborhood - set(current):
                nxt = current | {w}
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
    return table
