"""Random Tanner-graph ensembles.

Degree distributions are edge-perspective: ``lam[i]`` is the fraction of
edges attached to degree-``i`` variable nodes, ``rho[j]`` the same on the
check side.  Sampling uses the configuration model (uniform random matching
of edge stubs) conditioned on simplicity, which induces the uniform
distribution over simple bipartite graphs with the realized degree sequence.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

__all__ = [
    "EnsembleSpec",
    "DegreeSequencePair",
    "TannerGraph",
    "EnsembleError",
    "InfeasibleSpecError",
    "SamplingBudgetError",
    "realize_degree_sequence",
    "sample_tanner_graph",
    "girth",
]

_FRACTION_TOL = 1e-12


class EnsembleError(ValueError):
    """Invalid ensemble specification or degree sequence."""


class InfeasibleSpecError(EnsembleError):
    """No integer degree sequence matches the spec at the requested size.

    Attributes
    ----------
    deficit : int
        Residual edge imbalance that no adjustment within the degree
        support could absorb.
    """

    def __init__(self, message: str, deficit: int = 0):
        super().__init__(message)
        self.deficit = deficit


class SamplingBudgetError(RuntimeError):
    """Retry budget exhausted while sampling a graph.

    Attributes
    ----------
    attempts : int
        Number of attempts consumed.
    reason : str
        ``"parallel-edge"`` or ``"girth"``: the conditioning step that
        kept failing.
    """

    def __init__(self, message: str, attempts: int, reason: str):
        super().__init__(message)
        self.attempts = attempts
        self.reason = reason


def _validate_distribution(dist: dict[int, float], name: str) -> dict[int, float]:
    if not dist:
        raise EnsembleError(f"{name} distribution is empty")
    clean: dict[int, float] = {}
    for deg, frac in dist.items():
        d = int(deg)
        if d != deg or d < 1:
            raise EnsembleError(f"{name} degree {deg!r} is not a positive integer")
        f = float(frac)
        if f <= 0.0:
            raise EnsembleError(
                f"{name} fraction for degree {d} must be positive (drop zero entries)"
            )
        clean[d] = f
    total = math.fsum(clean.values())
    if abs(total - 1.0) > _FRACTION_TOL:
        raise EnsembleError(f"{name} fractions sum to {total!r}, expected 1 within {_FRACTION_TOL}")
    return dict(sorted(clean.items()))


@dataclass(frozen=True)
class EnsembleSpec:
    """Edge-perspective degree distributions plus block length.

    Parameters
    ----------
    lam : dict[int, float]
        Variable-side edge fractions by degree; must sum to 1.
    rho : dict[int, float]
        Check-side edge fractions by degree; must sum to 1.
    n : int
        Number of variable nodes (block length).
    girth_min : int, optional
        Even lower bound (>= 4) imposed on sampled graphs.
    """

    lam: dict[int, float]
    rho: dict[int, float]
    n: int
    girth_min: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", _validate_distribution(self.lam, "lambda"))
        object.__setattr__(self, "rho", _validate_distribution(self.rho, "rho"))
        if self.n < 1:
            raise EnsembleError(f"n must be >= 1, got {self.n}")
        if self.girth_min is not None:
            g = self.girth_min
            if g < 4 or g % 2 != 0:
                raise EnsembleError(f"girth_min must be an even integer >= 4, got {g}")

    # -- degree extremes -------------------------------------------------

    @property
    def d_vmin(self) -> int:
        return min(self.lam)

    @property
    def d_vmax(self) -> int:
        return max(self.lam)

    @property
    def d_cmin(self) -> int:
        return min(self.rho)

    @property
    def d_cmax(self) -> int:
        return max(self.rho)

    @property
    def is_variable_regular(self) -> bool:
        return len(self.lam) == 1

    @property
    def is_check_regular(self) -> bool:
        return len(self.rho) == 1

    @property
    def is_biregular(self) -> bool:
        return self.is_variable_regular and self.is_check_regular

    @property
    def degenerate_degree_one(self) -> bool:
        """True when degree-1 variables are present; the closed-form
        predictors require minimum variable degree >= 2."""
        return self.d_vmin < 2

    # -- edge-perspective moments and node fractions ---------------------

    @property
    def var_moment(self) -> float:
        """Sum of lam_i * (i - 1): the variable-side branching moment."""
        return math.fsum(f * (d - 1) for d, f in self.lam.items())

    @property
    def check_moment(self) -> float:
        """Sum of rho_j * (j - 1): the check-side branching moment."""
        return math.fsum(f * (d - 1) for d, f in self.rho.items())

    @property
    def var_node_fractions(self) -> dict[int, float]:
        """Fraction of variable nodes per degree, converted from edge fractions."""
        return _node_fractions(self.lam)

    @property
    def check_node_fractions(self) -> dict[int, float]:
        return _node_fractions(self.rho)

    @property
    def avg_check_degree(self) -> float:
        """Node-average check degree (not the edge-average)."""
        return 1.0 / math.fsum(f / d for d, f in self.rho.items())

    @property
    def avg_var_degree(self) -> float:
        return 1.0 / math.fsum(f / d for d, f in self.lam.items())

    @property
    def specht_h_u(self) -> float:
        """Ratio of extreme variable-side pair counts z(z-1) / z'(z'-1)."""
        z, zp = self.d_vmax, self.d_vmin
        return (z * (z - 1)) / (zp * (zp - 1)) if zp > 1 else math.inf

    @property
    def specht_h_w(self) -> float:
        w, wp = self.d_cmax, self.d_cmin
        return (w * (w - 1)) / (wp * (wp - 1)) if wp > 1 else math.inf

    # -- JSON config interface -------------------------------------------

    @classmethod
    def from_json_dict(cls, data: dict) -> "EnsembleSpec":
        try:
            lam = {int(k): float(v) for k, v in data["lambda"].items()}
            rho = {int(k): float(v) for k, v in data["rho"].items()}
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise EnsembleError(f"malformed ensemble config: {exc}") from exc
        girth_min = data.get("girth_min")
        return cls(lam=lam, rho=rho, n=n, girth_min=None if girth_min is None else int(girth_min))

    def to_json_dict(self) -> dict:
        out = {
            "lambda": {str(d): f for d, f in self.lam.items()},
            "rho": {str(d): f for d, f in self.rho.items()},
            "n": self.n,
        }
        if self.girth_min is not None:
            out["girth_min"] = self.girth_min
        return out

    @classmethod
    def from_json(cls, text: str) -> "EnsembleSpec":
        return cls.from_json_dict(json.loads(text))


def _node_fractions(dist: dict[int, float]) -> dict[int, float]:
    denom = math.fsum(f / d for d, f in dist.items())
    return {d: (f / d) / denom for d, f in dist.items()}


@dataclass(frozen=True)
class DegreeSequencePair:
    """Realized integer degree sequences for both sides.

    Invariants: sum(variable_degrees) == sum(check_degrees) == edge_count,
    and per-degree node counts sit within O(1/n) of the node fractions
    converted from the edge-perspective distributions.
    """

    variable_degrees: tuple[int, ...]
    check_degrees: tuple[int, ...]

    def __post_init__(self):
        if sum(self.variable_degrees) != sum(self.check_degrees):
            raise EnsembleError(
                "handshake violated: variable and check degree sums differ "
                f"({sum(self.variable_degrees)} vs {sum(self.check_degrees)})"
            )

    @property
    def edge_count(self) -> int:
        return sum(self.variable_degrees)

    @property
    def n(self) -> int:
        return len(self.variable_degrees)

    @property
    def n_checks(self) -> int:
        return len(self.check_degrees)


def _largest_remainder(fractions: dict[int, float], total: int, side: str) -> dict[int, int]:
    """Apportion `total` nodes to degrees by the largest-remainder method."""
    quotas = {d: fractions[d] * total for d in fractions}
    counts = {d: int(math.floor(q)) for d, q in quotas.items()}
    leftover = total - sum(counts.values())
    # Ties broken toward larger degree for determinism.
    order = sorted(fractions, key=lambda d: (quotas[d] - counts[d], d), reverse=True)
    for d in order[:leftover]:
        counts[d] += 1
    if any(c == 0 for c in counts.values()):
        missing = [d for d, c in counts.items() if c == 0]
        raise InfeasibleSpecError(
            f"{side} side too small: degrees {missing} would receive no nodes "
            f"(total {total})"
        )
    return counts


def realize_degree_sequence(spec: EnsembleSpec) -> DegreeSequencePair:
    """Convert edge-perspective distributions into exact integer sequences.

    Variable-side counts come from largest-remainder rounding of the node
    fractions at block length ``n``.  The check side is rounded the same way
    and then repaired until its edge total matches the variable side: first
    by adding/removing nodes at the degree with the largest node fraction,
    then, if a sub-degree residue remains, by moving single nodes between
    support degrees.  Raises :class:`InfeasibleSpecError`, naming the
    residual deficit, when no adjustment within the support can match the
    totals.
    """
    var_counts = _largest_remainder(spec.var_node_fractions, spec.n, "variable")
    eta = sum(d * c for d, c in var_counts.items())

    check_fracs = spec.check_node_fractions
    n_checks = max(len(check_fracs), round(eta * math.fsum(f / d for d, f in spec.rho.items())))
    check_counts = _largest_remainder(check_fracs, n_checks, "check")
    deficit = eta - sum(d * c for d, c in check_counts.items())

    # Bulk repair at the dominant degree, then absorb any sub-degree residue
    # by moving one node between a pair of support degrees.
    major = max(check_fracs, key=lambda d: (check_fracs[d], d))
    q, rem = divmod(deficit, major)
    if check_counts[major] + q < 1:
        raise InfeasibleSpecError(
            f"check side cannot absorb deficit {deficit}: degree-{major} count "
            f"would drop below 1",
            deficit=deficit,
        )
    check_counts[major] += q
    if rem:
        degrees = sorted(check_fracs)
        for hi, lo in itertools.product(degrees, degrees):
            if hi - lo == rem and check_counts[lo] >= 1:
                check_counts[hi] += 1
                check_counts[lo] -= 1
                rem = 0
                break
        if rem:
            raise InfeasibleSpecError(
                f"no check-degree adjustment within support {degrees} can absorb "
                f"an edge deficit of {rem}",
                deficit=rem,
            )
    check_counts = {d: c for d, c in check_counts.items() if c > 0}

    var_seq = tuple(d for d in sorted(var_counts) for _ in range(var_counts[d]))
    check_seq = tuple(d for d in sorted(check_counts) for _ in range(check_counts[d]))
    return DegreeSequencePair(variable_degrees=var_seq, check_degrees=check_seq)


class TannerGraph:
    """Simple bipartite graph with variable/check partitions.

    Immutable after construction; adjacency lists are sorted tuples.
    Variables are ``0..n-1`` and checks ``0..n_checks-1`` in their own
    id spaces.
    """

    __slots__ = ("n", "n_checks", "_var_adj", "_check_adj", "_csr_cache")

    def __init__(self, n: int, n_checks: int, edges: Iterator[tuple[int, int]]):
        var_adj: list[list[int]] = [[] for _ in range(n)]
        check_adj: list[list[int]] = [[] for _ in range(n_checks)]
        m = 0
        for u, w in edges:
            if not (0 <= u < n and 0 <= w < n_checks):
                raise EnsembleError(f"edge ({u},{w}) out of range")
            var_adj[u].append(w)
            check_adj[w].append(u)
            m += 1
        for u, nbrs in enumerate(var_adj):
            nbrs.sort()
            for a, b in zip(nbrs, nbrs[1:]):
                if a == b:
                    raise EnsembleError(f"parallel edge at variable {u}, check {a}")
        for nbrs in check_adj:
            nbrs.sort()
        self.n = n
        self.n_checks = n_checks
        self._var_adj = tuple(tuple(x) for x in var_adj)
        self._check_adj = tuple(tuple(x) for x in check_adj)
        self._csr_cache = None

    # -- accessors --------------------------------------------------------

    def variable_neighbors(self, u: int) -> tuple[int, ...]:
        return self._var_adj[u]

    def check_neighbors(self, w: int) -> tuple[int, ...]:
        return self._check_adj[w]

    def variable_degree(self, u: int) -> int:
        return len(self._var_adj[u])

    def check_degree(self, w: int) -> int:
        return len(self._check_adj[w])

    @property
    def edge_count(self) -> int:
        return sum(len(x) for x in self._var_adj)

    @property
    def variable_degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self._var_adj)

    @property
    def check_degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self._check_adj)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges in lexicographic (variable, check) order."""
        for u, nbrs in enumerate(self._var_adj):
            for w in nbrs:
                yield (u, w)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TannerGraph)
            and self.n == other.n
            and self.n_checks == other.n_checks
            and self._var_adj == other._var_adj
        )

    def __hash__(self):
        return hash((self.n, self.n_checks, self._var_adj))

    def __repr__(self):
        return f"TannerGraph(n={self.n}, n_checks={self.n_checks}, edges={self.edge_count})"

    def csr(self):
        """CSR views (var->check and check->var) as int32 arrays, cached."""
        if self._csr_cache is None:
            vc_indptr = np.zeros(self.n + 1, dtype=np.int64)
            for u in range(self.n):
                vc_indptr[u + 1] = vc_indptr[u] + len(self._var_adj[u])
            vc_indices = np.fromiter(
                (w for nbrs in self._var_adj for w in nbrs), dtype=np.int32, count=int(vc_indptr[-1])
            )
            cv_indptr = np.zeros(self.n_checks + 1, dtype=np.int64)
            for w in range(self.n_checks):
                cv_indptr[w + 1] = cv_indptr[w] + len(self._check_adj[w])
            cv_indices = np.fromiter(
                (u for nbrs in self._check_adj for u in nbrs), dtype=np.int32, count=int(cv_indptr[-1])
            )
            self._csr_cache = (vc_indptr, vc_indices, cv_indptr, cv_indices)
        return self._csr_cache

    # -- line-oriented text format ----------------------------------------

    def to_text(self) -> str:
        """Serialize as `n n' m` header plus one `u w` line per edge."""
        lines = [f"{self.n} {self.n_checks} {self.edge_count}"]
        lines.extend(f"{u} {w}" for u, w in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TannerGraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise EnsembleError("empty graph file")
        try:
            n, n_checks, m = (int(x) for x in lines[0].split())
            edges = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        except ValueError as exc:
            raise EnsembleError(f"malformed graph file: {exc}") from exc
        if len(edges) != m or any(len(e) != 2 for e in edges):
            raise EnsembleError(f"expected {m} `u w` edge lines, found {len(edges)}")
        return cls(n, n_checks, iter(edges))  # type: ignore[arg-type]


def _matching_attempt(
    var_of_slot: np.ndarray, check_of_slot: np.ndarray, rng: np.random.Generator, n_checks: int
) -> Optional[np.ndarray]:
    """One configuration-model matching; None when a parallel edge appears."""
    perm = rng.permutation(check_of_slot)
    keys = var_of_slot.astype(np.int64) * n_checks + perm
    if np.unique(keys).size != keys.size:
        return None
    return perm


def _four_cycle(adj: list[set[int]]) -> Optional[tuple[int, int, int, int]]:
    """A (u, w1, v, w2) 4-cycle if one exists: two variables sharing two checks."""
    seen: dict[tuple[int, int], int] = {}
    for u, checks in enumerate(adj):
        cs = sorted(checks)
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                key = (cs[i], cs[j])
                if key in seen:
                    return (seen[key], cs[i], u, cs[j])
                seen[key] = u
    return None


def _short_cycle_edges(
    adj: list[set[int]], check_adj: list[set[int]], bound: int
) -> Optional[list[tuple[int, int]]]:
    """Edges of some cycle shorter than `bound`, or None.

    BFS from every variable node, on a combined node space where checks are
    offset by the variable count.  The first cross edge at depth < bound/2
    closes a cycle; the two tree paths are trimmed at their lowest common
    ancestor so the returned edge list is a simple cycle.
    """
    n = len(adj)

    def neighbors(x: int):
        return adj[x] if x < n else check_adj[x - n]

    for root in range(n):
        dist = {root: 0}
        parent: dict[int, int] = {root: -1}
        frontier = [root]
        depth = 0
        while frontier and depth * 2 < bound:
            nxt = []
            for x in frontier:
                for y0 in neighbors(x):
                    y = y0 + n if x < n else y0
                    if y not in dist:
                        dist[y] = depth + 1
                        parent[y] = x
                        nxt.append(y)
                    elif y != parent[x]:
                        length = dist[x] + dist[y] + 1
                        if length < bound:
                            # Walk both tree paths back to the common ancestor.
                            px, py = x, y
                            path_x, path_y = [px], [py]
                            while dist[px] > dist[py]:
                                px = parent[px]
                                path_x.append(px)
                            while dist[py] > dist[px]:
                                py = parent[py]
                                path_y.append(py)
                            while px != py:
                                px, py = parent[px], parent[py]
                                path_x.append(px)
                                path_y.append(py)
                            cycle_nodes = path_x + path_y[-2::-1]
                            edges = []
                            for a, b in zip(cycle_nodes, cycle_nodes[1:] + cycle_nodes[:1]):
                                u, w = (a, b - n) if a < n else (b, a - n)
                                edges.append((u, w))
                            return edges
            frontier = nxt
            depth += 1
    return None


def sample_tanner_graph(
    seq: DegreeSequencePair,
    seed: int,
    girth_min: Optional[int] = None,
    max_retries: Optional[int] = None,
) -> TannerGraph:
    """Sample a uniform simple Tanner graph with the given degree sequence.

    A uniformly random matching of variable edge-slots to check edge-slots
    is drawn and rejected until its image is a simple graph.  When
    ``girth_min >= 6`` is requested, short cycles are then removed by
    seeded double-edge swaps (each swap preserves the degree sequence and
    simplicity); plain rejection is hopeless there because the expected
    number of 4-cycles does not vanish with n.  Deterministic given
    ``(seq, seed, girth_min)``.

    Raises
    ------
    SamplingBudgetError
        After ``max_retries`` failed matchings (reason ``"parallel-edge"``)
        or swap proposals (reason ``"girth"``).  Default budget ``10 * n``.
    """
    n, n_checks = seq.n, seq.n_checks
    if max_retries is None:
        max_retries = 10 * n
    rng = np.random.Generator(np.random.Philox(seed))

    var_of_slot = np.repeat(np.arange(n, dtype=np.int64), seq.variable_degrees)
    check_of_slot = np.repeat(np.arange(n_checks, dtype=np.int64), seq.check_degrees)

    perm = None
    for attempt in range(1, max_retries + 1):
        perm = _matching_attempt(var_of_slot, check_of_slot, rng, n_checks)
        if perm is not None:
            break
    if perm is None:
        raise SamplingBudgetError(
            f"no simple matching found in {max_retries} attempts",
            attempts=max_retries,
            reason="parallel-edge",
        )

    adj: list[set[int]] = [set() for _ in range(n)]
    check_adj: list[set[int]] = [set() for _ in range(n_checks)]
    for u, w in zip(var_of_slot, perm):
        adj[int(u)].add(int(w))
        check_adj[int(w)].add(int(u))

    if girth_min is not None and girth_min > 4:
        _repair_girth(adj, check_adj, girth_min, rng, max_retries)

    return TannerGraph(n, n_checks, ((u, w) for u in range(n) for w in sorted(adj[u])))


def _repair_girth(
    adj: list[set[int]],
    check_adj: list[set[int]],
    girth_min: int,
    rng: np.random.Generator,
    max_retries: int,
) -> None:
    """Remove all cycles shorter than girth_min by double-edge swaps."""
    n = len(adj)
    attempts = 0
    while True:
        if girth_min == 6:
            cyc = _four_cycle(adj)
            cycle_edges = None if cyc is None else [(cyc[0], cyc[1]), (cyc[2], cyc[3])]
        else:
            cycle_edges = _short_cycle_edges(adj, check_adj, girth_min)
        if cycle_edges is None:
            return
        # Swap one cycle edge with a random non-incident edge; retry until
        # the swap keeps the graph simple.
        swapped = False
        while not swapped:
            attempts += 1
            if attempts > max_retries:
                raise SamplingBudgetError(
                    f"girth >= {girth_min} not reached within {max_retries} swap proposals",
                    attempts=attempts - 1,
                    reason="girth",
                )
            u1, w1 = cycle_edges[int(rng.integers(len(cycle_edges)))]
            u2 = int(rng.integers(n))
            if u2 == u1 or not adj[u2]:
                continue
            w2 = sorted(adj[u2])[int(rng.integers(len(adj[u2])))]
            if w2 == w1 or w2 in adj[u1] or w1 in adj[u2]:
                continue
            adj[u1].remove(w1)
            adj[u2].remove(w2)
            adj[u1].add(w2)
            adj[u2].add(w1)
            check_adj[w1].remove(u1)
            check_adj[w2].remove(u2)
            check_adj[w1].add(u2)
            check_adj[w2].add(u1)
            swapped = True


def girth(graph: TannerGraph) -> Optional[int]:
    """Length of the shortest cycle, or None for an acyclic graph.

    Breadth-first search from every variable node; the minimum over roots
    of (dist[x] + dist[y] + 1) across non-tree edges is the girth.  Cycles
    in a bipartite graph always pass through a variable node, so variable
    roots suffice.
    """
    n = graph.n
    best: Optional[int] = None
    for root in range(n):
        dist = {("v", root): 0}
        parent = {("v", root): None}
        frontier = [("v", root)]
        depth = 0
        while frontier:
            if best is not None and 2 * depth + 1 >= best:
                break
            nxt = []
            for node in frontier:
                kind, x = node
                nbrs = graph.variable_neighbors(x) if kind == "v" else graph.check_neighbors(x)
                okind = "c" if kind == "v" else "v"
                for y in nbrs:
                    other = (okind, y)
                    if other not in dist:
                        dist[other] = depth + 1
                        parent[other] = node
                        nxt.append(other)
                    elif other != parent[node]:
                        length = dist[node] + dist[other] + 1
                        if best is None or length < best:
                            best = length
            frontier = nxt
            depth += 1
    return best
