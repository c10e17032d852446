"""Closed-form asymptotic expectations for cycles and trapping-set classes.

Everything here is a function of degree distributions only; block length has
dropped out.  The two building blocks are the edge-perspective branching
moments  m_v = sum_i lam_i (i-1)  and  m_c = sum_j rho_j (j-1): the expected
number of cycles of even length c is (m_v * m_c)^(c/2) / c, and the refined
counts fix how many cycle nodes carry each degree.

Combinatorial factors (binomials, multinomials, tree counts) are computed in
exact integer arithmetic and converted to float at the last step; the
generalized Catalan numbers overflow 64-bit arithmetic quickly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional

from .ensemble import EnsembleSpec

__all__ = [
    "CycleSignature",
    "ApproxBound",
    "specht_ratio",
    "catalan_general",
    "catalan_general_recursive",
    "basic_tree_count_B",
    "tree_attachment_count",
    "forest_partitions",
    "expected_cycles",
    "expected_cycles_with_signature",
    "expected_cycles_partial_signature",
    "ss_expected_a0",
    "abs_expected",
    "lets_expected",
    "ets_expected_biregular",
    "ets_expected_variable_regular",
    "ets_expected_irregular_min_b",
]

TreeCountMode = Literal["exact_B", "catalan_upper"]


@dataclass(frozen=True)
class CycleSignature:
    """Degree signature for cycles of length c.

    ``alpha[i]`` variable nodes must have degree i (``alpha_free`` more are
    unconstrained); ``beta``/``beta_free`` mirror this on the check side.
    Constrained plus free slots must fill each side: c/2 nodes apiece.
    """

    c: int
    alpha: dict[int, int] = field(default_factory=dict)
    beta: dict[int, int] = field(default_factory=dict)
    alpha_free: int = 0
    beta_free: int = 0

    def __post_init__(self):
        if self.c < 4 or self.c % 2 != 0:
            raise ValueError(f"cycle length must be even and >= 4, got {self.c}")
        half = self.c // 2
        if self.alpha_free < 0 or self.beta_free < 0:
            raise ValueError("free slot counts must be nonnegative")
        if self.alpha_free + sum(self.alpha.values()) != half:
            raise ValueError("alpha slots must sum to c/2")
        if self.beta_free + sum(self.beta.values()) != half:
            raise ValueError("beta slots must sum to c/2")


@dataclass(frozen=True)
class ApproxBound:
    """An asymptotic estimate that upper-bounds the true expectation.

    The true value lies in [lower_factor * estimate, estimate]; exact
    formulas carry lower_factor == 1.  ``formula`` is a stable identifier
    of the expression used, for report provenance.
    """

    estimate: float
    lower_factor: float
    formula: str
    note: str = ""

    def __post_init__(self):
        if not (0.0 < self.lower_factor <= 1.0 + 1e-12):
            raise ValueError(f"lower_factor must be in (0, 1], got {self.lower_factor}")

    @property
    def lower_bound(self) -> float:
        return self.lower_factor * self.estimate


def specht_ratio(h: float) -> float:
    """Specht's ratio S(h) = (h-1) h^(1/(h-1)) / (e ln h), with S(1) = 1.

    Quantifies the worst-case gap between arithmetic and geometric means of
    numbers confined to a ratio of h; h must be >= 1.
    """
    if not math.isfinite(h) or h < 1.0:
        raise ValueError(f"Specht ratio needs finite h >= 1, got {h}")
    # Below ~1e-10 the limiting value 1 is accurate to O(h-1)^2 ~ 1e-20.
    if h - 1.0 < 1e-10:
        return 1.0
    log_h = math.log(h)
    return (h - 1.0) * h ** (1.0 / (h - 1.0)) / (math.e * log_h)


@functools.lru_cache(maxsize=None)
def catalan_general(j: int, d_v: int) -> int:
    """Rooted trees with j nodes, root degree <= d_v - 1, others <= d_v.

    Closed form (1/j) * C(j(d_v - 1), j - 1), exact in big integers;
    reduces to the classical Catalan numbers at d_v = 3.
    """
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    if d_v < 2:
        raise ValueError(f"d_v must be >= 2, got {d_v}")
    if j <= 1:
        return 1
    num = math.comb(j * (d_v - 1), j - 1)
    count, rem = divmod(num, j)
    if rem:  # cannot happen: the closed form is integral
        raise ArithmeticError(f"non-integral tree count at j={j}, d_v={d_v}")
    return count


def catalan_general_recursive(j: int, d_v: int, _table: Optional[list[int]] = None) -> int:
    """Same count via the defining recursion: a root with up to d_v - 1
    child subtrees whose sizes sum to j - 1.  Independent oracle for the
    closed form."""
    if j < 0 or d_v < 2:
        raise ValueError("need j >= 0 and d_v >= 2")
    table = [1, 1]
    for m in range(2, j + 1):
        # coefficient of x^(m-1) in (sum_k table[k] x^k)^(d_v - 1)
        conv = [1]
        for _ in range(d_v - 1):
            new = [0] * m
            for i, ci in enumerate(conv):
                if ci == 0:
                    continue
                for k in range(0, m - i):
                    if k < len(table):
                        new[i + k] += ci * table[k]
            conv = new
        table.append(conv[m - 1])
    return table[j]


@functools.lru_cache(maxsize=None)
def basic_tree_count_B(j_plus_1: int, d_v: int) -> int:
    """Shapes of a basic tree with j_plus_1 nodes: root degree <= d_v - 2,
    every other node degree <= d_v.

    Sum over compositions of j into d_v - 2 parts of products of
    generalized Catalan numbers; equals catalan_general(j, 3) at d_v = 3.
    """
    if d_v < 3:
        raise ValueError(f"basic trees need d_v >= 3 (root degree d_v - 2 >= 1), got {d_v}")
    j = j_plus_1 - 1
    if j < 0:
        raise ValueError(f"node count must be >= 1, got {j_plus_1}")
    # Coefficient of x^j in (sum_k C_k x^k)^(d_v - 2), exact integers.
    conv = [1]
    for _ in range(d_v - 2):
        new = [0] * (j + 1)
        for i, ci in enumerate(conv):
            if ci == 0:
                continue
            for k in range(0, j + 1 - i):
                new[i + k] += ci * catalan_general(k, d_v)
        conv = new
    return conv[j] if j < len(conv) else 0


def tree_attachment_count(j: int, d_v: int, d_c: int) -> int:
    """Ways to hang a variable-size-j basic tree off a cycle variable in a
    (d_v, d_c)-regular graph: (d_c - 1)**j shape-internal check choices
    times the basic-tree shape count."""
    if j < 0 or d_c < 2:
        raise ValueError(f"need j >= 0 and d_c >= 2, got j={j}, d_c={d_c}")
    return (d_c - 1) ** j * basic_tree_count_B(j + 1, d_v)


def forest_partitions(a: int, i: int) -> list[tuple[int, ...]]:
    """All sequences (t_0, ..., t_i) with sum_p p*t_p = i over the a - i
    cycle variables: t_p counts appended trees of variable-size p, t_0 the
    bare cycle variables.  Lexicographic order; requires 0 <= i <= a - 2
    so the cycle keeps length >= 4."""
    if not (0 <= i <= a - 2):
        raise ValueError(f"need 0 <= i <= a - 2, got a={a}, i={i}")
    results: list[tuple[int, ...]] = []

    def rec(p: int, remaining: int, used: int, acc: list[int]):
        if p > i:
            if remaining == 0:
                t0 = a - i - used
                if t0 >= 0:
                    results.append((t0, *acc))
            return
        for t in range(remaining // p + 1):
            acc.append(t)
            rec(p + 1, remaining - p * t, used + t, acc)
            acc.pop()

    rec(1, i, 0, [])
    results.sort()
    return results


def _multinomial(total: int, parts: Iterator[int]) -> int:
    out = math.factorial(total)
    used = 0
    for p in parts:
        out //= math.factorial(p)
        used += p
    if used != total:
        raise ValueError("multinomial parts must sum to the total")
    return out


def expected_cycles(spec: EnsembleSpec, c: int) -> float:
    """Expected number of length-c cycles: (m_v * m_c)^(c/2) / c.

    Reduces to ((d_v - 1)(d_c - 1))^(c/2) / c for biregular ensembles.
    """
    if c < 4 or c % 2 != 0:
        raise ValueError(f"cycle length must be even and >= 4, got {c}")
    return (spec.var_moment * spec.check_moment) ** (c // 2) / c


def expected_cycles_with_signature(spec: EnsembleSpec, sig: CycleSignature) -> float:
    """Expected length-c cycles whose node degrees match an exact signature.

    Multinomial placements on each side times the per-degree edge factors
    lam_i(i-1) and rho_j(j-1), over c.  A degree outside the spec support
    contributes a zero factor: no such cycles exist.
    """
    if sig.alpha_free or sig.beta_free:
        raise ValueError("exact signature must have no free slots")
    half = sig.c // 2
    var_factor = float(_multinomial(half, iter(sig.alpha.values())))
    for deg, cnt in sig.alpha.items():
        var_factor *= (spec.lam.get(deg, 0.0) * (deg - 1)) ** cnt
    check_factor = float(_multinomial(half, iter(sig.beta.values())))
    for deg, cnt in sig.beta.items():
        check_factor *= (spec.rho.get(deg, 0.0) * (deg - 1)) ** cnt
    return var_factor * check_factor / sig.c


def expected_cycles_partial_signature(spec: EnsembleSpec, sig: CycleSignature) -> ApproxBound:
    """Expected length-c cycles with some node degrees left free.

    Free slots contribute the branching moment of their side; the estimate
    is an asymptotic upper bound accurate within
    S(h_u)^-alpha_free * S(h_w)^-beta_free, with h taken from the spec's
    degree extremes.
    """
    half = sig.c // 2
    var_factor = float(
        _multinomial(half, iter(list(sig.alpha.values()) + [sig.alpha_free]))
    )
    for deg, cnt in sig.alpha.items():
        var_factor *= (spec.lam.get(deg, 0.0) * (deg - 1)) ** cnt
    var_factor *= spec.var_moment**sig.alpha_free
    check_factor = float(
        _multinomial(half, iter(list(sig.beta.values()) + [sig.beta_free]))
    )
    for deg, cnt in sig.beta.items():
        check_factor *= (spec.rho.get(deg, 0.0) * (deg - 1)) ** cnt
    check_factor *= spec.check_moment**sig.beta_free
    lower = 1.0
    if sig.alpha_free:
        lower *= specht_ratio(spec.specht_h_u) ** (-sig.alpha_free)
    if sig.beta_free:
        lower *= specht_ratio(spec.specht_h_w) ** (-sig.beta_free)
    return ApproxBound(
        estimate=var_factor * check_factor / sig.c,
        lower_factor=lower,
        formula="cycle-partial-signature",
    )


def ss_expected_a0(spec: EnsembleSpec, a: int) -> ApproxBound:
    """Expected multiplicity of (a, 0) stopping sets: (lam_2 * m_c)^a / 2a.

    Only degree-2 variable cycles survive, so the class is empty when the
    spec has no degree-2 variables.
    """
    if a < 2:
        raise ValueError(f"stopping-set classes need a >= 2, got {a}")
    if spec.lam.get(2, 0.0) == 0.0:
        return ApproxBound(
            estimate=0.0,
            lower_factor=1.0,
            formula="ss-a0",
            note="no degree-2 variables: class empty asymptotically",
        )
    sig = CycleSignature(c=2 * a, alpha={2: a}, beta_free=a)
    bound = expected_cycles_partial_signature(spec, sig)
    return ApproxBound(bound.estimate, bound.lower_factor, formula="ss-a0")


def abs_expected(spec: EnsembleSpec, a: int, b: int) -> ApproxBound:
    """Expected multiplicity of (a, b) absorbing sets.

    Zero for d_vmin >= 4 (all classes vanish).  For d_vmin = 3 only the
    (a, a) class survives, as cycles of degree-3 variables.  For d_vmin = 2
    the survivors are cycles mixing degree-2 and degree-3 variables:
    (a-1)!/(2 b! (a-b)!) * (2 lam_3 / lam_2)^b * (lam_2 * m_c)^a for b <= a.
    """
    if a < 2 or b < 0:
        raise ValueError(f"absorbing classes need a >= 2 and b >= 0, got ({a}, {b})")
    q = spec.d_vmin
    if q >= 4:
        return ApproxBound(0.0, 1.0, "abs-dvmin4", note="all classes vanish at d_vmin >= 4")
    if q == 3:
        if b != a:
            return ApproxBound(
                0.0, 1.0, "abs-dvmin3", note="class impossible asymptotically: only b = a survives"
            )
        est = (2.0 * spec.lam[3] * spec.check_moment) ** a / (2.0 * a)
        return ApproxBound(est, specht_ratio(spec.specht_h_w) ** (-a), "abs-dvmin3")
    if q != 2:
        raise ValueError(f"absorbing-set predictor needs d_vmin in {{2, 3}}, got {q}")
    if b > a:
        return ApproxBound(0.0, 1.0, "abs-dvmin2", note="b > a classes vanish")
    lam2 = spec.lam[2]
    lam3 = spec.lam.get(3, 0.0)
    if b > 0 and lam3 == 0.0:
        return ApproxBound(0.0, 1.0, "abs-dvmin2", note="no degree-3 variables: b > 0 empty")
    coeff = math.factorial(a - 1) / (2.0 * math.factorial(b) * math.factorial(a - b))
    ratio = (2.0 * lam3 / lam2) ** b if b else 1.0
    est = coeff * ratio * (lam2 * spec.check_moment) ** a
    return ApproxBound(est, specht_ratio(spec.specht_h_w) ** (-a), "abs-dvmin2")


def _variable_compositions(degrees: list[int], a: int, edge_total: int) -> Iterator[dict[int, int]]:
    """All degree->count maps with `a` variables and degrees summing to edge_total."""

    def rec(idx: int, vars_left: int, edges_left: int, acc: dict[int, int]):
        if idx == len(degrees):
            if vars_left == 0 and edges_left == 0:
                yield dict(acc)
            return
        d = degrees[idx]
        for k in range(vars_left + 1):
            if k * d > edges_left:
                break
            if k:
                acc[d] = k
            yield from rec(idx + 1, vars_left - k, edges_left - k * d, acc)
            acc.pop(d, None)

    yield from rec(0, a, edge_total, {})


def lets_expected(spec: EnsembleSpec, a: int, b: int) -> float:
    """Expected multiplicity of (a, b) leafless elementary trapping sets.

    Survivors are simple cycles of length 2a whose variable degrees sum to
    2a + b; the value sums the exact-signature cycle count over all degree
    compositions achieving that sum, with check degrees free.  For a
    variable-regular spec this collapses to expected_cycles(spec, 2a) when
    b = a(d_v - 2) and 0 otherwise; infeasible (a, b) give 0.
    """
    if a < 2 or b < 0:
        return 0.0
    target = 2 * a + b
    degrees = sorted(spec.lam)
    total = 0.0
    for comp in _variable_compositions(degrees, a, target):
        sig = CycleSignature(c=2 * a, alpha=comp, beta_free=a)
        total += expected_cycles_partial_signature(spec, sig).estimate
    return total


def _tree_factor(j: int, d_v: int, mode: TreeCountMode) -> int:
    if mode == "exact_B":
        return basic_tree_count_B(j + 1, d_v)
    if mode == "catalan_upper":
        return catalan_general(j + 1, d_v)
    raise ValueError(f"unknown tree-count mode {mode!r}")


def _ets_double_sum(
    a: int,
    g: int,
    cycle_coeff: float,
    appendage_coeff: float,
    d_v: int,
    mode: TreeCountMode,
) -> float:
    """Shared kernel of the elementary-class predictors.

    Sums over cycle co-sizes i (cycle length 2(a - i), bounded below by the
    girth) and over the tree-size partitions of the i off-cycle variables:
    cycle term * multinomial placement * per-tree appendage factors.
    """
    total = 0.0
    for i in range(0, a - g // 2 + 1):
        cycle_term = cycle_coeff ** (a - i) / (2.0 * (a - i))
        for parts in forest_partitions(a, i):
            term = cycle_term * _multinomial(a - i, iter(parts))
            term *= appendage_coeff**i
            for j, t_j in enumerate(parts):
                if j >= 1 and t_j:
                    term *= float(_tree_factor(j, d_v, mode) ** t_j)
            total += term
    return total


def ets_expected_biregular(
    a: int, d_v: int, d_c: int, g: int, mode: TreeCountMode = "exact_B"
) -> ApproxBound:
    """Expected (a, a(d_v - 2)) elementary trapping sets, biregular ensemble.

    Cycle of length 2(a - i) with i variables hung off it in basic trees;
    each tree of variable-size j contributes (d_c - 1)^j tree-internal
    check choices times the shape count.  ``exact_B`` uses the exact shape
    counts; ``catalan_upper`` replaces them by the Catalan upper bound,
    accurate within (a - g/2 + 1)^-a.
    """
    if d_v < 3:
        raise ValueError(f"elementary-class predictor needs d_v >= 3, got {d_v}")
    if g < 4 or g % 2 != 0:
        raise ValueError(f"girth must be even and >= 4, got {g}")
    if 2 * a < g:
        return ApproxBound(
            0.0, 1.0, f"ets-biregular-{mode}", note="class empty: 2a below the girth"
        )
    # (d_c - 1) per tree variable folds into the appendage coefficient; the
    # cycle term is the biregular closed form.
    est = _ets_double_sum(
        a,
        g,
        cycle_coeff=float((d_v - 1) * (d_c - 1)),
        appendage_coeff=float(d_c - 1),
        d_v=d_v,
        mode=mode,
    )
    lf = 1.0 if mode == "exact_B" else (a - g // 2 + 1.0) ** (-a)
    return ApproxBound(est, lf, f"ets-biregular-{mode}")


def ets_expected_variable_regular(
    a: int, d_v: int, rho: dict[int, float], g: int, mode: TreeCountMode = "exact_B"
) -> ApproxBound:
    """Expected (a, a(d_v - 2)) elementary trapping sets with an arbitrary
    check-side distribution.

    The cycle term uses the check branching moment; each tree check offers
    (node-average check degree - 1) child choices.  The catalan_upper
    accuracy factor is [(a - g/2 + 1) S(h_w)]^-a; in exact_B mode only the
    Specht part S(h_w)^-a remains (the shape counts are exact).
    """
    if d_v < 3:
        raise ValueError(f"elementary-class predictor needs d_v >= 3, got {d_v}")
    probe = EnsembleSpec(lam={d_v: 1.0}, rho=rho, n=1)
    if 2 * a < g:
        return ApproxBound(
            0.0, 1.0, f"ets-varreg-{mode}", note="class empty: 2a below the girth"
        )
    est = _ets_double_sum(
        a,
        g,
        cycle_coeff=(d_v - 1) * probe.check_moment,
        appendage_coeff=probe.avg_check_degree - 1.0,
        d_v=d_v,
        mode=mode,
    )
    specht = specht_ratio(probe.specht_h_w) ** (-a)
    lf = specht if mode == "exact_B" else (a - g // 2 + 1.0) ** (-a) * specht
    return ApproxBound(est, lf, f"ets-varreg-{mode}")


def ets_expected_irregular_min_b(
    a: int, spec: EnsembleSpec, g: int, mode: TreeCountMode = "exact_B"
) -> ApproxBound:
    """Expected elementary trapping sets in the minimum-b class
    (a, a(d_vmin - 2)) of an irregular ensemble.

    All variables in these structures have the minimum degree q; each tree
    variable additionally pays the probability p_q that a uniformly chosen
    variable node has degree q.  Requires q >= 3 (a degree-2 root has no
    tree slots; those classes are covered by lets_expected).
    """
    q = spec.d_vmin
    if q < 3:
        raise ValueError(
            "minimum-b elementary predictor needs d_vmin >= 3; degree-2 floors "
            "are plain cycle classes, see lets_expected"
        )
    if 2 * a < g:
        return ApproxBound(
            0.0, 1.0, f"ets-irregular-minb-{mode}", note="class empty: 2a below the girth"
        )
    p_q = spec.var_node_fractions[q]
    est = _ets_double_sum(
        a,
        g,
        cycle_coeff=spec.lam[q] * (q - 1) * spec.check_moment,
        appendage_coeff=(spec.avg_check_degree - 1.0) * p_q,
        d_v=q,
        mode=mode,
    )
    specht = specht_ratio(spec.specht_h_w) ** (-a)
    lf = specht if mode == "exact_B" else (a - g // 2 + 1.0) ** (-a) * specht
    return ApproxBound(est, lf, f"ets-irregular-minb-{mode}")
