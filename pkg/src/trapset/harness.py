"""Monte Carlo experiment orchestration and prediction comparison.

A run samples ``trials`` graphs per block length, censuses the requested
categories, and places the empirical means next to the closed-form
expectations.  Everything is reproducible from (config, base seed): trial
seeds are derived through named spawn keys, so the statistics do not depend
on scheduling or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import asymptotics as asy
from .ensemble import (
    EnsembleSpec,
    SamplingBudgetError,
    realize_degree_sequence,
    sample_tanner_graph,
)
from .enumeration import EnumerationBudgetError, census
from .structures import CATEGORIES

__all__ = [
    "TolerancePolicy",
    "ExperimentConfig",
    "ComparisonRow",
    "ExperimentReport",
    "ExperimentAborted",
    "predict_table",
    "run_experiment",
    "compare",
    "emit_report",
    "derive_trial_seed",
]

CSV_HEADER = "category,a,b,n,trials,mean,sd,estimate,lower_factor,discrepancy,pass"


class ExperimentAborted(RuntimeError):
    """Too many failed trials; carries the per-trial failure records."""

    def __init__(self, message: str, failures: list):
        super().__init__(message)
        self.failures = failures


@dataclass(frozen=True)
class TolerancePolicy:
    """Pass band: within rel_band of the estimate, or within se_mult
    standard errors, whichever is looser."""

    rel_band: float = 0.2
    se_mult: float = 3.0


@dataclass(frozen=True)
class ExperimentConfig:
    spec: EnsembleSpec
    trials: int = 10
    a_max: int = 5
    b_max: int = 5
    categories: tuple[str, ...] = ("LETS",)
    base_seed: int = 0
    girth_min: Optional[int] = None
    n_sweep: Optional[tuple[int, ...]] = None
    tolerance: TolerancePolicy = field(default_factory=TolerancePolicy)
    prediction_girth: Optional[int] = None
    max_failed_fraction: float = 0.2
    workers: int = 1
    tree_mode: str = "exact_B"
    max_retries: Optional[int] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for cat in self.categories:
            if cat not in CATEGORIES:
                raise ValueError(f"unknown category {cat!r}")

    @property
    def effective_girth_min(self) -> Optional[int]:
        return self.girth_min if self.girth_min is not None else self.spec.girth_min

    @property
    def effective_prediction_girth(self) -> int:
        """Girth assumed by the predictions: the conditioning girth when one
        is configured, else 4 (simple bipartite graphs guarantee no less)."""
        if self.prediction_girth is not None:
            return self.prediction_girth
        return self.effective_girth_min if self.effective_girth_min else 4

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExperimentConfig":
        spec = EnsembleSpec.from_json_dict(data["ensemble"])
        tol = data.get("tolerance")
        policy = TolerancePolicy() if tol is None else TolerancePolicy(rel_band=float(tol))
        return cls(
            spec=spec,
            trials=int(data.get("trials", 10)),
            a_max=int(data.get("a_max", 5)),
            b_max=int(data.get("b_max", 5)),
            categories=tuple(data.get("categories", ["LETS"])),
            base_seed=int(data.get("seed", 0)),
            girth_min=None if data.get("girth_min") is None else int(data["girth_min"]),
            n_sweep=None if data.get("n_sweep") is None else tuple(int(x) for x in data["n_sweep"]),
            tolerance=policy,
            prediction_girth=(
                None if data.get("prediction_girth") is None else int(data["prediction_girth"])
            ),
            workers=int(data.get("workers", 1)),
            tree_mode=str(data.get("tree_mode", "exact_B")),
            max_retries=None if data.get("max_retries") is None else int(data["max_retries"]),
        )

    def to_json_dict(self) -> dict:
        out = {
            "ensemble": self.spec.to_json_dict(),
            "trials": self.trials,
            "a_max": self.a_max,
            "b_max": self.b_max,
            "categories": list(self.categories),
            "seed": self.base_seed,
            "tolerance": self.tolerance.rel_band,
            "workers": self.workers,
            "tree_mode": self.tree_mode,
        }
        if self.girth_min is not None:
            out["girth_min"] = self.girth_min
        if self.n_sweep is not None:
            out["n_sweep"] = list(self.n_sweep)
        if self.prediction_girth is not None:
            out["prediction_girth"] = self.prediction_girth
        if self.max_retries is not None:
            out["max_retries"] = self.max_retries
        return out


@dataclass(frozen=True)
class ComparisonRow:
    category: str
    a: int
    b: int
    n: int
    trials: int
    mean: float
    sd: float
    estimate: Optional[float]
    lower_factor: Optional[float]
    discrepancy: Optional[float]
    passed: Optional[bool]
    formula: str = ""


@dataclass
class ExperimentReport:
    rows: list[ComparisonRow]
    metadata: dict

    @property
    def all_passed(self) -> bool:
        return all(r.passed is not False for r in self.rows)


def derive_trial_seed(base_seed: int, n_index: int, trial: int) -> int:
    """64-bit per-trial seed from (base seed, sweep point, trial index)."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(n_index, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def predict_table(
    spec: EnsembleSpec,
    categories: tuple[str, ...],
    a_max: int,
    b_max: int,
    g: int = 6,
    tree_mode: str = "exact_B",
    girth_floor: Optional[int] = None,
) -> dict[tuple[str, int, int], Optional[asy.ApproxBound]]:
    """Closed-form expectation per (category, a, b) cell.

    Cells the closed forms do not cover map to None (raw TS classes, and
    irregular elementary classes away from the minimum-b floor); diverging
    variable-regular elementary classes carry an infinite estimate.

    When ``girth_floor`` is given (a run over girth-conditioned samples),
    classes whose surviving shape is a cycle of length 2a < girth_floor are
    forced to zero: the conditioning removes them outright.
    """
    out: dict[tuple[str, int, int], Optional[asy.ApproxBound]] = {}
    dvmax = spec.d_vmax
    for cat in categories:
        if cat not in CATEGORIES:
            raise ValueError(f"unknown category {cat!r}")
        for a in range(1, a_max + 1):
            for b in range(0, min(b_max, a * dvmax) + 1):
                bound = _predict_cell(spec, cat, a, b, g, tree_mode)
                if (
                    girth_floor is not None
                    and 2 * a < girth_floor
                    and cat in ("SS", "ETS", "LETS", "ABS", "EABS")
                    and bound is not None
                    and math.isfinite(bound.estimate)
                    and bound.estimate > 0.0
                ):
                    bound = asy.ApproxBound(
                        0.0, 1.0, bound.formula, note="2a below the girth floor"
                    )
                out[(cat, a, b)] = bound
    return out


def _predict_cell(
    spec: EnsembleSpec, cat: str, a: int, b: int, g: int, tree_mode: str
) -> Optional[asy.ApproxBound]:
    if cat == "TS":
        return None
    if a < 2:
        # A lone variable is an ETS of class (1, d); nothing else at a = 1.
        if cat == "ETS":
            if b in spec.lam:
                return asy.ApproxBound(math.inf, 1.0, "ets-diverging")
            return asy.ApproxBound(0.0, 1.0, "ets-empty")
        return asy.ApproxBound(0.0, 1.0, f"{cat.lower()}-empty")
    if cat == "LETS":
        value = asy.lets_expected(spec, a, b)
        lf = asy.specht_ratio(spec.specht_h_w) ** (-a) if value > 0 else 1.0
        return asy.ApproxBound(value, lf, "lets-composition")
    if cat == "SS":
        if b == 0 and spec.d_vmin == 2:
            return asy.ss_expected_a0(spec, a)
        return asy.ApproxBound(0.0, 1.0, "ss-vanishing")
    if cat in ("ABS", "EABS"):
        if spec.d_vmin in (2, 3):
            bound = asy.abs_expected(spec, a, b)
            if cat == "EABS":
                # Surviving absorbing structures are elementary, so the
                # elementary subcategory shares the expectation.
                return asy.ApproxBound(
                    bound.estimate, bound.lower_factor, "eabs-" + bound.formula
                )
            return bound
        return asy.ApproxBound(0.0, 1.0, f"{cat.lower()}-vanishing")
    if cat == "ETS":
        if spec.is_variable_regular:
            d_v = spec.d_vmin
            floor = a * (d_v - 2)
            if b > floor:
                if (a * d_v - b) % 2 == 0 and b <= a * d_v:
                    return asy.ApproxBound(math.inf, 1.0, "ets-diverging")
                return asy.ApproxBound(0.0, 1.0, "ets-empty")
            if b < floor:
                return asy.ApproxBound(0.0, 1.0, "ets-vanishing")
            if d_v == 2:
                value = asy.lets_expected(spec, a, b)
                return asy.ApproxBound(value, 1.0, "lets-composition")
            if spec.is_check_regular:
                return asy.ets_expected_biregular(a, d_v, spec.d_cmin, g, tree_mode)
            return asy.ets_expected_variable_regular(a, d_v, spec.rho, g, tree_mode)
        q = spec.d_vmin
        if q >= 3 and b == a * (q - 2):
            return asy.ets_expected_irregular_min_b(a, spec, g, tree_mode)
        if q == 2 and b == 0:
            value = asy.lets_expected(spec, a, 0)
            return asy.ApproxBound(value, 1.0, "lets-composition")
        return None
    raise ValueError(f"unknown category {cat!r}")


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Sample, census, aggregate, and compare against predictions.

    Failed trials (sampling or enumeration budgets) are skipped and
    recorded; the run aborts once more than ``max_failed_fraction`` of all
    trials have failed.
    """
    n_values = tuple(config.n_sweep) if config.n_sweep else (config.spec.n,)
    per_class: dict[tuple[str, int, int, int], list[float]] = {}
    failures: list[dict] = []
    total_trials = len(n_values) * config.trials
    max_failures = int(config.max_failed_fraction * total_trials)

    for n_index, n in enumerate(n_values):
        spec_n = replace(config.spec, n=n)
        seq = realize_degree_sequence(spec_n)
        tables = []
        for trial in range(config.trials):
            seed = derive_trial_seed(config.base_seed, n_index, trial)
            try:
                graph = sample_tanner_graph(
                    seq,
                    seed=seed,
                    girth_min=config.effective_girth_min,
                    max_retries=config.max_retries,
                )
                tables.append(
                    census(
                        graph,
                        config.categories,
                        config.a_max,
                        config.b_max,
                        workers=config.workers,
                    )
                )
            except (SamplingBudgetError, EnumerationBudgetError) as exc:
                failures.append({"n": n, "trial": trial, "seed": seed, "error": str(exc)})
                if len(failures) > max_failures:
                    raise ExperimentAborted(
                        f"{len(failures)} of {total_trials} trials failed "
                        f"(threshold {config.max_failed_fraction:.0%})",
                        failures,
                    ) from exc
        keys = set()
        for t in tables:
            keys.update(t.entries.keys())
        for cat, a, b in keys:
            per_class[(cat, a, b, n)] = [float(t.count(cat, a, b)) for t in tables]

    predictions = predict_table(
        config.spec,
        config.categories,
        config.a_max,
        config.b_max,
        g=config.effective_prediction_girth,
        tree_mode=config.tree_mode,
        girth_floor=config.effective_girth_min,
    )
    rows = compare(per_class, predictions, config.tolerance, n_values, config.trials)
    metadata = {
        "config": config.to_json_dict(),
        "n_values": list(n_values),
        "failed_trials": failures,
        "trials_per_point": config.trials,
    }
    return ExperimentReport(rows=rows, metadata=metadata)


def _mean_sd(values: list[float]) -> tuple[float, float]:
    k = len(values)
    mean = math.fsum(values) / k
    sd = math.sqrt(math.fsum((x - mean) ** 2 for x in values) / (k - 1)) if k > 1 else 0.0
    return mean, sd


def compare(
    empirical: dict[tuple[str, int, int, int], list[float]],
    predicted: dict[tuple[str, int, int], Optional[asy.ApproxBound]],
    policy: TolerancePolicy,
    n_values: tuple[int, ...],
    trials: int,
) -> list[ComparisonRow]:
    """Join empirical statistics with predictions into judged rows.

    A class present on only one side gets an explicit zero on the other.
    Judgment: for a positive estimate the mean must sit within
    max(rel_band * estimate, se_mult * se); a zero estimate passes when the
    means are nonincreasing across a configured n-sweep (at a single n,
    when the mean is within se_mult standard errors of zero).  Cells with
    no closed form, or a diverging one, are reported unjudged.
    """
    class_keys = sorted(
        {k[:3] for k in empirical} | {k for k, v in predicted.items() if v is not None}
    )
    rows: list[ComparisonRow] = []
    for cat, a, b in class_keys:
        bound = predicted.get((cat, a, b))
        sweep_means = [
            _mean_sd(empirical.get((cat, a, b, n), [0.0] * trials))[0] for n in n_values
        ]
        sweep_nonincreasing = all(
            x >= y - 1e-12 for x, y in zip(sweep_means, sweep_means[1:])
        )
        for n in n_values:
            values = empirical.get((cat, a, b, n), [0.0] * trials)
            mean, sd = _mean_sd(values)
            se = sd / math.sqrt(len(values))
            if bound is None or not math.isfinite(bound.estimate):
                rows.append(
                    ComparisonRow(
                        cat, a, b, n, len(values), mean, sd,
                        None if bound is None else bound.estimate,
                        None if bound is None else bound.lower_factor,
                        None, None,
                        formula="" if bound is None else bound.formula,
                    )
                )
                continue
            est = bound.estimate
            if se > 0.0:
                discrepancy = (mean - est) / se
            elif mean == est:
                discrepancy = 0.0
            else:
                discrepancy = math.copysign(math.inf, mean - est)
            if est > 0.0:
                passed = abs(mean - est) <= max(policy.rel_band * est, policy.se_mult * se)
            elif len(n_values) > 1:
                passed = sweep_nonincreasing
            else:
                passed = mean <= policy.se_mult * se
            rows.append(
                ComparisonRow(
                    cat, a, b, n, len(values), mean, sd,
                    est, bound.lower_factor, discrepancy, passed,
                    formula=bound.formula,
                )
            )
    return rows


def _render(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(report: ExperimentReport, fmt: str, path: str) -> str:
    """Write the report as CSV or JSON; byte-reproducible for equal reports."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in report.rows:
            lines.append(
                ",".join(
                    _render(x)
                    for x in (
                        r.category, r.a, r.b, r.n, r.trials, r.mean, r.sd,
                        r.estimate, r.lower_factor, r.discrepancy, r.passed,
                    )
                )
            )
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        import json

        payload = {
            "metadata": report.metadata,
            "rows": [
                {
                    "category": r.category,
                    "a": r.a,
                    "b": r.b,
                    "n": r.n,
                    "trials": r.trials,
                    "mean": r.mean,
                    "sd": r.sd,
                    "estimate": r.estimate,
                    "lower_factor": r.lower_factor,
                    "discrepancy": r.discrepancy,
                    "pass": r.passed,
                    "formula": r.formula,
                }
                for r in report.rows
            ],
        }

        def encode(x):
            if isinstance(x, float) and not math.isfinite(x):
                return repr(x)
            raise TypeError(f"not JSON serializable: {x!r}")

        text = json.dumps(payload, sort_keys=True, indent=2, default=encode) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text
