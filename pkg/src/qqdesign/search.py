"""Threshold-accepting search for uniform designs, plus an exhaustive oracle.

The search walks the space of U-type designs by swapping two entries
within one column (which preserves column balance), accepts a move when
its objective increase is at most the current threshold, and lowers the
threshold over a fixed schedule.  The objective is the squared
qualitative-quantitative discrepancy, maintained incrementally through a
PairCache and re-verified by a full recomputation at termination.  The
combined analytic lower bound doubles as an early-stopping certificate:
a design within ``bound_tol`` of the bound is provably uniform.

All randomness flows from numpy's PCG64 generator seeded from the
configured seed, so identical inputs give bit-identical results on every
platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .bounds import lb
from .discrepancy import PairCache, _constant_term, qqd_squared
from .errors import CapacityError, DomainError
from .model import DEFAULT_CONFIG, Design, DesignSpec, design_from_levels


def _balanced_column(spec_n: int, s: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(np.repeat(np.arange(s), spec_n // s))


def random_utype(spec: DesignSpec, seed) -> Design:
    """Uniformly random balanced columns; deterministic for a given seed."""
    if not spec.is_utype_feasible():
        raise DomainError(
            f"no U-type designs exist: some level count does not divide n={spec.n}"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    cols = [_balanced_column(spec.n, s, rng) for s in spec.levels]
    levels = np.column_stack(cols)
    return design_from_levels(spec, levels[:, : spec.p], levels[:, spec.p :])


@dataclass(frozen=True)
class SearchConfig:
    """Stochastic search knobs.

    ``budget`` is the iteration cap per restart.  ``threshold_schedule``
    must be non-increasing and end at 0; when omitted, a 20-step geometric
    ladder from 5% of the initial bound gap down to 0 is built per
    restart.  Zero-threshold moves (no worsening) are always accepted so
    plateaus stay traversable.
    """

    budget: int = 10_000
    restarts: int = 4
    threshold_schedule: tuple[float, ...] | None = None
    seed: int = 0
    stop_at_bound: bool = True
    bound_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise DomainError(f"budget must be >= 0, got {self.budget}")
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.threshold_schedule is not None:
            sched = tuple(float(t) for t in self.threshold_schedule)
            if not sched or sched[-1] != 0.0:
                raise DomainError("threshold schedule must end at 0")
            if any(t < 0 for t in sched) or any(
                x < y for x, y in zip(sched, sched[1:])
            ):
                raise DomainError("threshold schedule must be non-increasing and >= 0")
            object.__setattr__(self, "threshold_schedule", sched)


@dataclass(frozen=True)
class SearchResult:
    best_design: Design
    best_value: float
    bound: float
    bound_source: str
    gap: float
    trace: tuple[tuple[int, float], ...]
    terminated_by: str  # "budget" | "bound" | "schedule"


def _default_schedule(initial_gap: float) -> tuple[float, ...]:
    top = 0.05 * max(initial_gap, 0.0)
    if top <= 0.0:
        return (0.0,) * 20
    ladder = np.geomspace(top, top * 1e-3, 19)
    return tuple(float(t) for t in ladder) + (0.0,)


def _run_restart(
    spec: DesignSpec,
    config: SearchConfig,
    rng: np.random.Generator,
    bound: float,
):
    design = random_utype(spec, rng)
    cache = PairCache(design, DEFAULT_CONFIG)
    value = cache.value()
    best_value = value
    best_design = design
    trace = [(0, value)]
    if config.stop_at_bound and best_value <= bound + config.bound_tol:
        return best_value, best_design, trace, "bound"
    if spec.n < 2:
        return best_value, best_design, trace, "schedule"

    schedule = config.threshold_schedule or _default_schedule(value - bound)
    chunk = max(1, config.budget // len(schedule))
    iteration = 0
    terminated = "budget" if config.budget == 0 else None
    for threshold in schedule:
        if terminated:
            break
        for _ in range(chunk):
            if iteration >= config.budget:
                terminated = "budget"
                break
            iteration += 1
            column = int(rng.integers(spec.m))
            row_i, row_j = (int(r) for r in rng.choice(spec.n, size=2, replace=False))
            candidate = cache.apply_swap(column, row_i, row_j)
            if candidate - value <= threshold:
                value = candidate
                if value < best_value:
                    best_value = value
                    best_design = cache.design
                    trace.append((iteration, value))
                    if config.stop_at_bound and value <= bound + config.bound_tol:
                        terminated = "bound"
                        break
            else:
                cache.apply_swap(column, row_i, row_j)  # exact revert
    return best_value, best_design, trace, terminated or "schedule"


def search_uniform(spec: DesignSpec, config: SearchConfig | None = None) -> SearchResult:
    """Best U-type design found across ``config.restarts`` independent restarts.

    Restarts draw from children of one seed sequence; results merge by
    minimum value with ties broken by restart index, so the outcome does
    not depend on execution order.  The incrementally tracked objective of
    the winner is re-verified against a full recomputation.
    """
    config = config or SearchConfig()
    if not spec.is_utype_feasible():
        raise DomainError(
            f"no U-type designs exist: some level count does not divide n={spec.n}"
        )
    report = lb(spec)
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    best = None
    for child in seeds:
        rng = np.random.Generator(np.random.PCG64(child))
        value, design, trace, terminated = _run_restart(spec, config, rng, report.value)
        if best is None or value < best[0]:
            best = (value, design, trace, terminated)
        if terminated == "bound" and config.stop_at_bound:
            break
    value, design, trace, terminated = best
    recomputed = qqd_squared(design)
    if abs(recomputed - value) > DEFAULT_CONFIG.tol_equiv:
        raise RuntimeError(
            f"incremental objective drifted: tracked {value!r} vs recomputed {recomputed!r}"
        )
    return SearchResult(
        best_design=design,
        best_value=value,
        bound=report.value,
        bound_source=report.source,
        gap=value - report.value,
        trace=tuple(trace),
        terminated_by=terminated,
    )


def _distinct_balanced_columns(n: int, s: int) -> list[tuple[int, ...]]:
    """All distinct permutations of the balanced level multiset, lexicographic."""
    reps = n // s
    out: list[tuple[int, ...]] = []
    column: list[int] = []
    remaining = [reps] * s

    def grow() -> None:
        if len(column) == n:
            out.append(tuple(column))
            return
        for lev in range(s):
            if remaining[lev]:
                remaining[lev] -= 1
                column.append(lev)
                grow()
                column.pop()
                remaining[lev] += 1

    grow()
    return out


def count_utype_designs(spec: DesignSpec) -> int:
    """Exact size of the U-type design space (columns chosen independently)."""
    if not spec.is_utype_feasible():
        raise DomainError(
            f"no U-type designs exist: some level count does not divide n={spec.n}"
        )
    total = 1
    for s in spec.levels:
        reps = spec.n // s
        count = math.factorial(spec.n) // math.factorial(reps) ** s
        total *= count
    return total


@dataclass(frozen=True)
class ExhaustiveResult:
    optimum: float
    design: Design
    count: int  # optima within 1e-12 * max(1, |optimum|) of the minimum


def exhaustive_uniform(spec: DesignSpec, cap: int = 10_000_000) -> ExhaustiveResult:
    """Exact minimum of the squared discrepancy over every U-type design.

    Raw enumeration over all column combinations (no canonicalization, so
    the optimum count is over the full space).  Per-factor kernel
    contributions are precomputed per candidate column, which makes each
    design an elementwise product and a sum.
    """
    total = count_utype_designs(spec)
    if total > cap:
        raise CapacityError(f"{total} U-type designs exceed the enumeration cap {cap}")

    config = DEFAULT_CONFIG
    n = spec.n
    factor_columns = [_distinct_balanced_columns(n, s) for s in spec.levels]
    factor_weights = []
    for k, s in enumerate(spec.levels):
        mats = []
        for col in factor_columns[k]:
            arr = np.asarray(col)
            if k < spec.p:
                mats.append(
                    np.where(arr[:, None] == arr[None, :], config.a / config.b, 1.0)
                )
            else:
                x = (2 * arr + 1) / (2 * s)
                d = np.abs(x[:, None] - x[None, :])
                mats.append(1.5 - d + d * d)
        factor_weights.append(mats)

    C = _constant_term(spec.qualitative_levels, spec.q, config.a, config.b)
    scale = config.b**spec.p / n**2
    best = math.inf
    best_choice = None
    count = 0
    base = np.ones((n, n))
    for choice in product(*(range(len(cols)) for cols in factor_columns)):
        w = base
        for k, c in enumerate(choice):
            w = w * factor_weights[k][c]
        value = C + scale * math.fsum(w.ravel().tolist())
        if value < best - 1e-12 * max(1.0, abs(value)):
            best = value
            best_choice = choice
            count = 1
        elif abs(value - best) <= 1e-12 * max(1.0, abs(best)):
            count += 1
    levels = np.column_stack(
        [factor_columns[k][c] for k, c in enumerate(best_choice)]
    )
    design = design_from_levels(spec, levels[:, : spec.p], levels[:, spec.p :])
    return ExhaustiveResult(optimum=best, design=design, count=count)
