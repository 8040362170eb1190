"""Balance patterns of two-level-type U-type designs.

For a design whose p qualitative factors share s1 levels and whose q
quantitative factors share s2 levels, the balance component of a column
subset is the sum of squared deviations of its level-combination counts
from perfect uniformity; it vanishes exactly when the subset forms an
orthogonal array of full strength.  The balance pattern averages the
components over all subsets of each size.  Counts accumulate as exact
integers and only the final normalization is floating point, so the
column-subset form and the pairwise row form agree exactly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError
from .model import Design, validate_utype

SUBSET_FACTOR_CAP = 24  # subset enumeration is 2^(p+q); refuse beyond this


@dataclass(frozen=True)
class BalancePattern:
    """Aggregate balance vector plus (optionally) the per-subset components.

    ``aggregate[k-1]`` is the mean component over all k-column subsets;
    zero certifies orthogonal-array strength k.  ``components`` maps each
    column subset to its component; the pairwise row form produces only
    the aggregate, so there it is None.
    """

    aggregate: tuple[float, ...]
    components: dict[tuple[int, ...], float] | None = None


def _two_type_levels(design: Design) -> tuple[np.ndarray, int, int]:
    """Integer levels plus the common (s1, s2); rejects unsuitable designs."""
    spec = design.spec
    qual_set = set(spec.qualitative_levels)
    quant_set = set(spec.quantitative_levels)
    if len(qual_set) > 1 or len(quant_set) > 1:
        raise DomainError(
            "balance pattern needs one common level count per factor type, "
            f"got qualitative {sorted(qual_set)} and quantitative {sorted(quant_set)}"
        )
    s1 = qual_set.pop() if qual_set else 1
    s2 = quant_set.pop() if quant_set else 1
    report = validate_utype(design)
    if not report.passed:
        first = report.defects[0]
        raise DomainError(
            f"balance pattern needs a U-type design; column {first.column}: {first.message}"
        )
    return design.all_levels(), s1, s2


def _component_exact(
    levels: np.ndarray, cols: tuple[int, ...], p: int, s1: int, s2: int, n: int
) -> Fraction:
    k1 = sum(1 for c in cols if c < p)
    k2 = len(cols) - k1
    counts = Counter(map(tuple, levels[:, cols]))
    sum_sq = sum(c * c for c in counts.values())
    return sum_sq - Fraction(n * n, s1**k1 * s2**k2)


def balance_component(design: Design, columns) -> float:
    """Squared count deviations of one column subset (0-based indices)."""
    cols = tuple(sorted(int(c) for c in columns))
    spec = design.spec
    if not cols:
        raise DomainError("column subset must be nonempty")
    if cols[0] < 0 or cols[-1] >= spec.m:
        raise DomainError(f"column subset {cols} out of range for {spec.m} factors")
    if len(set(cols)) != len(cols):
        raise DomainError(f"column subset {cols} has repeats")
    levels, s1, s2 = _two_type_levels(design)
    return float(_component_exact(levels, cols, spec.p, s1, s2, spec.n))


def _subset_sums(design: Design) -> tuple[list[Fraction], dict[tuple[int, ...], Fraction]]:
    """Exact aggregate (index k-1) and per-subset components."""
    spec = design.spec
    if spec.m > SUBSET_FACTOR_CAP:
        raise CapacityError(
            f"subset enumeration over {spec.m} factors exceeds cap {SUBSET_FACTOR_CAP}"
        )
    levels, s1, s2 = _two_type_levels(design)
    components: dict[tuple[int, ...], Fraction] = {}
    aggregate: list[Fraction] = []
    for k in range(1, spec.m + 1):
        acc = Fraction(0)
        for cols in combinations(range(spec.m), k):
            comp = _component_exact(levels, cols, spec.p, s1, s2, spec.n)
            components[cols] = comp
            acc += comp
        aggregate.append(acc / math.comb(spec.m, k))
    return aggregate, components


def balance_pattern(design: Design) -> BalancePattern:
    """Balance pattern by direct enumeration of all column subsets."""
    aggregate, components = _subset_sums(design)
    return BalancePattern(
        aggregate=tuple(float(v) for v in aggregate),
        components={c: float(v) for c, v in components.items()},
    )


def balance_pattern_rowform(design: Design) -> BalancePattern:
    """Balance pattern through row agreement counts.

    A subset contributes to the pair (i, j) iff the rows agree on all its
    columns, so the subset sum collapses to binomials of the per-pair
    agreement count; only the uniform reference term still needs the
    per-size column split.
    """
    spec = design.spec
    levels, s1, s2 = _two_type_levels(design)
    n, p, q, m = spec.n, spec.p, spec.q, spec.m
    agree = np.zeros((n, n), dtype=np.int64)
    for k in range(m):
        col = levels[:, k]
        agree += col[:, None] == col[None, :]
    agree_hist = np.bincount(agree.ravel(), minlength=m + 1)
    aggregate = []
    for k in range(1, m + 1):
        pairs = sum(
            int(agree_hist[a]) * math.comb(a, k) for a in range(k, m + 1)
        )
        reference = sum(
            math.comb(p, k1) * math.comb(q, k - k1) * Fraction(n * n, s1**k1 * s2 ** (k - k1))
            for k1 in range(max(0, k - q), min(p, k) + 1)
        )
        aggregate.append((pairs - reference) / math.comb(m, k))
    return BalancePattern(aggregate=tuple(float(v) for v in aggregate), components=None)


def qqd_from_balance(design: Design) -> float:
    """Squared discrepancy assembled from the balance pattern.

    Valid for designs whose quantitative factors all have two levels: the
    two-level wrap-around kernel takes only the values 3/2 and 5/4, which
    makes every pair product a polynomial in the per-column agreement
    indicators and hence in the balance components.  Exact rationals
    throughout; one final float rounding.
    """
    spec = design.spec
    for j, s in enumerate(spec.quantitative_levels):
        if s != 2:
            raise DomainError(
                "the balance form needs 2-level quantitative factors "
                f"(factor {spec.p + j} has {s})"
            )
    aggregate, _ = _subset_sums(design)
    s1 = spec.qualitative_levels[0] if spec.p else 1
    n, p, q, m = spec.n, spec.p, spec.q, spec.m
    head = Fraction(5 * s1 + 1, 4 * s1) ** p
    const = -head * Fraction(4, 3) ** q + head * Fraction(11, 8) ** q
    acc = sum(
        Fraction(1, 5**k) * math.comb(m, k) * aggregate[k - 1]
        for k in range(1, m + 1)
    )
    return float(const + Fraction(1, n * n) * Fraction(5, 4) ** m * acc)
