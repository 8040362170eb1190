"""Designs with mixed qualitative and quantitative factors.

A design is an n x (p+q) array whose first p columns are qualitative
(integer levels 0..s_k-1, unordered categories) and whose last q columns
are quantitative (reals in the closed unit interval).  An s-level
quantitative factor is "lattice-valued" when every entry equals
(2*level + 1)/(2*s) for some integer level; that placement centers the s
levels in equal cells of [0, 1].  Raw (non-lattice) quantitative values
are also supported, e.g. rescaled axial points of a central composite
design.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, StructureError

# |value - nearest lattice point| below this counts as lattice-valued;
# loose enough to survive decimal round-trips through files.
LATTICE_TOL = 1e-9

# full_factorial refuses to enumerate more rows than this
FULL_FACTORIAL_ROW_CAP = 1_000_000


@dataclass(frozen=True)
class DesignSpec:
    """Run count and factor structure of a design class.

    The first ``p`` entries of ``levels`` are the qualitative level
    counts, the remaining ``q`` the quantitative ones.  ``N`` is the
    number of level combinations; ``t`` is ``p`` plus the number of
    odd-level quantitative factors (the split used by the analytic
    bounds).
    """

    n: int
    p: int
    q: int
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(int(s) for s in self.levels))
        if self.n < 1:
            raise DomainError(f"run count must be >= 1, got {self.n}")
        if self.p < 0 or self.q < 0:
            raise DomainError("factor counts must be non-negative")
        if self.p + self.q < 1:
            raise DomainError("at least one factor is required")
        if len(self.levels) != self.p + self.q:
            raise DomainError(
                f"expected {self.p + self.q} level counts, got {len(self.levels)}"
            )
        if any(s < 1 for s in self.levels):
            raise DomainError("every level count must be >= 1")

    @property
    def m(self) -> int:
        return self.p + self.q

    @property
    def N(self) -> int:
        """Number of level combinations (exact integer arithmetic)."""
        return math.prod(self.levels)

    @property
    def t(self) -> int:
        return self.p + sum(1 for s in self.quantitative_levels if s % 2 == 1)

    @property
    def qualitative_levels(self) -> tuple[int, ...]:
        return self.levels[: self.p]

    @property
    def quantitative_levels(self) -> tuple[int, ...]:
        return self.levels[self.p :]

    def is_utype_feasible(self) -> bool:
        """True when every level count divides the run count."""
        return all(self.n % s == 0 for s in self.levels)


@dataclass(frozen=True)
class CriterionConfig:
    """Kernel weights and tolerances.

    ``a`` and ``b`` are the same-level and different-level weights of the
    qualitative kernel.  The defaults 3/2 and 5/4 give the qualitative
    kernel the same range as the quantitative one, so both factor types
    carry equal weight.
    """

    a: float = 1.5
    b: float = 1.25
    tol_equiv: float = 1e-10
    tol_reference: float = 5e-5  # against 4-decimal documented values

    def __post_init__(self) -> None:
        if not (self.a > self.b > 0.0):
            raise DomainError(f"kernel weights need a > b > 0, got a={self.a}, b={self.b}")


DEFAULT_CONFIG = CriterionConfig()


def level_to_unit(level: int, s: int) -> float:
    """Place ``level`` of an s-level factor at (2*level + 1)/(2*s) in (0, 1)."""
    if s < 1:
        raise DomainError(f"level count must be >= 1, got {s}")
    if not 0 <= level < s:
        raise DomainError(f"level {level} out of range for {s}-level factor")
    return (2 * level + 1) / (2 * s)


def unit_to_level(value: float, s: int) -> int:
    """Recover the integer level behind a lattice value; inverse of level_to_unit."""
    level = int(round(value * s - 0.5))
    level = min(max(level, 0), s - 1)
    if abs(value - (2 * level + 1) / (2 * s)) > LATTICE_TOL:
        raise DomainError(f"value {value!r} is not a lattice point of an {s}-level factor")
    return level


@dataclass(frozen=True, eq=False)
class Design:
    """An immutable design: qualitative integer levels and quantitative unit-interval values."""

    spec: DesignSpec
    qualitative: np.ndarray
    quantitative: np.ndarray

    def __post_init__(self) -> None:
        qual = np.array(self.qualitative, dtype=np.int64).reshape(self.spec.n, self.spec.p)
        quant = np.array(self.quantitative, dtype=np.float64).reshape(self.spec.n, self.spec.q)
        for k in range(self.spec.p):
            s = self.spec.levels[k]
            bad = np.nonzero((qual[:, k] < 0) | (qual[:, k] >= s))[0]
            if bad.size:
                r = int(bad[0])
                raise DomainError(
                    f"qualitative entry {qual[r, k]} at row {r}, column {k} "
                    f"outside 0..{s - 1}"
                )
        for k in range(self.spec.q):
            col = quant[:, k]
            bad = np.nonzero(~((col >= 0.0) & (col <= 1.0)))[0]
            if bad.size:
                r = int(bad[0])
                raise DomainError(
                    f"quantitative entry {col[r]!r} at row {r}, column {self.spec.p + k} "
                    "outside [0, 1]"
                )
        qual.setflags(write=False)
        quant.setflags(write=False)
        object.__setattr__(self, "qualitative", qual)
        object.__setattr__(self, "quantitative", quant)

    @property
    def n(self) -> int:
        return self.spec.n

    def quantitative_as_levels(self) -> np.ndarray:
        """Integer-level view of the quantitative columns; raises DomainError off-lattice."""
        out = np.empty((self.spec.n, self.spec.q), dtype=np.int64)
        for k, s in enumerate(self.spec.quantitative_levels):
            for r in range(self.spec.n):
                try:
                    out[r, k] = unit_to_level(float(self.quantitative[r, k]), s)
                except DomainError as exc:
                    raise DomainError(
                        f"row {r}, column {self.spec.p + k}: {exc}"
                    ) from None
        return out

    def is_lattice(self) -> bool:
        try:
            self.quantitative_as_levels()
        except DomainError:
            return False
        return True

    def all_levels(self) -> np.ndarray:
        """n x (p+q) integer-level matrix (requires lattice-valued quantitative columns)."""
        return np.hstack([self.qualitative, self.quantitative_as_levels()])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return (
            self.spec == other.spec
            and np.array_equal(self.qualitative, other.qualitative)
            and np.array_equal(self.quantitative, other.quantitative)
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.qualitative.tobytes(), self.quantitative.tobytes()))


def design_from_levels(
    spec: DesignSpec, qualitative_levels, quantitative_levels
) -> Design:
    """Build a lattice-valued design from integer levels for every column."""
    quant_levels = np.asarray(quantitative_levels, dtype=np.int64).reshape(spec.n, spec.q)
    values = np.empty((spec.n, spec.q), dtype=np.float64)
    for k, s in enumerate(spec.quantitative_levels):
        col = quant_levels[:, k]
        bad = np.nonzero((col < 0) | (col >= s))[0]
        if bad.size:
            r = int(bad[0])
            raise DomainError(
                f"quantitative level {col[r]} at row {r}, column {spec.p + k} "
                f"outside 0..{s - 1}"
            )
        values[:, k] = (2 * col + 1) / (2 * s)
    return Design(spec, np.asarray(qualitative_levels), values)


def design_from_raw(spec: DesignSpec, qualitative_levels, quantitative_values) -> Design:
    """Build a design storing quantitative values verbatim (no lattice requirement)."""
    return Design(spec, np.asarray(qualitative_levels), np.asarray(quantitative_values))


@dataclass(frozen=True)
class ColumnDefect:
    column: int
    message: str


@dataclass(frozen=True)
class UTypeReport:
    """Outcome of the column-balance check: defects are reported, never raised."""

    passed: bool
    defects: tuple[ColumnDefect, ...]

    def __bool__(self) -> bool:
        return self.passed


def validate_utype(design: Design) -> UTypeReport:
    """Check that every column takes each of its levels exactly n/s times.

    Quantitative columns must be lattice-valued to be checkable; a
    non-lattice column is reported as a defect.
    """
    spec = design.spec
    defects: list[ColumnDefect] = []
    for k, s in enumerate(spec.levels):
        if spec.n % s != 0:
            defects.append(
                ColumnDefect(k, f"level count {s} does not divide run count {spec.n}")
            )
            continue
        if k < spec.p:
            col = design.qualitative[:, k]
        else:
            j = k - spec.p
            try:
                col = np.array(
                    [unit_to_level(float(v), s) for v in design.quantitative[:, j]]
                )
            except DomainError:
                defects.append(ColumnDefect(k, "non-lattice quantitative column"))
                continue
        counts = np.bincount(col, minlength=s)
        want = spec.n // s
        off = np.nonzero(counts != want)[0]
        if off.size:
            lev = int(off[0])
            defects.append(
                ColumnDefect(
                    k,
                    f"level {lev} occurs {int(counts[lev])} times, expected {want}",
                )
            )
    return UTypeReport(passed=not defects, defects=tuple(defects))


@dataclass(frozen=True)
class McdDefect:
    factor: int | None
    level: int | None
    column: int | None
    message: str


@dataclass(frozen=True)
class McdReport:
    passed: bool
    defects: tuple[McdDefect, ...]

    def __bool__(self) -> bool:
        return self.passed


def is_mcd(design: Design) -> McdReport:
    """Check the marginally coupled structure.

    Requires a spec with p >= 1 qualitative factors whose level counts
    divide n and q >= 1 quantitative factors declared with n levels each
    (structure errors otherwise).  Passes iff the quantitative part is a
    Latin hypercube and, for every level of every qualitative factor, the
    rows at that level fill the n/s coarse cells (s consecutive levels
    each) exactly once per quantitative column.
    """
    spec = design.spec
    if spec.p < 1 or spec.q < 1:
        raise StructureError("marginal coupling needs at least one factor of each type")
    for k, s in enumerate(spec.qualitative_levels):
        if spec.n % s != 0:
            raise StructureError(
                f"qualitative factor {k}: level count {s} does not divide n={spec.n}"
            )
    for j, s in enumerate(spec.quantitative_levels):
        if s != spec.n:
            raise StructureError(
                f"quantitative factor {spec.p + j}: needs n={spec.n} levels, declared {s}"
            )
    try:
        quant = design.quantitative_as_levels()
    except DomainError as exc:
        raise StructureError(f"quantitative columns must be lattice-valued: {exc}") from None

    defects: list[McdDefect] = []
    for j in range(spec.q):
        counts = np.bincount(quant[:, j], minlength=spec.n)
        if np.any(counts != 1):
            lev = int(np.nonzero(counts != 1)[0][0])
            defects.append(
                McdDefect(
                    None,
                    None,
                    spec.p + j,
                    f"not a Latin hypercube column: level {lev} occurs {int(counts[lev])} times",
                )
            )
    for k, s in enumerate(spec.qualitative_levels):
        col = design.qualitative[:, k]
        counts = np.bincount(col, minlength=s)
        if np.any(counts != spec.n // s):
            lev = int(np.nonzero(counts != spec.n // s)[0][0])
            defects.append(
                McdDefect(k, int(lev), None, "qualitative column is not balanced")
            )
            continue
        for lev in range(s):
            rows = col == lev
            for j in range(spec.q):
                bins = quant[rows, j] // s  # n/s cells of s consecutive levels
                if not np.array_equal(np.sort(bins), np.arange(spec.n // s)):
                    defects.append(
                        McdDefect(
                            k,
                            lev,
                            spec.p + j,
                            "slice does not form a smaller Latin hypercube",
                        )
                    )
    return McdReport(passed=not defects, defects=tuple(defects))


@dataclass(frozen=True)
class FrequencyVector:
    """Counts of level combinations, ordered lexicographically (first factor slowest)."""

    counts: np.ndarray
    total: int

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


def frequency_vector(design: Design) -> FrequencyVector:
    """Count how often each level combination occurs; entries sum to n."""
    spec = design.spec
    levels = design.all_levels()
    flat = np.ravel_multi_index(tuple(levels.T), dims=spec.levels)
    counts = np.bincount(flat, minlength=spec.N)
    return FrequencyVector(counts=counts.astype(np.int64), total=spec.n)


def full_factorial(spec: DesignSpec, repetitions: int = 1) -> Design:
    """Every level combination exactly ``repetitions`` times; n of the result is repetitions * N.

    The run count of ``spec`` is ignored; only its factor structure is used.
    """
    if repetitions < 1:
        raise DomainError(f"repetitions must be >= 1, got {repetitions}")
    rows = spec.N * repetitions
    if rows > FULL_FACTORIAL_ROW_CAP:
        raise CapacityError(
            f"full factorial would need {rows} rows (cap {FULL_FACTORIAL_ROW_CAP})"
        )
    grid = np.indices(spec.levels).reshape(spec.m, spec.N).T  # first factor slowest
    grid = np.tile(grid, (repetitions, 1))
    out_spec = dataclasses.replace(spec, n=rows)
    return design_from_levels(out_spec, grid[:, : spec.p], grid[:, spec.p :])
