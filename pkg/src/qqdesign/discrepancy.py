"""The qualitative-quantitative discrepancy and its relatives.

The criterion measures non-uniformity of a mixed design through a product
kernel: qualitative factors contribute a^[same level] * b^[different
level] (defaults a=3/2, b=5/4) and quantitative factors contribute the
wrap-around kernel 3/2 - |t - z| + |t - z|^2.  The squared discrepancy of
a design with rows x_1..x_n is

    QQD^2 = C + (1/n^2) * sum_{i,j} b^p (a/b)^{delta_ij} *
            prod_k (3/2 - |x_ik - x_jk| + |x_ik - x_jk|^2)

where delta_ij counts the qualitative columns on which rows i and j
agree, the double sum includes i = j, and
C = -prod_k [(a + (s_k - 1) b)/s_k] * (4/3)^q.

Setting p = 0 recovers the wrap-around discrepancy (WD), q = 0 the
discrete discrepancy (DD).  For lattice designs the same value is a
quadratic form y' A y in the frequency vector y, with A a Kronecker
product of per-factor kernel matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .model import (
    DEFAULT_CONFIG,
    CriterionConfig,
    Design,
    DesignSpec,
    frequency_vector,
)

QUADRATIC_FORM_CAP = 10_000  # largest N for which the quadratic form is evaluated


def coincidence_number(design: Design, i: int, j: int) -> int:
    """Number of qualitative columns on which rows i and j agree."""
    n = design.spec.n
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"row index out of range for n={n}: ({i}, {j})")
    return int(np.sum(design.qualitative[i] == design.qualitative[j]))


def _coincidence_matrix(qualitative: np.ndarray) -> np.ndarray:
    n = qualitative.shape[0]
    delta = np.zeros((n, n), dtype=np.int64)
    for k in range(qualitative.shape[1]):
        col = qualitative[:, k]
        delta += col[:, None] == col[None, :]
    return delta


def _quant_kernel(column: np.ndarray) -> np.ndarray:
    d = np.abs(column[:, None] - column[None, :])
    return 1.5 - d + d * d


def _pair_weights(
    qualitative: np.ndarray, quantitative: np.ndarray, a: float, b: float
) -> np.ndarray:
    """n x n matrix of per-pair kernel products b^p (a/b)^delta prod_k(...)."""
    p = qualitative.shape[1]
    w = (b**p) * (a / b) ** _coincidence_matrix(qualitative)
    for k in range(quantitative.shape[1]):
        w = w * _quant_kernel(quantitative[:, k])
    return w


def _constant_term(s_qual, q: int, a: float, b: float) -> float:
    return -math.prod((a + (s - 1) * b) / s for s in s_qual) * (4.0 / 3.0) ** q


def _qqd_squared_arrays(
    qualitative: np.ndarray,
    quantitative: np.ndarray,
    s_qual,
    config: CriterionConfig,
) -> float:
    n = max(qualitative.shape[0], quantitative.shape[0])
    w = _pair_weights(qualitative, quantitative, config.a, config.b)
    # fsum keeps the pair accumulation exactly rounded, so the closed form
    # and the quadratic form agree to ~1e-13 even at n around 10^3
    total = math.fsum(w.ravel().tolist())
    return _constant_term(s_qual, quantitative.shape[1], config.a, config.b) + total / n**2


def qqd_squared(design: Design, config: CriterionConfig | None = None) -> float:
    """Squared qualitative-quantitative discrepancy via the pairwise closed form."""
    config = config or DEFAULT_CONFIG
    return _qqd_squared_arrays(
        design.qualitative,
        design.quantitative,
        design.spec.qualitative_levels,
        config,
    )


def wd_squared(design: Design) -> float:
    """Squared wrap-around discrepancy of the quantitative columns alone."""
    if design.spec.q == 0:
        raise DomainError("wd_squared needs at least one quantitative factor")
    empty = np.zeros((design.spec.n, 0), dtype=np.int64)
    return _qqd_squared_arrays(empty, design.quantitative, (), DEFAULT_CONFIG)


def dd(design: Design, config: CriterionConfig | None = None) -> float:
    """Discrete discrepancy of the qualitative columns alone (general a, b honored)."""
    if design.spec.p == 0:
        raise DomainError("dd needs at least one qualitative factor")
    config = config or DEFAULT_CONFIG
    empty = np.zeros((design.spec.n, 0), dtype=np.float64)
    return _qqd_squared_arrays(
        design.qualitative, empty, design.spec.qualitative_levels, config
    )


def _rescaled_quantitative(design: Design) -> np.ndarray:
    """Affinely map each quantitative column so its extreme values sit on 0 and 1.

    For a lattice column carrying all its levels this sends level x of an
    s-level factor to x/(s-1); a constant column maps to all zeros (its
    kernel contribution does not depend on the placement).
    """
    out = np.array(design.quantitative, dtype=np.float64)
    for k in range(out.shape[1]):
        lo = out[:, k].min()
        hi = out[:, k].max()
        out[:, k] = 0.0 if hi == lo else (out[:, k] - lo) / (hi - lo)
    return out


SWD_MODES = ("wd", "wd_squared")


def swd(design: Design, mode: str) -> float:
    """Sum of slice WD values: one slice per level of each qualitative factor.

    Each slice is the quantitative sub-design of the rows at one level of
    one qualitative factor, evaluated after the columns of the full design
    are rescaled to span [0, 1] exactly.  ``mode`` selects whether the
    summands are WD values ("wd") or squared ones ("wd_squared").
    """
    if mode not in SWD_MODES:
        raise DomainError(f"swd mode must be one of {SWD_MODES}, got {mode!r}")
    spec = design.spec
    if spec.p == 0 or spec.q == 0:
        raise DomainError("swd needs at least one factor of each type")
    scaled = _rescaled_quantitative(design)
    total = []
    for k, s in enumerate(spec.qualitative_levels):
        col = design.qualitative[:, k]
        for lev in range(s):
            rows = col == lev
            if not rows.any():
                raise DomainError(
                    f"qualitative factor {k} has no rows at level {lev}"
                )
            sub = scaled[rows]
            value = _qqd_squared_arrays(
                np.zeros((sub.shape[0], 0), dtype=np.int64), sub, (), DEFAULT_CONFIG
            )
            total.append(math.sqrt(value) if mode == "wd" else value)
    return math.fsum(total)


@dataclass(frozen=True)
class KernelFactor:
    """Per-factor kernel matrix used by the quadratic form.

    Qualitative: entries a on the diagonal, b off it.  Quantitative with s
    levels: entry (i, j) is 3/2 - |i-j| (s - |i-j|) / s^2, the wrap-around
    kernel evaluated at lattice points.  Rows sum to a + b(s-1) and
    4s/3 + 1/(6s) respectively.
    """

    s: int
    kind: str  # "qualitative" | "quantitative"
    entries: np.ndarray

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


def kernel_matrix(
    k: int, spec: DesignSpec, config: CriterionConfig | None = None
) -> KernelFactor:
    """Kernel matrix of factor ``k`` (0-based, qualitative factors first)."""
    config = config or DEFAULT_CONFIG
    if not 0 <= k < spec.m:
        raise DomainError(f"factor index {k} out of range for {spec.m} factors")
    s = spec.levels[k]
    if k < spec.p:
        entries = np.full((s, s), config.b)
        np.fill_diagonal(entries, config.a)
        return KernelFactor(s=s, kind="qualitative", entries=entries)
    i = np.arange(s)
    d = np.abs(i[:, None] - i[None, :])
    entries = 1.5 - d * (s - d) / s**2
    return KernelFactor(s=s, kind="quantitative", entries=entries)


def qqd_squared_quadratic(
    design: Design,
    config: CriterionConfig | None = None,
    cap: int = QUADRATIC_FORM_CAP,
) -> float:
    """Squared discrepancy as the quadratic form C + (1/n^2) y' A y.

    ``y`` is the frequency vector and A the Kronecker product of the
    per-factor kernel matrices; A is applied factor by factor, never
    materialized.  Requires a lattice-valued design and N <= ``cap``.
    """
    config = config or DEFAULT_CONFIG
    spec = design.spec
    if spec.N > cap:
        raise CapacityError(
            f"N={spec.N} exceeds the quadratic-form cap {cap}; use qqd_squared instead"
        )
    y = frequency_vector(design).counts.astype(np.float64)
    z = y.reshape(spec.levels)
    for k in range(spec.m):
        A = kernel_matrix(k, spec, config).entries
        z = np.moveaxis(np.tensordot(A, z, axes=(1, k)), 0, k)
    value = float(np.dot(y, z.ravel()))
    C = _constant_term(spec.qualitative_levels, spec.q, config.a, config.b)
    return C + value / spec.n**2


class PairCache:
    """Incremental pairwise state for entry-swap moves.

    Holds, for every row pair, the qualitative coincidence count and the
    per-column quantitative kernel factors, plus the resulting pair-weight
    matrix.  A swap of two entries within one column touches only the
    pairs involving those rows, so updates cost O(n) kernel evaluations.
    Single-owner mutable: not for concurrent mutation.
    """

    def __init__(self, design: Design, config: CriterionConfig | None = None):
        self.config = config or DEFAULT_CONFIG
        self.spec = design.spec
        self._qual = np.array(design.qualitative)
        self._quant = np.array(design.quantitative)
        self._delta = _coincidence_matrix(self._qual)
        self._qfac = [
            _quant_kernel(self._quant[:, k]) for k in range(self.spec.q)
        ]
        self._w = _pair_weights(self._qual, self._quant, self.config.a, self.config.b)
        self._C = _constant_term(
            self.spec.qualitative_levels, self.spec.q, self.config.a, self.config.b
        )
        self._design = design

    @property
    def design(self) -> Design:
        """The design the cache currently represents."""
        if self._design is None:
            self._design = Design(self.spec, self._qual.copy(), self._quant.copy())
        return self._design

    def value(self) -> float:
        """Current squared discrepancy, reduced from the cached pair weights."""
        return self._C + float(np.sum(self._w)) / self.spec.n**2

    def _refresh_rows(self, i: int, j: int) -> None:
        a, b = self.config.a, self.config.b
        p = self.spec.p
        for r in (i, j):
            row = (b**p) * (a / b) ** self._delta[r]
            for fac in self._qfac:
                row = row * fac[r]
            self._w[r, :] = row
            self._w[:, r] = row

    def apply_swap(self, column: int, row_i: int, row_j: int) -> float:
        """Swap two entries within one column; returns the new value.

        Swapping back with the same arguments restores the previous state
        (and value) exactly.
        """
        spec = self.spec
        if not 0 <= column < spec.m:
            raise DomainError(f"column index {column} out of range for {spec.m} factors")
        n = spec.n
        if not (0 <= row_i < n and 0 <= row_j < n):
            raise DomainError(f"row index out of range for n={n}: ({row_i}, {row_j})")
        if row_i == row_j:
            return self.value()
        self._design = None
        if column < spec.p:
            col = self._qual[:, column]
            col[row_i], col[row_j] = col[row_j], col[row_i]
            for r in (row_i, row_j):
                fresh = np.sum(self._qual == self._qual[r], axis=1)
                self._delta[r, :] = fresh
                self._delta[:, r] = fresh
        else:
            k = column - spec.p
            col = self._quant[:, k]
            col[row_i], col[row_j] = col[row_j], col[row_i]
            fac = self._qfac[k]
            for r in (row_i, row_j):
                d = np.abs(col - col[r])
                fresh = 1.5 - d + d * d
                fac[r, :] = fresh
                fac[:, r] = fresh
        self._refresh_rows(row_i, row_j)
        return self.value()

    def matches(self, design: Design) -> bool:
        return (
            design.spec == self.spec
            and np.array_equal(design.qualitative, self._qual)
            and np.array_equal(design.quantitative, self._quant)
        )


def qqd_delta_swap(
    cache: PairCache, design: Design, column: int, row_i: int, row_j: int
) -> tuple[float, PairCache]:
    """Swap two entries of one column and return (new QQD^2, updated cache).

    ``design`` must be the design the cache currently represents; the
    returned cache represents the swapped design (``cache.design``).
    Equal row indices are a no-op.
    """
    if not cache.matches(design):
        raise DomainError("cache does not represent the given design")
    value = cache.apply_swap(column, row_i, row_j)
    return value, cache
