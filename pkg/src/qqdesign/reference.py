"""Bundled reference designs and the values they must reproduce.

The data files under ``data/`` hold a small benchmark suite of designs
with documented 4-decimal criterion values: two 8-run and three 16-run
marginally coupled designs, the 16-run column-juxtaposition trio with its
naive-criterion comparison, two bound-attaining designs, and a central
composite design under four qualitative assignments.  ``run_checks``
recomputes every value and reports per-row pass/fail; it is hermetic (no
randomness, no network).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.resources import files

from .bounds import lb1, lb2
from .designio import loads_design_text
from .discrepancy import SWD_MODES, qqd_squared, swd
from .model import Design, DesignSpec
from .model import is_mcd as _is_mcd

#: default absolute tolerance against 4-decimal reference values
VALUE_TOL = 5e-5
#: looser tolerance for the one value reported with only 4 significant decimals
LARGE_VALUE_TOL = 5e-4

DESIGN_NAMES = (
    "mcd_8run_1",
    "mcd_8run_2",
    "mcd_16run_1",
    "mcd_16run_2",
    "mcd_16run_3",
    "juxtaposed_16run_1",
    "juxtaposed_16run_2",
    "juxtaposed_16run_same",
    "bound_attaining_4run",
    "bound_attaining_8run",
    "ccd_factorial_1",
    "ccd_factorial_2",
    "ccd_factorial_3",
    "ccd_factorial_4",
    "ccd_full_1",
    "ccd_full_2",
    "ccd_full_3",
    "ccd_full_4",
)

QQD_EXPECTED = {
    "mcd_8run_1": 0.0213,
    "mcd_8run_2": 0.0164,
    "mcd_16run_1": 0.0066,
    "mcd_16run_2": 0.0063,
    "mcd_16run_3": 0.0060,
    "juxtaposed_16run_1": 0.0822,
    "juxtaposed_16run_2": 0.0545,
    "juxtaposed_16run_same": 0.0813,
    "bound_attaining_4run": 0.1706,
    "bound_attaining_8run": 17.0235,
    "ccd_factorial_1": 0.2255,
    "ccd_factorial_2": 0.2255,
    "ccd_factorial_3": 0.1766,
    "ccd_factorial_4": 0.1571,
    "ccd_full_1": 0.0763,
    "ccd_full_2": 0.0795,
    "ccd_full_3": 0.0792,
    "ccd_full_4": 0.0653,
}

MCD_NAMES = ("mcd_8run_1", "mcd_8run_2", "mcd_16run_1", "mcd_16run_2", "mcd_16run_3")

SWD_EXPECTED = {
    "juxtaposed_16run_2": 1.1055,
    "juxtaposed_16run_same": 1.0999,
}

LB2_CASE = {"n": 4, "p": 1, "q": 2, "s": 4, "expected": 0.1706}
LB1_CASE = {
    "spec": dict(n=8, p=7, q=7, levels=(2,) * 7 + (4,) * 7),
    "expected": 17.0235,
}


def load_reference_design(name: str) -> Design:
    if name not in DESIGN_NAMES:
        raise KeyError(f"unknown reference design {name!r}")
    resource = files("qqdesign").joinpath("data", f"{name}.txt")
    return loads_design_text(resource.read_text())


@dataclass(frozen=True)
class CheckRow:
    label: str
    expected: float
    computed: float
    tol: float
    passed: bool
    note: str = ""

    @property
    def error(self) -> float:
        return abs(self.computed - self.expected)


def _value_row(label: str, expected: float, computed: float, tol: float, note: str = "") -> CheckRow:
    return CheckRow(
        label=label,
        expected=expected,
        computed=computed,
        tol=tol,
        passed=abs(computed - expected) <= tol,
        note=note,
    )


def matching_swd_mode(tol: float = VALUE_TOL) -> str | None:
    """The unique slice-summation mode reproducing both reference SWD values."""
    matches = []
    for mode in SWD_MODES:
        ok = all(
            abs(swd(load_reference_design(name), mode) - want) <= tol
            for name, want in SWD_EXPECTED.items()
        )
        if ok:
            matches.append(mode)
    return matches[0] if len(matches) == 1 else None


def run_checks(tol: float | None = None) -> list[CheckRow]:
    """Recompute every reference value; one row per check."""
    value_tol = VALUE_TOL if tol is None else tol
    large_tol = LARGE_VALUE_TOL if tol is None else tol
    rows: list[CheckRow] = []

    for name, expected in QQD_EXPECTED.items():
        design = load_reference_design(name)
        computed = qqd_squared(design)
        row_tol = large_tol if expected > 1 else value_tol
        rows.append(_value_row(f"qqd^2 {name}", expected, computed, row_tol))

    for name in MCD_NAMES:
        report = _is_mcd(load_reference_design(name))
        rows.append(
            CheckRow(
                label=f"is_mcd {name}",
                expected=1.0,
                computed=1.0 if report.passed else 0.0,
                tol=0.0,
                passed=report.passed,
                note="" if report.passed else report.defects[0].message,
            )
        )

    mode = matching_swd_mode(value_tol)
    for name, expected in SWD_EXPECTED.items():
        if mode is None:
            computed = swd(load_reference_design(name), "wd")
            rows.append(
                CheckRow(
                    label=f"swd {name}",
                    expected=expected,
                    computed=computed,
                    tol=value_tol,
                    passed=False,
                    note="no slice-summation mode matches both reference values",
                )
            )
        else:
            computed = swd(load_reference_design(name), mode)
            rows.append(
                _value_row(
                    f"swd {name}", expected, computed, value_tol, note=f"mode={mode}"
                )
            )

    juxta_qqd = qqd_squared(load_reference_design("juxtaposed_16run_same")) - qqd_squared(
        load_reference_design("juxtaposed_16run_2")
    )
    rows.append(
        CheckRow(
            label="ordering qqd^2: duplicated-column variant is worse",
            expected=1.0,
            computed=1.0 if juxta_qqd > 0 else 0.0,
            tol=0.0,
            passed=juxta_qqd > 0,
            note=f"difference {juxta_qqd:+.6f}",
        )
    )
    if mode is not None:
        juxta_swd = swd(load_reference_design("juxtaposed_16run_same"), mode) - swd(
            load_reference_design("juxtaposed_16run_2"), mode
        )
        rows.append(
            CheckRow(
                label="ordering swd: naive criterion prefers the worse design",
                expected=1.0,
                computed=1.0 if juxta_swd < 0 else 0.0,
                tol=0.0,
                passed=juxta_swd < 0,
                note=f"difference {juxta_swd:+.6f}",
            )
        )

    rows.append(
        _value_row(
            "lb2(n=4, p=1, q=2, s=4)",
            LB2_CASE["expected"],
            lb2(LB2_CASE["n"], LB2_CASE["p"], LB2_CASE["q"], LB2_CASE["s"]),
            value_tol,
        )
    )
    rows.append(
        _value_row(
            "lb1 for U(8, 2^7 4^7)",
            LB1_CASE["expected"],
            lb1(DesignSpec(**LB1_CASE["spec"])),
            large_tol,
        )
    )
    return rows
