import math

import numpy as np
import pytest

from qqdesign import (
    CapacityError,
    Design,
    DesignSpec,
    DomainError,
    StructureError,
    design_from_levels,
    design_from_raw,
    frequency_vector,
    full_factorial,
    is_mcd,
    level_to_unit,
    random_utype,
    unit_to_level,
    validate_utype,
)
from qqdesign.reference import load_reference_design


# ---------------------------------------------------------------- DesignSpec

def test_spec_derived_fields():
    spec = DesignSpec(n=8, p=1, q=2, levels=(2, 8, 8))
    assert spec.m == 3
    assert spec.N == 128
    assert spec.qualitative_levels == (2,)
    assert spec.quantitative_levels == (8, 8)
    assert spec.t == 1  # both quantitative factors even
    assert DesignSpec(n=9, p=1, q=2, levels=(3, 3, 9)).t == 3


def test_spec_product_is_exact_for_huge_level_counts():
    levels = (10**6,) * 5
    spec = DesignSpec(n=10**6, p=0, q=5, levels=levels)
    assert spec.N == 10**30  # no wrap-around


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=0, p=1, q=0, levels=(2,)),
        dict(n=4, p=0, q=0, levels=()),
        dict(n=4, p=1, q=1, levels=(2,)),
        dict(n=4, p=1, q=1, levels=(2, 0)),
        dict(n=4, p=-1, q=2, levels=(2,)),
    ],
)
def test_spec_rejects_bad_parameters(kwargs):
    with pytest.raises(DomainError):
        DesignSpec(**kwargs)


# ------------------------------------------------------------- level_to_unit

def test_level_to_unit_two_level_values():
    assert level_to_unit(0, 2) == 0.25
    assert level_to_unit(1, 2) == 0.75


def test_level_to_unit_reflection_symmetry():
    for s in range(1, 10):
        for x in range(s):
            assert level_to_unit(s - 1 - x, s) == pytest.approx(
                1 - level_to_unit(x, s), abs=1e-15
            )


def test_level_to_unit_strictly_increasing_and_invertible():
    for s in (1, 2, 3, 5, 8, 12):
        values = [level_to_unit(x, s) for x in range(s)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert [unit_to_level(v, s) for v in values] == list(range(s))


def test_level_to_unit_out_of_range():
    with pytest.raises(DomainError):
        level_to_unit(2, 2)
    with pytest.raises(DomainError):
        level_to_unit(-1, 4)
    with pytest.raises(DomainError):
        unit_to_level(0.3, 2)


# --------------------------------------------------------------- constructors

def test_design_from_levels_two_level_lattice():
    design = load_reference_design("bound_attaining_4run")
    assert set(np.unique(design.quantitative)) == {0.25, 0.75}


def test_design_from_levels_empty_quantitative_part():
    spec = DesignSpec(n=4, p=1, q=0, levels=(2,))
    design = design_from_levels(spec, [[0], [0], [1], [1]], np.zeros((4, 0)))
    assert design.quantitative.shape == (4, 0)


def test_design_from_levels_full_factorial_rows_distinct():
    design = full_factorial(DesignSpec(n=4, p=1, q=1, levels=(2, 2)))
    rows = {(int(design.qualitative[r, 0]), float(design.quantitative[r, 0])) for r in range(4)}
    assert len(rows) == 4


def test_design_from_levels_reports_location():
    spec = DesignSpec(n=2, p=1, q=1, levels=(2, 4))
    with pytest.raises(DomainError, match=r"row 1, column 1"):
        design_from_levels(spec, [[0], [1]], [[0], [4]])
    with pytest.raises(DomainError, match=r"row 0, column 0"):
        design_from_levels(spec, [[2], [1]], [[0], [1]])


def test_design_from_raw_axial_transform():
    r2 = math.sqrt(2)
    transform = lambda x: (x + r2) / (2 * r2)
    spec = DesignSpec(n=3, p=0, q=1, levels=(5,))
    design = design_from_raw(spec, np.zeros((3, 0)), [[transform(r2)], [transform(0)], [transform(-1)]])
    assert design.quantitative[0, 0] == 1.0
    assert design.quantitative[1, 0] == 0.5
    assert design.quantitative[2, 0] == pytest.approx((r2 - 1) / (2 * r2), abs=1e-15)


def test_design_from_raw_rejects_out_of_interval():
    spec = DesignSpec(n=1, p=0, q=1, levels=(2,))
    with pytest.raises(DomainError, match="row 0"):
        design_from_raw(spec, np.zeros((1, 0)), [[1.2]])


def test_design_arrays_are_immutable():
    design = load_reference_design("mcd_8run_1")
    with pytest.raises(ValueError):
        design.qualitative[0, 0] = 1
    with pytest.raises(ValueError):
        design.quantitative[0, 0] = 0.5


# -------------------------------------------------------------- validate_utype

def test_validate_utype_passes_on_reference_mcd():
    assert validate_utype(load_reference_design("mcd_8run_1")).passed


def test_validate_utype_indivisible_level_count():
    spec = DesignSpec(n=3, p=1, q=0, levels=(2,))
    design = design_from_levels(spec, [[0], [0], [1]], np.zeros((3, 0)))
    report = validate_utype(design)
    assert not report.passed
    assert "does not divide" in report.defects[0].message


def test_validate_utype_unbalanced_column():
    spec = DesignSpec(n=4, p=1, q=0, levels=(2,))
    design = design_from_levels(spec, [[0], [0], [0], [1]], np.zeros((4, 0)))
    report = validate_utype(design)
    assert not report.passed
    assert report.defects[0].column == 0


def test_validate_utype_ccd_is_not_utype():
    report = validate_utype(load_reference_design("ccd_full_1"))
    assert not report.passed
    assert any("non-lattice" in d.message for d in report.defects)


def test_validate_utype_on_every_full_factorial():
    for levels in [(2, 2), (3, 2), (4, 2, 2), (2, 3, 4)]:
        spec = DesignSpec(n=1, p=1, q=len(levels) - 1, levels=levels)
        assert validate_utype(full_factorial(spec, 2)).passed


# ------------------------------------------------------------------- is_mcd

@pytest.mark.parametrize(
    "name", ["mcd_8run_1", "mcd_8run_2", "mcd_16run_1", "mcd_16run_2", "mcd_16run_3"]
)
def test_is_mcd_reference_designs(name):
    assert is_mcd(load_reference_design(name)).passed


def test_is_mcd_duplicate_levels_is_not_lhd():
    spec = DesignSpec(n=4, p=1, q=1, levels=(2, 4))
    design = design_from_levels(spec, [[0], [0], [1], [1]], [[0], [0], [2], [3]])
    report = is_mcd(design)
    assert not report.passed
    assert "Latin hypercube" in report.defects[0].message


def test_is_mcd_broken_slice():
    # LHD columns, but level-0 rows land in the same coarse cell
    spec = DesignSpec(n=4, p=1, q=1, levels=(2, 4))
    design = design_from_levels(spec, [[0], [0], [1], [1]], [[0], [1], [2], [3]])
    report = is_mcd(design)
    assert not report.passed
    assert report.defects[0].factor == 0


def test_is_mcd_structure_errors():
    spec = DesignSpec(n=4, p=1, q=0, levels=(2,))
    design = design_from_levels(spec, [[0], [0], [1], [1]], np.zeros((4, 0)))
    with pytest.raises(StructureError):
        is_mcd(design)
    spec = DesignSpec(n=4, p=1, q=1, levels=(2, 2))  # quantitative levels != n
    design = design_from_levels(spec, [[0], [0], [1], [1]], [[0], [1], [0], [1]])
    with pytest.raises(StructureError, match="needs n=4 levels"):
        is_mcd(design)
    spec = DesignSpec(n=4, p=1, q=1, levels=(3, 4))
    design = design_from_raw(spec, [[0], [1], [2], [2]], [[0.125], [0.375], [0.625], [0.875]])
    with pytest.raises(StructureError, match="does not divide"):
        is_mcd(design)


# ------------------------------------------------------------ frequency_vector

def test_frequency_vector_full_factorial_is_all_ones():
    spec = DesignSpec(n=1, p=1, q=1, levels=(2, 2))
    fv = frequency_vector(full_factorial(spec))
    assert np.array_equal(fv.counts, np.ones(4, dtype=int))
    assert fv.total == 4


def test_frequency_vector_repetition_is_constant():
    for levels, p, c in [((2, 2), 1, 2), ((2, 3), 1, 3), ((2, 2, 4), 2, 2)]:
        spec = DesignSpec(n=1, p=p, q=len(levels) - p, levels=levels)
        fv = frequency_vector(full_factorial(spec, c))
        assert np.array_equal(fv.counts, np.full(spec.N, c))


def test_frequency_vector_four_run_design_counts():
    fv = frequency_vector(load_reference_design("bound_attaining_4run"))
    assert fv.counts.sum() == 4
    assert np.count_nonzero(fv.counts == 1) == 4
    assert np.count_nonzero(fv.counts == 0) == 12


def test_frequency_vector_row_permutation_invariant():
    design = load_reference_design("mcd_8run_2")
    rng = np.random.default_rng(11)
    perm = rng.permutation(design.spec.n)
    shuffled = Design(
        design.spec, design.qualitative[perm], design.quantitative[perm]
    )
    assert np.array_equal(
        frequency_vector(design).counts, frequency_vector(shuffled).counts
    )


def test_frequency_vector_rejects_non_lattice():
    with pytest.raises(DomainError, match="lattice"):
        frequency_vector(load_reference_design("ccd_full_1"))


def test_frequency_vector_lexicographic_order_first_factor_slowest():
    spec = DesignSpec(n=2, p=1, q=1, levels=(2, 3))
    design = design_from_levels(spec, [[1], [1]], [[0], [2]])
    counts = frequency_vector(design).counts
    # index = qualitative * 3 + quantitative
    assert counts[3] == 1 and counts[5] == 1 and counts.sum() == 2


# ------------------------------------------------------------- full_factorial

def test_full_factorial_row_counts():
    spec = DesignSpec(n=1, p=1, q=1, levels=(2, 2))
    assert full_factorial(spec, 1).spec.n == 4
    assert full_factorial(spec, 2).spec.n == 8
    spec = DesignSpec(n=1, p=2, q=2, levels=(2, 2, 4, 4))
    assert full_factorial(spec, 1).spec.n == 64


def test_full_factorial_capacity_error():
    spec = DesignSpec(n=1, p=0, q=4, levels=(100, 100, 100, 100))
    with pytest.raises(CapacityError):
        full_factorial(spec)


def test_random_utype_always_passes_validate_utype():
    spec = DesignSpec(n=8, p=1, q=2, levels=(2, 8, 8))
    for seed in range(5):
        assert validate_utype(random_utype(spec, seed)).passed
