import json

import pytest

from qqdesign import (
    DesignSpec,
    DomainError,
    ParseError,
    design_from_json_dict,
    design_from_levels,
    design_to_json_dict,
    dumps_design_text,
    loads_design_text,
    read_design,
    write_design,
)
from qqdesign.reference import load_reference_design

SIMPLE = """\
# a comment line
4 1 1
2 2

0 0
0 1
1 0
1 1
"""


def test_text_parsing_skips_comments_and_blanks():
    design = loads_design_text(SIMPLE)
    assert design.spec == DesignSpec(n=4, p=1, q=1, levels=(2, 2))
    assert design.quantitative[1, 0] == 0.75


def test_integer_tokens_are_levels_and_decimals_are_raw():
    design = loads_design_text("2 0 1\n4\n3\n0.5\n")
    assert design.quantitative[0, 0] == 0.875  # level 3 of 4
    assert design.quantitative[1, 0] == 0.5  # verbatim


def test_text_round_trip_lattice(tmp_path):
    design = load_reference_design("mcd_16run_2")
    path = tmp_path / "d.txt"
    write_design(design, path)
    assert read_design(path) == design
    # lattice columns are written back as integer levels
    rows = [l for l in path.read_text().splitlines() if l and not l.startswith("#")][2:]
    assert rows and all("." not in line for line in rows)


def test_text_round_trip_raw(tmp_path):
    design = load_reference_design("ccd_full_3")
    path = tmp_path / "d.txt"
    write_design(design, path)
    assert read_design(path) == design


def test_json_round_trip(tmp_path):
    for name in ("mcd_8run_1", "ccd_full_1"):
        design = load_reference_design(name)
        path = tmp_path / f"{name}.json"
        write_design(design, path)
        assert read_design(path) == design


def test_json_dict_mirror_fields():
    design = load_reference_design("bound_attaining_4run")
    data = design_to_json_dict(design)
    assert set(data) == {"n", "p", "q", "levels", "rows"}
    assert data["rows"][0] == [0, 0, 1]
    assert design_from_json_dict(json.loads(json.dumps(data))) == design


def test_parse_error_row_count():
    with pytest.raises(ParseError, match="expected 4 data rows"):
        loads_design_text("4 1 0\n2\n0\n0\n1\n")


def test_parse_error_bad_token_location():
    with pytest.raises(ParseError, match="row 1, column 0"):
        loads_design_text("2 1 0\n2\n0\nx\n")


def test_domain_error_level_out_of_range_location():
    with pytest.raises(DomainError, match="row 1, column 1"):
        loads_design_text("2 1 1\n2 2\n0 0\n1 5\n")


def test_parse_error_bad_header():
    with pytest.raises(ParseError, match="line 1"):
        loads_design_text("4 1\n2\n")


def test_dumps_text_reparses_identically():
    design = load_reference_design("juxtaposed_16run_2")
    assert loads_design_text(dumps_design_text(design)) == design
