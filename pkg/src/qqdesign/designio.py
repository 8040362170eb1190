"""Reading and writing design files.

Text format: '#' lines are comments; the first data line is ``n p q``,
the second the p+q level counts, then n rows of p+q tokens.  In the
quantitative block an integer token is a lattice level and a decimal
token is a raw unit-interval value, so ``3`` means level 3 while ``0.5``
means the value one half.  A JSON mirror carries the same content under
the keys n, p, q, levels, rows.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .model import Design, DesignSpec, level_to_unit, unit_to_level


def _parse_int(token: str, where: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{where}: expected an integer, got {token!r}") from None


def loads_design_text(text: str) -> Design:
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(lines) < 2:
        raise ParseError("design file needs a header of two lines: 'n p q' and level counts")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError(f"line 1: expected 'n p q', got {lines[0]!r}")
    n, p, q = (_parse_int(tok, "line 1") for tok in head)
    levels = tuple(_parse_int(tok, "line 2") for tok in lines[1].split())
    spec = DesignSpec(n=n, p=p, q=q, levels=levels)
    rows = lines[2:]
    if len(rows) != n:
        raise ParseError(f"expected {n} data rows, found {len(rows)}")
    qual = np.zeros((n, p), dtype=np.int64)
    quant = np.zeros((n, q), dtype=np.float64)
    for r, line in enumerate(rows):
        tokens = line.split()
        if len(tokens) != p + q:
            raise ParseError(f"row {r}: expected {p + q} entries, found {len(tokens)}")
        for k in range(p):
            qual[r, k] = _parse_int(tokens[k], f"row {r}, column {k}")
        for j in range(q):
            tok = tokens[p + j]
            quant[r, j] = _entry_value(tok, spec.quantitative_levels[j], r, p + j)
    return Design(spec, qual, quant)


def _entry_value(token: str, s: int, row: int, column: int) -> float:
    where = f"row {row}, column {column}"
    if _is_int_token(token):
        level = int(token)
        if not 0 <= level < s:
            raise DomainError(f"{where}: level {level} outside 0..{s - 1}")
        return level_to_unit(level, s)
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{where}: not a number: {token!r}") from None
    return value


def _is_int_token(token: str) -> bool:
    body = token[1:] if token[:1] in "+-" else token
    return body.isdigit()


def design_from_json_dict(data: dict) -> Design:
    for key in ("n", "p", "q", "levels", "rows"):
        if key not in data:
            raise ParseError(f"design JSON is missing the {key!r} field")
    spec = DesignSpec(
        n=int(data["n"]), p=int(data["p"]), q=int(data["q"]),
        levels=tuple(int(s) for s in data["levels"]),
    )
    rows = data["rows"]
    if len(rows) != spec.n:
        raise ParseError(f"expected {spec.n} rows, found {len(rows)}")
    qual = np.zeros((spec.n, spec.p), dtype=np.int64)
    quant = np.zeros((spec.n, spec.q), dtype=np.float64)
    for r, row in enumerate(rows):
        if len(row) != spec.m:
            raise ParseError(f"row {r}: expected {spec.m} entries, found {len(row)}")
        for k in range(spec.p):
            if not isinstance(row[k], int):
                raise ParseError(f"row {r}, column {k}: qualitative entries must be integers")
            qual[r, k] = row[k]
        for j in range(spec.q):
            entry = row[spec.p + j]
            s = spec.quantitative_levels[j]
            if isinstance(entry, bool):
                raise ParseError(f"row {r}, column {spec.p + j}: not a number")
            if isinstance(entry, int):
                if not 0 <= entry < s:
                    raise DomainError(
                        f"row {r}, column {spec.p + j}: level {entry} outside 0..{s - 1}"
                    )
                quant[r, j] = level_to_unit(entry, s)
            else:
                quant[r, j] = float(entry)
    return Design(spec, qual, quant)


def read_design(path) -> Design:
    """Parse a design file; JSON when the content starts with '{'."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON design file: {exc}") from None
        return design_from_json_dict(data)
    return loads_design_text(text)


def _quant_tokens(design: Design) -> list[list[str]]:
    """Integer level tokens where a column is lattice-valued, decimals otherwise."""
    spec = design.spec
    cols: list[list[str]] = []
    for j, s in enumerate(spec.quantitative_levels):
        values = design.quantitative[:, j]
        try:
            tokens = [str(unit_to_level(float(v), s)) for v in values]
        except DomainError:
            tokens = [repr(float(v)) for v in values]
        cols.append(tokens)
    return cols


def dumps_design_text(design: Design, comment: str | None = None) -> str:
    spec = design.spec
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(f"{spec.n} {spec.p} {spec.q}")
    lines.append(" ".join(str(s) for s in spec.levels))
    quant_cols = _quant_tokens(design)
    for r in range(spec.n):
        parts = [str(int(v)) for v in design.qualitative[r]]
        parts.extend(quant_cols[j][r] for j in range(spec.q))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def design_to_json_dict(design: Design) -> dict:
    spec = design.spec
    quant_cols = _quant_tokens(design)
    rows = []
    for r in range(spec.n):
        row: list = [int(v) for v in design.qualitative[r]]
        for j in range(spec.q):
            tok = quant_cols[j][r]
            row.append(int(tok) if _is_int_token(tok) else float(tok))
        rows.append(row)
    return {
        "n": spec.n,
        "p": spec.p,
        "q": spec.q,
        "levels": list(spec.levels),
        "rows": rows,
    }


def write_design(design: Design, path, comment: str | None = None) -> None:
    """Write the text format, or the JSON mirror for a '.json' path."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(design_to_json_dict(design), indent=1) + "\n")
    else:
        path.write_text(dumps_design_text(design, comment))
