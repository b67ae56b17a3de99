"""Machine-readable output datasets with provenance.

A Dataset is a rectangular table of reals (absent entries allowed) plus a
schema id and a flat provenance map (parameters, truncation, tolerances,
tool version).  Values are canonicalized to 12 significant digits at
construction so that a written file re-parses to bit-identical values in
either format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

Cell = float | None


def _canonical(value: float) -> float:
    return float(f"{float(value):.12g}")


def format_cell(v: Cell) -> str:
    return "" if v is None else f"{v:.12g}"


def _parse_cell(s: str) -> Cell:
    return None if s == "" else float(s)


@dataclass(frozen=True)
class Dataset:
    schema: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("provenance must not be empty")
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row width must match column count")


def make_dataset(
    schema: str,
    columns: list[str] | tuple[str, ...],
    rows,
    provenance: dict[str, str],
) -> Dataset:
    """Build a Dataset, canonicalizing every numeric cell to 12 significant digits."""
    canon_rows = tuple(
        tuple(None if v is None else _canonical(v) for v in row) for row in rows
    )
    return Dataset(
        schema=schema,
        columns=tuple(columns),
        rows=canon_rows,
        provenance=dict(provenance),
    )


def render_csv(ds: Dataset) -> str:
    """CSV with '#'-prefixed schema/provenance header lines, 12 significant digits."""
    lines = [f"# schema: {ds.schema}"]
    lines.append("# provenance: " + json.dumps(ds.provenance, sort_keys=True))
    lines.append(",".join(ds.columns))
    for row in ds.rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(ds))


def parse_csv(text: str) -> Dataset:
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    schema = None
    provenance: dict[str, str] = {}
    body: list[str] = []
    for ln in lines:
        if ln.startswith("# schema: "):
            schema = ln[len("# schema: "):]
        elif ln.startswith("# provenance: "):
            provenance = json.loads(ln[len("# provenance: "):])
        elif ln:
            body.append(ln)
    if schema is None or not provenance or not body:
        raise ValueError("not a dataset CSV (missing header metadata)")
    columns = tuple(body[0].split(","))
    rows = tuple(tuple(_parse_cell(c) for c in ln.split(",")) for ln in body[1:])
    return Dataset(schema=schema, columns=columns, rows=rows, provenance=provenance)


def read_csv(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_csv(fh.read())


def render_json(ds: Dataset) -> str:
    doc = {
        "schema": ds.schema,
        "provenance": ds.provenance,
        "columns": list(ds.columns),
        "rows": [list(r) for r in ds.rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def write_json(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_json(ds))


def parse_json(text: str) -> Dataset:
    doc = json.loads(text)
    return Dataset(
        schema=doc["schema"],
        columns=tuple(doc["columns"]),
        rows=tuple(tuple(c for c in r) for r in doc["rows"]),
        provenance=doc["provenance"],
    )


def read_json(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_json(fh.read())


def render(ds: Dataset, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(ds)
    if fmt == "json":
        return render_json(ds)
    raise ValueError(f"unknown format {fmt!r}")


def write_dataset(ds: Dataset, path, fmt: str) -> None:
    if fmt == "csv":
        write_csv(ds, path)
    elif fmt == "json":
        write_json(ds, path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_dataset(path, fmt: str | None = None) -> Dataset:
    name = str(path)
    if fmt is None:
        fmt = "json" if name.endswith(".json") else "csv"
    return read_json(path) if fmt == "json" else read_csv(path)
