"""Loaders for the committed reference tables.

Tests and the table commands diff freshly computed values against these files
rather than against re-derived constants, so a regression anywhere in the
formula chain surfaces as a table diff.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class Table1Row:
    q: float
    kappa: float
    c_of_q: float
    im_dozz: float


@dataclass(frozen=True)
class Table2Row:
    q: float
    ratio_num: float
    ratio_err: float
    exact: float


def _read_rows(name: str) -> list[dict]:
    path = resources.files("pottsconn").joinpath("data").joinpath(name)
    with path.open("r", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def table1_reference() -> list[Table1Row]:
    return [
        Table1Row(float(r["q"]), float(r["kappa"]), float(r["c_of_q"]), float(r["im_dozz"]))
        for r in _read_rows("table1_reference.csv")
    ]


def table2_reference() -> list[Table2Row]:
    return [
        Table2Row(float(r["q"]), float(r["ratio_num"]), float(r["ratio_err"]), float(r["exact"]))
        for r in _read_rows("table2_reference.csv")
    ]
