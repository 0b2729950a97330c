"""Spreadsheet export of classification sweeps."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

import openpyxl

from ktinhofer.hierarchy import ClassificationReport

logger = logging.getLogger("ktinhofer.report")

SHEET = "classification"
HEADER = ("name", "n", "m", "discrete", "refinable", "threshold", "deficiency", "tinhofer")


def write_classification_workbook(
    rows: Iterable[tuple[str, ClassificationReport]],
    path: str | Path,
) -> int:
    """Write one row per ``(name, report)``; returns the number of rows."""
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = SHEET
    ws.append(HEADER)
    count = 0
    for name, report in rows:
        ws.append((
            name,
            report.n,
            report.m,
            report.is_discrete,
            report.is_refinable,
            report.threshold,
            report.deficiency,
            report.is_tinhofer,
        ))
        count += 1
    wb.save(path)
    logger.info("wrote %d classification rows to %s", count, path)
    return count


def read_classification_workbook(path: str | Path) -> list[dict]:
    wb = openpyxl.load_workbook(path, read_only=True)
    if SHEET not in wb.sheetnames:
        wb.close()
        raise ValueError(f"workbook has no '{SHEET}' sheet")
    rows = list(wb[SHEET].iter_rows(values_only=True))
    wb.close()
    if not rows or tuple(rows[0][: len(HEADER)]) != HEADER:
        raise ValueError("workbook header does not match the classification layout")

    out = []
    for row in rows[1:]:
        # Skip completely empty rows
        if not any(cell is not None for cell in row):
            continue
        out.append(dict(zip(HEADER, row)))
    return out
