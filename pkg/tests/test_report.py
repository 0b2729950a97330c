import openpyxl
import pytest

from ktinhofer.graph import builtin
from ktinhofer.hierarchy import classify
from ktinhofer.report import HEADER, SHEET, read_classification_workbook, write_classification_workbook


def test_workbook_round_trip(tmp_path, c6, frucht):
    path = tmp_path / "sweep.xlsx"
    rows = [("c6", classify(c6)), ("frucht", classify(frucht))]
    assert write_classification_workbook(rows, path) == 2

    wb = openpyxl.load_workbook(path)
    assert wb.sheetnames == [SHEET]
    assert tuple(cell.value for cell in wb[SHEET][1]) == HEADER

    back = read_classification_workbook(path)
    assert [row["name"] for row in back] == ["c6", "frucht"]
    assert back[0]["threshold"] == 6
    assert back[0]["deficiency"] is None
    assert back[0]["tinhofer"] is True
    assert back[1]["deficiency"] == 11
    assert back[1]["refinable"] is False


def test_rejects_foreign_workbook(tmp_path):
    path = tmp_path / "other.xlsx"
    wb = openpyxl.Workbook()
    wb.active.title = "plan"
    wb.save(path)
    with pytest.raises(ValueError, match="no 'classification' sheet"):
        read_classification_workbook(path)


def test_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.xlsx"
    wb = openpyxl.Workbook()
    wb.active.title = SHEET
    wb.active.append(("graph", "size"))
    wb.save(path)
    with pytest.raises(ValueError, match="header"):
        read_classification_workbook(path)


def test_empty_sweep(tmp_path):
    path = tmp_path / "empty.xlsx"
    assert write_classification_workbook([], path) == 0
    assert read_classification_workbook(path) == []


def test_path_graph_row(tmp_path):
    path = tmp_path / "p.xlsx"
    write_classification_workbook([("p4", classify(builtin("path", [4])))], path)
    (row,) = read_classification_workbook(path)
    assert (row["n"], row["m"], row["discrete"]) == (4, 3, False)
