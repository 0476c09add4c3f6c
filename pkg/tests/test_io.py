import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from golden import YULE_COUNTS
from unimargin.io import TableDocument, TableFormatError, load_fixture, load_table, save_table
from unimargin.tables import COUNTS, PROBABILITIES, Table3


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_bundled_yule(yule_doc):
    assert yule_doc.dims == 2
    assert yule_doc.cells == YULE_COUNTS
    assert yule_doc.kind == COUNTS
    assert yule_doc.axis_labels == ("Vaccination", "Recovery")


def test_fixture_coding_manifest(agresti_doc):
    # level 0 names come first
    assert agresti_doc.level_labels[0] == ("Failure", "Success")
    assert "coding_note" in agresti_doc.meta


def test_csv_three_way(tmp_path):
    rows = ["i,j,k,value"] + [f"{i},{j},{k},{v}" for (i, j, k), v in
                              zip(np.ndindex(2, 2, 2), [1, 12, 2, 3, 4, 1, 6, 1])]
    doc = load_table(write(tmp_path, "t.csv", "\n".join(rows) + "\n"))
    assert doc.dims == 3
    assert doc.cells == (1, 12, 2, 3, 4, 1, 6, 1)
    assert isinstance(doc.to_table(), Table3)


def test_csv_row_order_does_not_matter(tmp_path):
    text = "i,j,value\n1,1,4\n0,0,1\n1,0,3\n0,1,2\n"
    assert load_table(write(tmp_path, "t.csv", text)).cells == (1, 2, 3, 4)


def test_csv_probabilities_detected(tmp_path):
    text = "i,j,value\n0,0,0.25\n0,1,0.25\n1,0,0.25\n1,1,0.25\n"
    assert load_table(write(tmp_path, "t.csv", text)).kind == PROBABILITIES


def test_csv_seven_rows(tmp_path):
    rows = ["i,j,k,value"] + [f"{i},{j},{k},1" for (i, j, k) in list(np.ndindex(2, 2, 2))[:7]]
    with pytest.raises(TableFormatError, match="expected 8 cells, found 7"):
        load_table(write(tmp_path, "t.csv", "\n".join(rows)))


@pytest.mark.parametrize(
    "text, message",
    [
        ("i,j,value\n0,0,1\n0,1,x\n", "line 3: field 'value'"),
        ("i,j,value\n0,0,1\n0,1,-2\n", "line 3: field 'value'"),
        ("i,j,value\n0,0,1\n0,2,1\n", "line 3: indices"),
        ("i,j,value\n0,0,1\n0,0,1\n", "line 3: duplicate"),
        ("a,b,c\n", "line 1: header"),
        ("i,j,value\n0,0\n", "line 2: expected 3 fields"),
    ],
)
def test_csv_errors_name_the_line(tmp_path, text, message):
    with pytest.raises(TableFormatError, match=message):
        load_table(write(tmp_path, "t.csv", text))


@pytest.mark.parametrize(
    "payload, message",
    [
        ({"dims": 3, "cells": [1] * 7}, "expected 8 cells, found 7"),
        ({"dims": 2, "cells": [1, 1, -1, 1]}, r"cells\[2\]: negative"),
        ({"dims": 2, "cells": [1, 1, "a", 1]}, r"cells\[2\]: expected a number"),
        ({"dims": 4, "cells": [1] * 16}, "dims"),
        ({"dims": 2}, "missing field 'cells'"),
        ({"dims": 2, "cells": [1, 1, 1, 1], "axis_labels": ["a"]}, "labels"),
        ({"dims": 2, "cells": [0.5, 0.5, 0.5, 0.5], "kind": "probabilities"}, "not 1"),
    ],
)
def test_json_validation(tmp_path, payload, message):
    with pytest.raises(TableFormatError, match=message):
        load_table(write(tmp_path, "t.json", json.dumps(payload)))


def test_json_syntax_error_location(tmp_path):
    with pytest.raises(TableFormatError, match="line 2 column"):
        load_table(write(tmp_path, "t.json", '{"dims": 2,\n "cells": [1, 2,, 3]}'))


def test_missing_file(tmp_path):
    with pytest.raises(TableFormatError):
        load_table(tmp_path / "nope.json")


def test_zero_cells_load(tmp_path):
    doc = load_table(write(tmp_path, "z.json", json.dumps({"dims": 3, "cells": [0, 1, 2, 3, 4, 5, 6, 7]})))
    assert not doc.to_table().is_positive()


def test_save_load_keeps_meta(tmp_path, agresti_doc):
    save_table(agresti_doc, tmp_path / "a.json")
    again = load_table(tmp_path / "a.json")
    assert again == agresti_doc
    assert again.meta["display_order"] == agresti_doc.meta["display_order"]
    assert not list(tmp_path.glob("*.tmp"))


cell_values = st.floats(min_value=0, max_value=1e12, allow_nan=False, allow_infinity=False)


@given(st.lists(cell_values, min_size=8, max_size=8), st.sampled_from(["json", "csv"]))
def test_round_trip_bit_exact(tmp_path_factory, cells, fmt):
    doc = TableDocument(3, ("A", "B", "C"), (("0", "1"),) * 3, tuple(cells))
    path = tmp_path_factory.mktemp("rt") / f"t.{fmt}"
    save_table(doc, path)
    again = load_table(path)
    assert np.array_equal(np.array(again.cells), np.array(cells))


def test_load_fixture_names():
    for name in ("yule", "agresti", "fienberg"):
        assert load_fixture(name).to_table().is_positive()
