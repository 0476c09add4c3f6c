import json
import subprocess
import sys

import numpy as np
import pytest

from golden import AGRESTI_SOLUTION_PRINTED, FIENBERG_EXACT, to_printed
from unimargin.cli import (
    EXIT_CONVERGENCE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_ZERO_CELL,
    cmd_family,
    cmd_inspect,
    cmd_uniformize,
    main,
)
from unimargin.io import TableDocument, load_table, save_table
from unimargin.solvers import SolverConfig


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def zero_doc(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"dims": 3, "cells": [5, 0, 3, 2, 1, 4, 4, 1]}))
    return path


def test_inspect_yule(capsys):
    code, out, _ = run(capsys, "inspect", "yule", "--json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["odds_ratios"]["omega"] == pytest.approx(19.47, abs=0.005)
    assert report["grand_total"] == 4703


def test_inspect_agresti_text(capsys):
    code, out, _ = run(capsys, "inspect", "agresti")
    assert code == EXIT_OK
    assert "w23|0    6.000" in out
    assert "w13|0    0.167" in out
    assert "w12|0    1.000" in out
    assert "omega3   1.000" in out


def test_inspect_agresti_report(agresti_doc):
    ors = cmd_inspect(agresti_doc)["odds_ratios"]
    assert ors["omega3"] == pytest.approx(1, abs=1e-12)
    assert ors["23|0"] == pytest.approx(6, abs=1e-9)
    assert ors["13|0"] == pytest.approx(1 / 6, abs=1e-9)
    assert ors["12|0"] == pytest.approx(1, abs=1e-9)


def test_inspect_all_equal(tmp_path):
    doc = TableDocument(3, ("a", "b", "c"), (("0", "1"),) * 3, (2.0,) * 8)
    assert set(cmd_inspect(doc)["odds_ratios"].values()) == {1.0}


def test_inspect_zero_cell_notice(capsys, zero_doc):
    code, out, _ = run(capsys, "inspect", str(zero_doc))
    assert code == EXIT_OK
    assert "odds ratios undefined (zero cell)" in out


def test_uniformize_yule_closed(capsys, tmp_path):
    out_path = tmp_path / "yule_u.json"
    code, out, _ = run(capsys, "uniformize", "yule", "--method", "closed", "--out", str(out_path))
    assert code == EXIT_OK
    doc = load_table(out_path)
    assert doc.kind == "probabilities"
    assert np.round(doc.cells, 2).tolist() == [0.41, 0.09, 0.09, 0.41]
    assert doc.axis_labels == ("Vaccination", "Recovery")


def test_uniformize_agresti_ipf(agresti_doc):
    out, summary = cmd_uniformize(agresti_doc, "ipf")
    np.testing.assert_allclose(to_printed(agresti_doc, out.cells), AGRESTI_SOLUTION_PRINTED, atol=5e-4)
    assert summary["before"]["23|0"] == pytest.approx(summary["after"]["23|0"], rel=1e-8)


def test_uniformize_fienberg_newton_json(capsys):
    code, out, _ = run(capsys, "uniformize", "fienberg", "--method", "newton", "--json")
    assert code == EXIT_OK
    payload = json.loads(out)
    np.testing.assert_allclose(payload["table"]["cells"], FIENBERG_EXACT, atol=1e-12)
    assert payload["summary"]["method"] == "newton"


@pytest.mark.parametrize("method", ["closed", "sections"])
def test_uniformize_symmetric_methods(agresti_doc, method):
    out, summary = cmd_uniformize(agresti_doc, method)
    np.testing.assert_allclose(out.cells, 1 / 8, atol=1e-15)  # omega3 = 1
    assert summary["final_residual"] <= 1e-12


def test_uniformize_2d_only_closed(capsys):
    code, _, err = run(capsys, "uniformize", "yule", "--method", "ipf")
    assert code == EXIT_INPUT
    assert "2x2x2" in err


@pytest.mark.parametrize("method", ["closed", "ipf", "newton", "sections"])
def test_uniformize_zero_cell_exit_code(capsys, zero_doc, method):
    code, _, err = run(capsys, "uniformize", str(zero_doc), "--method", method)
    assert code == EXIT_ZERO_CELL
    assert "zero cell" in err or "strictly positive" in err


def test_uniformize_non_convergence(capsys):
    code, _, err = run(capsys, "uniformize", "fienberg", "--method", "ipf", "--max-iter", "2")
    assert code == EXIT_CONVERGENCE
    assert "did not converge" in err


def test_uniformize_bad_flags(capsys):
    assert run(capsys, "uniformize", "agresti", "--damping", "2")[0] == EXIT_INPUT
    assert run(capsys, "uniformize", "agresti", "--tol", "0")[0] == EXIT_INPUT


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("i,j,k,value\n0,0,0,1\n")
    code, _, err = run(capsys, "inspect", str(bad))
    assert code == EXIT_INPUT
    assert "expected 8 cells, found 1" in err


def test_family_free(capsys):
    code, out, _ = run(capsys, "family", "--omega", "1", "--free", "0.125,0.125,0.125")
    assert code == EXIT_OK
    (point,) = json.loads(out)
    np.testing.assert_allclose(point["cells"], 1 / 8, atol=1e-16)
    assert point["max_residual"] == 0


def test_family_sample(capsys):
    code, out, _ = run(capsys, "family", "--omega", "1", "--n", "5", "--seed", "42")
    assert code == EXIT_OK
    points = json.loads(out)
    assert len(points) == 5
    assert all(p["max_residual"] <= 1e-10 for p in points)


def test_family_infeasible(capsys):
    code, _, err = run(capsys, "family", "--omega", "1", "--free", "0.3,0.2,0.1")
    assert code == EXIT_INPUT
    assert "p011 = 1/2 - 0.6" in err


def test_family_argument_errors(capsys):
    assert run(capsys, "family", "--omega", "1", "--free", "0.1,0.1")[0] == EXIT_INPUT
    assert run(capsys, "family", "--omega", "-1")[0] == EXIT_INPUT
    assert run(capsys, "family", "--omega", "1", "--free", "0.1,0.1,0.1", "--n", "3")[0] == EXIT_INPUT


def test_family_reports_residual_rows():
    (point,) = cmd_family(2.0, free=(0.2, 0.1, 0.1))
    assert set(point["residuals"]) == {"log_odds_ratio", "total", "margin_X1", "margin_X2", "margin_X3"}


def test_cli_determinism(capsys):
    first = run(capsys, "family", "--omega", "16", "--n", "3", "--seed", "7")[1]
    second = run(capsys, "family", "--omega", "16", "--n", "3", "--seed", "7")[1]
    assert first == second
    first = run(capsys, "uniformize", "fienberg", "--json")[1]
    assert first == run(capsys, "uniformize", "fienberg", "--json")[1]


def test_plot_rejects_three_way(capsys, tmp_path):
    code, _, err = run(capsys, "plot", "agresti", "yule", "--out", str(tmp_path / "x.svg"))
    assert code == EXIT_INPUT
    assert "2×2 tables only" in err
    assert not (tmp_path / "x.svg").exists()


def test_uniformize_output_round_trip(tmp_path, agresti_doc):
    out, _ = cmd_uniformize(agresti_doc, "newton", SolverConfig())
    save_table(out, tmp_path / "o.json")
    assert load_table(tmp_path / "o.json").cells == out.cells


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "unimargin.cli", "inspect", "yule", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["dims"] == 2
