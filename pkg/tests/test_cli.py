import io
import os

import pytest

from dblogic.cli import cmd_check, cmd_model, cmd_prob, main
from dblogic.library import proofs_dir

PI_TEXT = """\
a /\\ b : 1/2
a /\\ !b : 1/4
!a /\\ b : 1/8
!a /\\ !b : 1/8
"""


def test_check_shipped_library_is_green():
    out = io.StringIO()
    assert cmd_check([proofs_dir()], None, out=out) == 0
    text = out.getvalue()
    assert "0 failures" in text and "checked 34" in text


def test_check_b5_under_weak_system_fails():
    out = io.StringIO()
    path = os.path.join(proofs_dir(), "3_1_2_a.dseq")  # uses b5
    assert cmd_check([path], "dbl*", out=out) == 1
    assert "FAIL" in out.getvalue()


def test_check_empty_input_is_green(tmp_path):
    out = io.StringIO()
    assert cmd_check([str(tmp_path)], None, out=out) == 0
    assert "checked 0" in out.getvalue()


def test_model_faithful_single_atom_halts():
    out = io.StringIO()
    rc = cmd_model(["a"], [], "faithful", 32, 0, None, None, None, out=out)
    assert rc == 0
    text = out.getvalue()
    assert "halted=True" in text and "[2, 2]" in text


def test_model_targeted_build_and_entailment():
    out = io.StringIO()
    rc = cmd_model(["a", "b"], ["(b | a)", "a -> b |- !a, (b | a)"],
                   "targeted", 32, 0, 200, None, None, out=out)
    assert rc == 0
    text = out.getvalue()
    assert "stage 1, 8 points" in text
    assert "entails" in text and "fails" not in text


def test_model_bad_formula_is_parse_error():
    with pytest.raises(Exception):
        cmd_model(["a"], ["(b | a)"], "targeted", 32, 0, None, None, None,
                  out=io.StringIO())


def test_model_budget_exceeded_nonzero():
    out = io.StringIO()
    rc = cmd_model(["a", "b"], ["(a | ((b | a) | (a | b)))"], "targeted",
                   8, 0, None, None, None, out=out)
    assert rc == 1
    assert "budget" in out.getvalue()


def test_model_reports_are_reproducible():
    a, b = io.StringIO(), io.StringIO()
    for buf in (a, b):
        cmd_model(["a", "b"], ["(b | a)", "a -> b |- !a, (b | a)"],
                  "targeted", 32, 7, 500, None, None, out=buf)
    assert a.getvalue() == b.getvalue()


def test_prob_pipeline_green(tmp_path):
    out = io.StringIO()
    rc = cmd_prob(["a", "b"], PI_TEXT, ["(b | a)"], 32, 0, False, None, out=out)
    assert rc == 0
    text = out.getvalue()
    assert "prob (b | a): 2/3" in text
    assert "bayes" in text and "FAIL" not in text


def test_prob_zero_cells_strict_mode_advises(tmp_path):
    out = io.StringIO()
    rc = cmd_prob(["a", "b"], "a /\\ b : 1/2\n!a /\\ b : 1/2\n",
                  [], 32, 0, True, None, out=out)
    assert rc == 1
    assert "strict-positive" in out.getvalue()


def test_prob_lewis_witness_printed():
    out = io.StringIO()
    rc = cmd_prob(["a", "b"], PI_TEXT, [], 32, 0, False, "b", out=out)
    assert rc == 0
    text = out.getvalue()
    assert "witness (b | a): extend-then-evaluate 1 != condition-the-extension 14/15" in text
    assert "collapses=True" in text


def test_main_entry(tmp_path, capsys):
    assert main(["check", proofs_dir()]) == 0
    capsys.readouterr()
