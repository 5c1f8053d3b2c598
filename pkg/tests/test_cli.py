"""Command line behavior: manifests, exit codes, report determinism."""

import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from rectify_kit.cli.main import main as cli_main
from rectify_kit.cli import manifest as mf
from rectify_kit.errors import InputError

DATA = Path(__file__).parent / "data"


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def mask_timing(text):
    return re.sub(r'"(timing_ms|total_ms)": \d+', r'"\1": 0', text)


def test_run_basic_all_pass(capsys):
    code, out, err = run_cli(capsys, "run", str(DATA / "basic.json"))
    assert code == 0
    report = json.loads(out)
    assert report["format"] == "rectify-kit-report/1"
    assert report["field"] == "F5"
    assert report["summary"]["total"] == 5
    assert report["summary"]["pass"] == 5
    # tasks stay in declaration order
    assert [t["name"] for t in report["tasks"]] == ["rel", "coh", "rect", "loc", "ham"]
    assert all(t["status"] == "pass" for t in report["tasks"])


def test_alias_normalizes_to_validate(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "basic.json"))
    report = json.loads(out)
    assert report["tasks"][0]["op"] == "validate"
    assert report["tasks"][0]["details"]["violations"] == []


def test_nonassociative_product_exits_2(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "nonassoc.json"))
    assert code == 2
    report = json.loads(out)
    task = report["tasks"][0]
    assert task["status"] == "fail"
    violations = task["details"]["violations"]
    assert violations
    # the report names the offending basis tuple
    assert violations[0]["inputs"] == ["x", "x", "x"]
    assert violations[0]["arity"] == 3


def test_unstabilized_localization_exits_3(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "fork.json"))
    assert code == 3
    report = json.loads(out)
    task = report["tasks"][0]
    assert task["status"] == "indeterminate"
    assert task["details"]["stabilized"] is False


def test_strict_folds_indeterminate_into_failure(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "fork.json"), "--strict")
    assert code == 2
    report = json.loads(out)
    # the status string is unchanged, only the exit code hardens
    assert report["tasks"][0]["status"] == "indeterminate"


def test_parse_error_cites_line_and_column(capsys):
    code, _, err = run_cli(capsys, "run", str(DATA / "badparse.json"))
    assert code == 1
    assert "line 4 column 3" in err
    assert "entities" in err


def test_unknown_entity_cited(capsys):
    code, _, err = run_cli(capsys, "validate", str(DATA / "basic.json"), "nosuch")
    assert code == 1
    assert "nosuch" in err


def test_wrong_entity_kind_cited(capsys):
    code, _, err = run_cli(capsys, "localize", str(DATA / "basic.json"), "dual")
    assert code == 1
    assert "kind 'category'" in err
    assert "relative" in err


def test_field_override(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "basic.json"), "--field", "Q")
    assert code == 0
    assert json.loads(out)["field"] == "Q"


def test_bad_field_flag(capsys):
    code, _, err = run_cli(capsys, "validate", str(DATA / "basic.json"), "dual", "--field", "F6")
    assert code == 1
    assert "prime" in err


def test_report_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "run", str(DATA / "basic.json"), "--report", str(target))
    assert code == 0
    assert out == ""
    report = json.loads(target.read_text())
    assert report["summary"]["pass"] == 5


def test_two_runs_byte_identical(capsys):
    _, first, _ = run_cli(capsys, "run", str(DATA / "basic.json"))
    _, second, _ = run_cli(capsys, "run", str(DATA / "basic.json"))
    assert mask_timing(first) == mask_timing(second)


def test_jobs_parallel_matches_serial(capsys):
    _, serial, _ = run_cli(capsys, "run", str(DATA / "basic.json"), "--jobs", "1")
    _, parallel, _ = run_cli(capsys, "run", str(DATA / "basic.json"), "--jobs", "4")
    assert mask_timing(serial) == mask_timing(parallel)


def test_subcommand_runs_single_task(capsys):
    code, out, _ = run_cli(capsys, "cohomology", str(DATA / "basic.json"), "dual")
    assert code == 0
    report = json.loads(out)
    assert len(report["tasks"]) == 1
    assert report["tasks"][0]["op"] == "cohomology"
    assert report["tasks"][0]["details"]["hom_dims"] == {"*->*": {"0": 2}}


def test_adjunction_manifest(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "adjunction.json"))
    assert code == 2  # the deliberate non-associative entity fails its check
    report = json.loads(out)
    by_name = {t["name"]: t for t in report["tasks"]}
    assert by_name["assoc"]["status"] == "fail"
    assert by_name["dk"]["status"] == "pass"
    assert by_name["emb"]["status"] == "pass"
    assert by_name["emb"]["details"]["status"] == "true"
    assert by_name["emb"]["details"]["witnesses"]
    assert by_name["fib"]["status"] == "pass"


def test_functor_manifest_quasi_equiv_and_fibration(capsys):
    code, out, _ = run_cli(capsys, "run", str(DATA / "functor.json"))
    assert code == 0
    report = json.loads(out)
    by_name = {t["name"]: t for t in report["tasks"]}
    assert by_name["qe"]["details"]["verdict"] is True
    assert by_name["fib"]["details"]["acyclic"] is True


def test_degree_window_flag_rejects_garbage(capsys):
    code, _, err = run_cli(capsys, "stabilize", str(DATA / "basic.json"), "dual",
                           "--degree-window", "nope")
    assert code == 1
    assert "LO:HI" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rectify_kit.cli", "run", str(DATA / "basic.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["pass"] == 5


# manifest loader corner cases, driven through loads() directly

BASE = """
{
  "format": "rectify-kit/1",
  "field": "%s",
  "entities": [%s],
  "tasks": [%s]
}
"""

CAT = """
{"name": "%s", "kind": "category", "objects": ["*"],
 "morphisms": [["e", "*", "*", 0], ["x", "*", "*", 0], ["y", "*", "*", 0]],
 "operations": [{"arity": 2, "inputs": ["x", "x"], "output": [["y", %s]]}],
 "units": {"*": "e"}}
"""


def test_duplicate_entity_name_rejected():
    text = BASE % ("Q", ",".join([CAT % ("A", "1"), CAT % ("A", "1")]), "")
    with pytest.raises(InputError, match="'A' repeats"):
        mf.loads(text)


def test_duplicate_morphism_name_rejected():
    ent = """{"name": "A", "kind": "category", "objects": ["*"],
              "morphisms": [["e", "*", "*", 0], ["e", "*", "*", 1]],
              "units": {"*": "e"}}"""
    with pytest.raises(InputError, match="morphism name 'e' repeats"):
        mf.loads(BASE % ("Q", ent, ""))


def test_missing_format_tag_rejected():
    with pytest.raises(InputError, match="format"):
        mf.loads('{"field": "Q", "entities": [], "tasks": []}')


def test_unknown_task_op_rejected():
    text = BASE % ("Q", CAT % ("A", "1"), '{"name": "t", "op": "frobnicate", "category": "A"}')
    with pytest.raises(InputError, match="frobnicate"):
        mf.loads(text)


def test_float_coefficient_rejected():
    text = BASE % ("Q", CAT % ("A", "0.5"), "")
    with pytest.raises(InputError, match="exact"):
        mf.loads(text)


def test_rational_string_coefficient_over_q():
    text = BASE % ("Q", CAT % ("A", '"1/2"'), "")
    man = mf.loads(text)
    assert man.field.is_rational
    kind, cat = man.entities["A"]
    assert kind == "category"


def test_rational_string_rejected_over_fp():
    text = BASE % ("F5", CAT % ("A", '"1/2"'), "")
    with pytest.raises(InputError, match="characteristic"):
        mf.loads(text)


def test_task_references_checked_at_load():
    text = BASE % ("Q", CAT % ("A", "1"), '{"name": "t", "op": "localize", "relative": "A"}')
    with pytest.raises(InputError, match="kind 'category'"):
        mf.loads(text)
