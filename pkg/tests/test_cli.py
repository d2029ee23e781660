import json
import subprocess
import sys
from pathlib import Path

import pytest

from qforge.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


def test_cohomology_example(capsys):
    code, doc = run(capsys, "cohomology", DATA / "r3.json", "--degree", "2", "--theory", "quandle")
    assert code == 0 and doc["result"]["dimension"] == 0


def test_link_example(capsys):
    code, doc = run(capsys, "link", DATA / "trefoil.json", DATA / "r3.json")
    assert code == 0 and doc["result"]["colorings"] == 9
    assert doc["result"]["abelianization"] == "Z"


def test_axioms_example(capsys):
    code, doc = run(capsys, "axioms", DATA / "t2.json")
    r = doc["result"]
    assert code == 0 and r["quandle"] is True and r["components"] == 2 and r["inn_order"] == 1


def test_axioms_non_rack_reports(capsys):
    code, doc = run(capsys, "axioms", DATA / "not_a_rack.json")
    assert code == 0 and doc["result"]["classification"] == "neither"


def test_qm(capsys):
    code, doc = run(capsys, "qm", DATA / "qm_ab.json")
    r = doc["result"]
    assert code == 0 and r["defect"]["measured"] == "1/1"
    assert r["homogenized"]["values"]["bab"] == "1/1"
    assert r["scl"][0] == {"element": "aba^-1b^-1", "lower": "1/8"}


def test_classes_pipelines(capsys):
    code, doc = run(capsys, "classes", DATA / "fq_ab.json", DATA / "hcount_ab.json", "--n-max", "16")
    assert code == 0 and doc["result"]["certified"]
    assert doc["result"]["independence"]["witnessed"] >= 18
    code, doc = run(capsys, "classes", "--pipeline", "en")
    assert code == 0 and doc["result"]["independent_classes"] == 1
    code, doc = run(capsys, "classes", "--pipeline", "kquandle", "--generators", "ab", "--k", "3")
    assert code == 0 and doc["result"]["certified"]
    code, doc = run(capsys, "classes", "--pipeline", "kquandle", "--generators", "ab", "--k", "2")
    assert code == 0 and doc["result"]["warnings"]


def test_certification_failure_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "hcount", "word": "ab", "defect_upper": "1/100"}))
    code, doc = run(capsys, "classes", DATA / "fq_ab.json", bad)
    assert code == 1 and doc["error"]["kind"] == "certification"


@pytest.mark.parametrize("argv", [
    ["axioms", "/nonexistent.json"],
    ["cohomology", "DATA/not_a_rack.json"],
    ["cohomology", "DATA/r3.json", "--degree", "7"],
    ["classes", "--pipeline", "en", "--ns", "x"],
    ["classes", "DATA/fq_ab.json"],
])
def test_input_errors_exit_2(argv, capsys):
    argv = [a.replace("DATA", str(DATA)) for a in argv]
    code, doc = run(capsys, *argv)
    assert code == 2 and doc["error"]["kind"] == "input"


def test_output_is_byte_identical(tmp_path):
    outs = []
    for n in range(2):
        out = tmp_path / f"o{n}.json"
        assert main(["qm", str(DATA / "qm_ab.json"), "--seed", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "qforge.cli", "link", str(DATA / "unknot.json"),
                          str(DATA / "r5.json")], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["result"]["colorings"] == 5
