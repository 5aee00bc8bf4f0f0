import json
import subprocess
import sys

import jsonschema

from endoring.cli import SCHEMA_PATH, main

from conftest import F71, F72, Q71, Q72

SCHEMA = json.loads(SCHEMA_PATH.read_text())
CURVE72 = json.dumps({"q": str(Q72), "f": [str(c) for c in F72]})
CURVE71 = json.dumps({"q": str(Q71), "f": [str(c) for c in F71]})
CHI72 = json.dumps({"q": str(Q72), "c1": "114", "c2": "7566"})
CHI71 = json.dumps({"q": str(Q71), "c1": "1251", "c2": "1772074"})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc, out


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "local", "--chi", CHI72)[0] == 2
    assert run(capsys, "index")[0] == 2
    assert run(capsys, "index", "--chi", "/no/such/file.json")[0] == 2
    code, doc, _ = run(capsys, "index", "--chi", CHI72, "--bsgs-budget", "0")
    assert code == 2 and doc["error"]["kind"] == "usage"


def test_non_ordinary_is_domain_error(capsys):
    code, doc, _ = run(capsys, "index", "--chi", json.dumps({"q": "7", "c1": "0", "c2": "7"}))
    assert code == 1
    assert doc["error"]["kind"] == "NotOrdinaryError"
    code, doc, _ = run(capsys, "classify", "--chi", json.dumps({"q": "7", "c1": "0", "c2": "7"}))
    assert code == 0 and doc["result"]["ordinary"] is False


def test_charpoly_72(capsys):
    code, doc, _ = run(capsys, "charpoly", "--curve", CURVE72)
    assert code == 0
    assert doc["result"]["coefficients"] == ["114", "7566", str(114 * Q72), str(Q72**2)]
    assert doc["config"]["seed"] == "0"


def test_index_71(capsys):
    code, doc, _ = run(capsys, "index", "--chi", CHI71)
    assert code == 0
    assert doc["result"] == {"v": "1076518", "factors": {"2": 1, "538259": 1}}


def test_lattice_72(capsys):
    code, doc, _ = run(capsys, "lattice", "--chi", CHI72, "--order-multiple", str(47**2 * 379))
    assert code == 0
    assert doc["result"]["start"]["index"] == str(47**2 * 379)
    assert sorted(int(o["index"]) for o in doc["result"]["directly_above"]) == [379, 47**2]


def test_class_order_72(capsys):
    code, doc, _ = run(capsys, "class-order", "--chi", CHI72, "--order-multiple", str(47**2), "--prime", "3:0")
    assert code == 0
    assert doc["result"]["polarized_order"] == "92"
    assert doc["result"]["image_order"] == "92"
    assert doc["result"]["picard_order"] == "46"


def test_relations_targets(capsys):
    code, doc, _ = run(capsys, "relations", "--chi", CHI72, "--order-multiple", str(47**2), "--targets", "3:1")
    assert code == 0
    (rel,) = doc["result"]["relations"]
    assert rel["total_norm"] == "603612"
    assert rel["relation"]["entries"][0]["exponent"] == "92"


def test_local_72(capsys):
    code, doc, _ = run(capsys, "local", "--curve", CURVE72, "--ell", "2")
    assert code == 0
    assert doc["result"]["index"] == str(47**2 * 379)
    assert doc["result"]["locally_maximal"] is True
    assert doc["result"]["torsion_levels"] == ["1"]


def test_world_pipeline(capsys, tmp_path):
    code, doc, text = run(capsys, "simulate-world", "--seed", "8")
    assert code == 0 and doc["result"]["unique"] is True
    w = tmp_path / "w.json"
    w.write_text(text)
    runs = [run(capsys, "endoring", "--seed", "1", "--method", "bsgs", "--repetition-cap", "40",
                "--world", str(w)) for _ in range(2)]
    assert runs[0][0] == 0
    assert runs[0][2] == runs[1][2]
    planted = doc["result"]["world"]["planted"]
    assert runs[0][1]["result"]["order"] == planted
    code, cert, text = run(capsys, "certify", "--seed", "1", "--method", "bsgs", "--repetition-cap", "40",
                           "--world", str(w))
    assert code == 0
    c = tmp_path / "c.json"
    c.write_text(text)
    code, rep, _ = run(capsys, "verify", "--world", str(w), "--certificate", str(c))
    assert code == 0 and rep["result"] == {"ok": True, "failures": []}
    bad = cert["result"]["certificate"]
    bad["sha256"] = "1" * 64
    code, rep, _ = run(capsys, "verify", "--world", str(w), "--certificate", json.dumps(bad))
    assert code == 1 and not rep["result"]["ok"]


def test_entry_point():
    out = subprocess.run([sys.executable, "-m", "endoring.cli", "index", "--chi", CHI72],
                         capture_output=True, text=True, check=True)
    doc = json.loads(out.stdout)
    jsonschema.validate(doc, SCHEMA)
    assert doc["result"]["v"] == str(2**2 * 47**2 * 379)
