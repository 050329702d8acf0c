import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from posethom.cli import main
from posethom.errors import PreconditionError
from posethom.functor import constant_functor, glue_functor
from posethom.io import functor_to_json, load_functor, load_poset, poset_to_json
from posethom import models

DATA = Path(__file__).parent / "data"
TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_homology_of_v():
    code, out, _ = run("homology", DATA / "v.json", "--functor", DATA / "v_functor.json")
    assert code == 0 and out == "H_0 = Z/2\nH_1 = 0\n"


def test_homology_of_projective_plane():
    code, out, _ = run("homology", DATA / "rp2.json", "--constant", "Z")
    assert code == 0 and out == "H_0 = Z\nH_1 = Z/2\nH_2 = 0\n"
    code, out, _ = run("homology", DATA / "rp2.json", "--constant", "Z/2", "--range", "1..2")
    assert out == "H_1 = Z/2\nH_2 = Z/2\n"


def test_relative_to_everything_is_zero():
    X = load_poset(DATA / "v.json")
    code, out, _ = run("homology", DATA / "v.json", "--functor", DATA / "v_functor.json",
                       "--relative", ",".join(X.elements))
    assert code == 0 and out == "H_0 = 0\nH_1 = 0\n"


def test_text_and_json_agree():
    _, text, _ = run("homology", DATA / "klein.json", "--constant", "Z")
    _, raw, _ = run("homology", DATA / "klein.json", "--constant", "Z", "--format", "json")
    records = json.loads(raw)
    assert [f"H_{r['n']} = {r['group']}" for r in records] == text.splitlines()
    assert records[1]["free_rank"] == 1 and records[1]["torsion"] == [2]


def test_reduce_cone(tmp_path):
    code, out, _ = run("reduce", DATA / "cone.json", "--constant", "Z")
    assert code == 0 and out.splitlines()[-1] == "4 -> 1 elements: top"
    assert all("up beat point" in line for line in out.splitlines()[:-1])


def test_reduce_keeps_v():
    code, raw, _ = run("reduce", DATA / "v.json", "--functor", DATA / "v_functor.json",
                       "--format", "json")
    data = json.loads(raw)
    assert code == 0 and data["removed"] == []
    assert data["poset"] == poset_to_json(load_poset(DATA / "v.json"))


def test_reduce_mapping_cylinder_round_trip(tmp_path):
    f = models.projective_plane_map()
    F_Q = constant_functor(f.target)
    F_P = constant_functor(f.source)
    cyl, G = glue_functor(f, {p: [[1]] for p in f.source.elements}, F_P, F_Q)
    (tmp_path / "m.json").write_text(json.dumps(poset_to_json(cyl.poset)))
    (tmp_path / "g.json").write_text(json.dumps(functor_to_json(G)))
    code, raw, _ = run("reduce", tmp_path / "m.json", "--functor", tmp_path / "g.json",
                       "--out-poset", tmp_path / "r.json", "--out-functor", tmp_path / "rf.json",
                       "--format", "json")
    assert code == 0
    removed = [r["element"] for r in json.loads(raw)["removed"]]
    assert set(removed[:len(f.source)]) == set(cyl.source_ids)
    Xr = load_poset(tmp_path / "r.json")
    Fr = load_functor(tmp_path / "rf.json", Xr)
    assert set(Xr.elements) <= set(cyl.target_ids)
    assert poset_to_json(Xr) == json.loads(raw)["poset"]
    assert functor_to_json(Fr) == json.loads(raw)["functor"]


def test_khovanov_tables():
    code, out, _ = run("khovanov", "", "--graded")
    assert code == 0 and out.splitlines()[-1] == "i=0: Z (q=-1), Z (q=1)"
    code, out, _ = run("khovanov", TREFOIL, "--graded")
    assert "i=3: Z/2 (q=7), Z (q=9)" in out
    code, out, _ = run("khovanov", TREFOIL)
    assert "i=3: Z (+) Z/2" in out
    code, raw, _ = run("khovanov", TREFOIL, "--graded", "--format", "json")
    assert {"i": 3, "q": 7, "group": "Z/2"} in json.loads(raw)


def test_khovanov_raw_indexing(tmp_path):
    (tmp_path / "t.pd").write_text(TREFOIL + "\n")
    code, out, _ = run("khovanov", "--file", tmp_path / "t.pd", "--raw")
    assert code == 0 and "KH_3 = H_0(B, B-1) = Z (+) Z/2" in out


def test_malformed_pd():
    code, out, err = run("khovanov", "X(1,2,3,4)")
    assert code == 4 and "exactly twice" in err and out == ""


def test_e2_pages():
    code, out, _ = run("e2", DATA / "rp2.json", DATA / "v.json", DATA / "rp2_to_v.json",
                       "--constant", "Z")
    assert code == 0
    assert "H_0 = Z (determined)" in out and "H_1 = Z/2 (determined)" in out
    code, out, _ = run("e2", DATA / "klein.json", DATA / "klein_base.json",
                       DATA / "klein_to_base.json", "--constant", "Z")
    assert "H_1 = Z (+) Z/2 (determined)" in out
    code, raw, _ = run("e2", DATA / "rp2.json", DATA / "v.json", DATA / "rp2_to_v.json",
                       "--constant", "Z", "--format", "json")
    assert json.loads(raw)["page"] == [{"p": 0, "q": 0, "group": "Z"},
                                       {"p": 0, "q": 1, "group": "Z/2"}]


def test_e2_identity_map(tmp_path):
    X = load_poset(DATA / "circle4.json")
    (tmp_path / "id.json").write_text(json.dumps({"assignment": {x: x for x in X.elements}}))
    code, raw, _ = run("e2", DATA / "circle4.json", DATA / "circle4.json", tmp_path / "id.json",
                       "--constant", "Z", "--format", "json")
    page = json.loads(raw)["page"]
    assert code == 0 and {e["q"] for e in page} == {0}
    assert [(e["p"], e["group"]) for e in page] == [(0, "Z"), (1, "Z")]


def test_exit_codes(tmp_path):
    assert run("homology", tmp_path / "none.json", "--constant", "Z")[0] == 4
    assert run("homology", DATA / "v.json", "--constant", "Q")[0] == 4
    assert run("homology", DATA / "v.json", "--constant", "Z", "--range", "3..1")[0] == 4
    (tmp_path / "bad.json").write_text('{"elements": ["a", "b"], "covers": [["a","b"],["b","a"]]}')
    code, _, err = run("homology", tmp_path / "bad.json", "--constant", "Z")
    assert code == 2 and "cycle" in err
    code, _, err = run("homology", DATA / "v.json", "--constant", "Z", "--relative", "q")
    assert code == 2
    shutil.copy(DATA / "v_functor.json", tmp_path / "f.json")
    data = json.loads((tmp_path / "f.json").read_text())
    data["maps"]["a|c"] = [[1, 1]]
    (tmp_path / "f.json").write_text(json.dumps(data))
    code, _, err = run("homology", DATA / "v.json", "--functor", tmp_path / "f.json")
    assert code == 2 and "shape" in err
    assert PreconditionError("not boolean").exit_code == 3
    with pytest.raises(SystemExit) as exc:
        run("homology")
    assert exc.value.code == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "posethom", "homology", str(DATA / "v.json"),
                          "--functor", str(DATA / "v_functor.json")],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "H_0 = Z/2\nH_1 = 0\n"
