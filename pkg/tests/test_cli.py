import json
import subprocess
import sys
from pathlib import Path

import pytest

from motinf import Field, danielewski_graph
from motinf.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *args):
    code, out, err = run(capsys, *args, "--format", "record")
    assert code == 0, err
    return json.loads(out)


def test_plumbing_danielewski(capsys):
    rep = record(capsys, "plumbing", FIX / "danielewski_3.json")
    assert rep["subcommand"] == "plumbing"
    assert rep["result"]["homology"] == {"H_0": "1", "H_1": "(1/6)(1)", "H_2": "0", "H_3": "1(2)"}
    assert rep["result"]["diagonalization"]["certificate_replays"]
    assert rep["result"]["diagonalization"]["diagonal"][-1] == "3H"


def test_plumbing_three_lines(capsys):
    rep = record(capsys, "plumbing", FIX / "three_lines.json")
    assert list(rep["result"]["homology"].values()) == ["1", "1 + (1/2)(1)", "1(2)", "1(2)"]
    assert rep["result"]["homology_records"][1]["split_assumed"] is True
    assert any(w.startswith("split_assumed") for w in rep["warnings"])
    assert any(w.startswith("notation ambiguous") for w in rep["warnings"])


def test_plumbing_text_table(capsys):
    code, out, _ = run(capsys, "plumbing", FIX / "three_lines.json")
    assert code == 0
    assert "i  H_i at infinity\n-  ---------------\n0  1\n1  1 + (1/2)(1)" in out


def test_self_edge(capsys):
    code, _, err = run(capsys, "plumbing", FIX / "self_edge.json")
    assert code == 2
    assert "self-edge at edges[0]" in err


def test_odd_weight_needs_rank_only(capsys, tmp_path):
    path = tmp_path / "line.json"
    path.write_text(json.dumps({"field": "rc", "vertices": [{"name": "L", "d": 1}]}))
    code, _, err = run(capsys, "plumbing", path)
    assert code == 3 and "odd self-intersection" in err
    rep = record(capsys, "plumbing", path, "--rank-only")
    assert rep["result"]["homology"]["H_3"] == "1(2)" and rep["result"]["mu"] is None


def test_non_rational_point_is_unsupported(capsys, tmp_path):
    rec = {"field": "rc", "vertices": [{"d": 0}, {"d": 0}],
           "edges": [{"i": 0, "j": 1, "points": [{"m": 1, "residue": "quadratic:-1"}]}]}
    path = tmp_path / "quad.json"
    path.write_text(json.dumps(rec))
    assert run(capsys, "plumbing", path)[0] == 3


def test_plumbing_seed_replay(capsys, tmp_path):
    path = tmp_path / "d5.json"
    path.write_text(json.dumps(danielewski_graph(5, Field.real_closed()).to_record()))
    rep = record(capsys, "plumbing", path, "--seed", 7)
    assert rep["result"]["order_check"] == {"seed": 7, "permutations": 5, "agree": True}


def test_field_flag(capsys):
    rep = record(capsys, "plumbing", FIX / "three_lines.json", "--field", "fq:5")
    assert rep["result"]["field"] == "fq:5"
    assert run(capsys, "plumbing", FIX / "three_lines.json", "--field", "fq:4")[0] == 2


def test_arrangement(capsys):
    rep = record(capsys, "arrangement", FIX / "affine_plane.json")
    assert rep["result"]["homotopy_type_at_infinity"] == "1 + 1(2)[3]"
    rep = record(capsys, "arrangement", FIX / "coordinate_axes.json")
    assert rep["result"]["homotopy_type"] == "1 + 2*1(1)[1] + 1(2)[2]"
    assert rep["result"]["compact_support_type"] == "1[2] + 2*1(1)[3] + 1(2)[4]"
    assert rep["result"]["stratum_table"]["m_profile"] == [1, 2, 1]
    rep = record(capsys, "arrangement", FIX / "concurrent_lines.json", "--seed", 1)
    assert rep["result"]["stratum_table"]["nc_flag"] is False
    assert rep["result"]["order_check"]["agree"]
    assert run(capsys, "arrangement", FIX / "duplicate_hyperplane.json")[0] == 2


def test_gw_expressions(capsys):
    rep = record(capsys, "gw", "n_eps(2)", "--field", "rc")
    assert (rep["result"]["rank"], rep["result"]["sig"]) == (2, 0)
    assert record(capsys, "gw", "H*<-1>")["result"]["value"] == "H"
    assert record(capsys, "gw", "H", "--field", "fq:3")["result"]["disc_bit"] == 1
    code, _, err = run(capsys, "gw", "2 + * 3")
    assert code == 2 and "position 4" in err
    assert run(capsys, "gw")[0] == 2


def test_gw_matrix(capsys):
    rep = record(capsys, "gw", "--matrix", FIX / "three_lines_matrix.json")
    assert rep["result"]["summary"]["diagonal"] == ["<1>", "<1>", "2<1>"]
    assert rep["result"]["summary"]["rank_snf"] == [1, 1, 2]
    assert rep["result"]["certificate"]["left_ops"]


def test_cech(capsys):
    rep = record(capsys, "cech", FIX / "triangle_cech.json")
    assert rep["result"]["homology"] == ["1 + 3*1(1)[2]", "1"]
    assert rep["result"]["euler_conserved"]
    rep = record(capsys, "cech", FIX / "single_stratum_cech.json")
    assert rep["result"]["complex"]["differentials"] == []
    code, _, err = run(capsys, "cech", FIX / "bad_face_cech.json")
    assert code == 2 and "(n, k) = (1, 0)" in err


def test_cech_literal_complex(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"terms": [[{"q": 0}], [{"q": 0}], [{"q": 0}]], "differentials": [[[1]], [[1]]]}))
    code, _, err = run(capsys, "cech", path)
    assert code == 2 and "d_1 o d_2" in err


@pytest.mark.parametrize("content", ["{", "[1, 2"])
def test_bad_json(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run(capsys, "plumbing", path)
    assert code == 2 and "invalid JSON" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "cech", tmp_path / "nope.json")[0] == 2


def test_determinism(capsys):
    for args in (["plumbing", FIX / "danielewski_3.json"], ["cech", FIX / "triangle_cech.json"],
                 ["arrangement", FIX / "concurrent_lines.json"]):
        first = run(capsys, *args, "--format", "record")[1]
        second = run(capsys, *args, "--format", "record")[1]
        assert first == second
        assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_digest_depends_on_input_and_flags(capsys):
    a = record(capsys, "gw", "H")["input_digest"]
    b = record(capsys, "gw", "H", "--field", "qc")["input_digest"]
    c = record(capsys, "gw", "2H")["input_digest"]
    assert len({a, b, c}) == 3 and len(a) == 64


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "motinf.cli", "gw", "n_eps(3)", "--format", "record"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["result"]["value"] == "2<1> + <-1>"
