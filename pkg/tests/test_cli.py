import json

import numpy as np
import pytest

from brpic.cli import main, pi_fraction
from brpic.cyclo import root_of_unity
from brpic.fusion import catalog
from brpic.morita import parse_auto


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_lists_entries(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "csv")
    assert code == 0
    assert "Z(adE6)" in out.splitlines()


def test_modular_table1(capsys, fixtures):
    code, out, _ = run(capsys, "modular", "Z(adE6)", "--format", "json")
    assert code == 0
    block = json.loads(out)[0]
    twists = {row[0]: row[2] for row in block["rows"]}
    for lab, t in fixtures["table1"]["twists"].items():
        assert twists[lab] == t


def test_ring_autos_identity_only(capsys):
    code, out, _ = run(capsys, "ring-autos", "--entry", "adA:4", "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"] == [["id"]]


def test_automorphisms_roundtrip_through_parser(capsys):
    code, out, _ = run(capsys, "ring-autos", "adD:10", "--format", "json")
    ring = catalog("adD:10").ring
    names = [row[0] for row in json.loads(out)["rows"]]
    assert len(names) == 6
    perms = {parse_auto(ring, n) for n in names}
    assert len(perms) == 6


def test_braided_autos_group(capsys):
    code, out, _ = run(capsys, "braided-autos", "Z(adA:7)", "--format", "json")
    assert "group D8" in json.loads(out)["title"]


def test_nimrep_matrices_roundtrip(capsys):
    code, out, _ = run(capsys, "nimreps", "adD:10", "--rank", "3", "--format", "json")
    rows = json.loads(out)[0]["rows"]
    assert len(rows) == 1
    M = np.array(json.loads(rows[0][1]))
    assert M.shape == (3, 3) and (M == M.T).all()


def test_bp_markdown(capsys):
    code, out, _ = run(capsys, "bp", "adA:7")
    assert code == 0
    assert "D8" in out and "underlying algebra" in out


def test_galois(capsys):
    code, out, _ = run(capsys, "galois", "Z(E6)", "-k", "5", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row[1] == row[2] == 2 and row[3] is True


def test_output_is_deterministic(capsys):
    a = run(capsys, "verify-pa", "ZadA", "--N", "1", "--seed", "4", "--samples", "5")
    b = run(capsys, "verify-pa", "ZadA", "--N", "1", "--seed", "4", "--samples", "5")
    assert a == b and a[0] == 0
    assert "5/5" in a[1]


@pytest.mark.parametrize("argv,error", [
    (["modular", "Q:9"], "UnknownName"),
    (["verify-pa", "Z(adA:6)"], "UnsupportedPresentation"),
    (["modular"], "UnknownName"),
])
def test_errors_are_json(capsys, argv, error):
    code, out, err = run(capsys, *argv)
    assert code != 0 and out == ""
    obj = json.loads(err)
    assert obj["error"] == error and obj["command"] == argv[0]


def test_pi_fraction():
    assert pi_fraction(root_of_unity(48, 15)) == "5/8"
    assert pi_fraction(root_of_unity(1, 0)) == "0"
