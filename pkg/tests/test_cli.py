import json

import pytest

from spectile import Multiset, make_group
from spectile.cli import (
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_set_document,
    serialize_set_document,
)


def _doc(group, elems, mults=None):
    doc = {"group": group, "set": elems}
    if mults is not None:
        doc["multiplicities"] = mults
    return json.dumps(doc)


def test_round_trip_set_documents():
    G = make_group([2, 2, 3, 3])
    A = Multiset.set_of(G, [(0, 0, 0, 0), (1, 0, 2, 1)])
    G2, B = parse_set_document(serialize_set_document(A))
    assert G2 == G and B == A
    M = Multiset(G, {(0, 0, 0, 0): 2, (1, 1, 1, 1): 5})
    _, M2 = parse_set_document(serialize_set_document(M))
    assert M2 == M


def test_parse_errors():
    with pytest.raises(Exception):
        parse_set_document("not json")
    with pytest.raises(Exception):
        parse_set_document(json.dumps({"group": [2, 3]}))
    with pytest.raises(Exception):
        parse_set_document(_doc([2, 3], [[0, 5]]))
    with pytest.raises(Exception):
        parse_set_document(_doc([2, 3], [[0]]))
    with pytest.raises(Exception):
        parse_set_document(_doc([2, 3], [[0, 0]], [0]))


def test_analyze_command(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 3], [[0, 0], [1, 0]]))
    rc = main(["analyze", "--set", str(f)])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert out["size"] == 2 and out["gcd_class"] == 2
    assert out["spectral"] is True and out["tile"] is True
    assert out["zero_set"]["size"] == 3
    assert out["complement"] == [[0, 0], [0, 1], [0, 2]]


def test_analyze_non_tile(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 3], [[0, 0], [0, 1], [1, 0]]))
    rc = main(["analyze", "--set", str(f)])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK  # spectral False == tile False: consistent
    assert out["spectral"] is False and out["tile"] is False


def test_analyze_singleton(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 3], [[1, 2]]))
    rc = main(["analyze", "--set", str(f)])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert out["spectral"] is True and out["tile"] is True
    assert out["spectrum"] == [[0, 0]]
    assert len(out["complement"]) == 6


def test_spectrum_and_complement_commands(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 3], [[0, 0], [1, 0]]))
    assert main(["spectrum", "--set", str(f)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["spectral"] is True and out["spectrum"] == [[0, 0], [1, 0]]

    assert main(["complement", "--set", str(f)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["tile"] is True and len(out["complement"]) == 3


def test_decompose_command(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 3], [[0, 0], [1, 0]]))
    assert main(["decompose", "--set", str(f)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["decomposition"]["row_coeffs"] == [1, 0, 0]

    f.write_text(_doc([2, 3], [[0, 0], [0, 1], [0, 2], [1, 0]]))
    assert main(["decompose", "--set", str(f)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["decomposition"] is None


def test_decompose_wrong_shape(tmp_path, capsys):
    f = tmp_path / "set.json"
    f.write_text(_doc([2, 2], [[0, 0]]))
    assert main(["decompose", "--set", str(f)]) == EXIT_USAGE


def test_enumerate_tiles_command(capsys):
    rc = main(["enumerate-tiles", "--group", "2,3", "--size", "2"])
    assert rc == EXIT_OK
    lines = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
    assert lines[-1]["count"] == 3
    assert [l["tile"] for l in lines[:-1]] == [
        [[0, 0], [1, 0]],
        [[0, 0], [1, 1]],
        [[0, 0], [1, 2]],
    ]


def test_verify_command_z6(capsys):
    rc = main(["verify", "--group", "2,3", "--sizes", "all", "--exhaustive"])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert out["fuglede"]["ok"] is True
    assert out["subgroup_tiling"]["ok"] is True


def test_verify_command_sampled_with_seed(capsys):
    rc = main(
        ["verify", "--group", "2,2,3", "--sizes", "4,6", "--samples", "50", "--seed", "7"]
    )
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert out["fuglede"]["seed"] == 7


def test_probe_command(capsys):
    rc = main(
        [
            "probe-case5",
            "--group", "3,3,5,5",
            "--samples", "5",
            "--seed", "1",
        ]
    )
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert out["examined"] == 5 and out["ok"] is True


def test_usage_errors(capsys):
    assert main(["verify", "--group", "x,y", "--sizes", "all"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["verify", "--group", "2,3", "--sizes", "bogus"]) == EXIT_USAGE


def test_reports_survive_json_round_trip(capsys):
    from spectile import VerificationPlan, make_group, verify_fuglede, verify_subgroup_tiling

    G = make_group([2, 2, 3])
    plan = VerificationPlan(group=G, sizes=(2, 3, 4))
    for report in (verify_fuglede(plan), verify_subgroup_tiling(plan)):
        d = report.to_dict()
        assert json.loads(json.dumps(d)) == d

    rc = main(["verify", "--group", "2,3", "--sizes", "2,3"])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK
    assert json.loads(json.dumps(out)) == out
