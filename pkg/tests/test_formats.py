import json

import pytest

from bratteli import fixtures
from bratteli.formats import dump_json, load_bundle, write_atomic


def test_fixture_files_match_builders():
    for name in fixtures.names():
        assert fixtures.load_raw(name) == json.loads(json.dumps(fixtures.build_all()[name]))


def test_bundle_by_name_and_path(tmp_path):
    p = tmp_path / "b.json"
    p.write_text(json.dumps(fixtures.load_raw("staircase")))
    a, b = load_bundle("staircase"), load_bundle(str(p))
    assert a.diagram.to_json() == b.diagram.to_json()
    assert a.target == b.target == {"level": 3, "vertex": 1}


def test_override_replaces_part(tmp_path):
    sk = dict(fixtures.load_raw("rotating_triple")["skeleton"])
    sk["sigma"] = {"0": [2], "1": [0], "2": [1]}
    (tmp_path / "sk.json").write_text(json.dumps(sk))
    b = load_bundle("rotating_triple", skeleton=str(tmp_path / "sk.json"))
    assert b.order is not None
    assert b.sigma.maps[1][0] == {2}
    assert load_bundle("rotating_triple").sigma.maps[1][0] == {1}


def test_missing_inputs():
    with pytest.raises(FileNotFoundError):
        load_bundle("no_such_fixture")
    with pytest.raises(ValueError):
        load_bundle()


def test_depth_extends_stationary():
    assert load_bundle("rotating_triple", depth=9).diagram.depth == 9


def test_write_atomic(tmp_path):
    target = tmp_path / "sub" / "x.json"
    write_atomic(target, dump_json({"a": 1}))
    write_atomic(target, dump_json({"a": 2}))
    assert json.loads(target.read_text()) == {"a": 2}
    assert [p.name for p in target.parent.iterdir()] == ["x.json"]
