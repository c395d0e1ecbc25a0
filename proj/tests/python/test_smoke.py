import json

import pytest

import fliplab


def test_standard_and_strassen():
    s = fliplab.standard_scheme(2, 2, 2)
    assert s.rank == 8 and s.format == (2, 2, 2) and s.ring == "Z2"
    assert fliplab.verify(s)
    assert fliplab.verify(fliplab.strassen_scheme("Z3"))


def test_search_finds_seven():
    pool = fliplab.search([fliplab.standard_scheme(2, 2, 2)], seed=3, paths_multiplier=4,
                          length_multiplier=1000, target_rank=7)
    assert pool and all(s.rank == 7 and fliplab.verify(s) for s in pool)


def test_meta_moves():
    s = fliplab.strassen_scheme()
    e = fliplab.extend(s, "p")
    assert e.format == (2, 2, 3) and e.rank == 11
    assert fliplab.project(e, "p").rank <= 11
    assert fliplab.combine(s, s, "m").rank == 14
    with pytest.raises(ValueError):
        fliplab.extend(s, "q")


def test_json_round_trip(tmp_path):
    s = fliplab.strassen_scheme()
    fliplab.save(s, tmp_path / "s.json")
    assert fliplab.load(tmp_path / "s.json") == s
    assert json.loads(s.to_json())["rank"] == 7
    with pytest.raises(ValueError):
        fliplab.scheme_from_json("{")


def test_lift_strassen():
    q, report = fliplab.lift(fliplab.strassen_scheme(), 16)
    assert q is not None and q.ring == "Q" and fliplab.verify(q)
    assert report["reconstructed"]


def test_rat_reconstruct():
    assert fliplab.rat_reconstruct(255, 8) == (-1, 1)
    assert fliplab.rat_reconstruct(86, 8) == (2, 3)
