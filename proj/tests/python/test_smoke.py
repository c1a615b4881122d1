import json

import pytest

import maderkit
from maderkit import Digraph


def test_digraph_roundtrip():
    d = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert d.order == 3 and d.arc_count == 3
    assert Digraph.parse(d.to_text()) == d
    assert d.reverse().has_arc(1, 0)
    assert maderkit.isomorphic(d, d.reverse())


def test_dichromatic_number():
    for n in range(1, 6):
        chi, color = maderkit.dichromatic_number(maderkit.complete_biorientation(n))
        assert chi == n
        assert maderkit.is_acyclic_coloring(maderkit.complete_biorientation(n), chi, color)
    assert maderkit.dichromatic_number(maderkit.directed_path(4))[0] == 1


def test_subdivision_and_verify():
    k4 = maderkit.complete_biorientation(4)
    h1 = maderkit.pattern_h1()
    e = maderkit.subdivision(k4, h1)
    assert e is not None
    ok, clause = maderkit.verify_embedding(k4, h1, json.dumps(e))
    assert ok and clause == ""
    assert maderkit.subdivision(maderkit.complete_biorientation(3), h1) is None


def test_certify_h():
    out = maderkit.certify_h(maderkit.complete_biorientation(4), "H2")
    assert out["certificate"] == "subdivision"
    ok, _ = maderkit.verify_embedding(maderkit.complete_biorientation(4), maderkit.pattern_h2(), out["embedding"])
    assert ok
    out = maderkit.certify_h(maderkit.directed_cycle(5))
    assert out["certificate"] == "coloring"
    with pytest.raises(ValueError):
        maderkit.certify_h(maderkit.directed_cycle(3), "H7")


def test_family():
    c3 = maderkit.directed_cycle(3)
    der = maderkit.in_family(c3)
    assert der is not None
    assert maderkit.replay(der) == c3
    assert maderkit.in_family(maderkit.pattern_h1()) is None


def test_bounds():
    assert maderkit.bound_general(maderkit.pattern_h1()) == "12289"
    assert maderkit.bound_bicomplete(3) == "513"


def test_campaign():
    digon = Digraph(2, [(0, 1), (1, 0)])
    r = maderkit.campaign(digon, 4)
    assert r["schema"] == 1 and r["hosts"] == 239 and r["violations"] == []
    s = maderkit.campaign(digon, 6, sample=(3, 40))
    assert s["seed"] == 3 and s == maderkit.campaign(digon, 6, sample=(3, 40))
    with pytest.raises(maderkit.BudgetError):
        maderkit.campaign(digon, 7)
    assert maderkit.lemmas(3)["holds"]
