import cmath
import os
from pathlib import Path

import pytest

import reinhardt

FIXTURES = Path(os.environ.get("REINHARDT_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def dom(name):
    return (FIXTURES / name).read_text()


def test_membership_and_margin():
    ball = dom("ball.dom")
    assert reinhardt.membership(ball, 0.5, 0.5j)
    assert not reinhardt.membership(ball, 0.8, 0.8)
    assert reinhardt.margin(ball, 0.6, 0.0) == pytest.approx(1 - 0.36)
    assert reinhardt.is_bounded(ball)


def test_parse_error_is_value_error():
    with pytest.raises(reinhardt.ParseError):
        reinhardt.normalize("mono 1 |z| <")
    with pytest.raises(ValueError):
        reinhardt.normalize("mono 1 |z| <")


def test_classify_golden():
    r = reinhardt.classify(dom("ball.dom"), dom("bidisc.dom"), 4)
    assert r["verdict"] == "NoProperMap"
    assert r["complete"]
    r = reinhardt.classify(dom("bidisc.dom"), dom("bidisc.dom"), 2)
    assert r["verdict"] == "NonElementaryAvailable"
    assert {c["tag"] for c in r["cases"]} == {"i", "iii"}


def test_synthesize_and_verify():
    b = dom("bidisc.dom")
    s = reinhardt.synthesize(b, b, "iii", {"blaschke": {"zeros": [0.5]}})
    rep = reinhardt.verify(b, b, s["map"], samples=300, seed=3)
    assert rep["verdict"] == "pass"
    assert rep == reinhardt.verify(b, b, s["map"], samples=300, seed=3, threads=2)
    # the zero of the Blaschke factor maps to the axis
    z, w = reinhardt.evaluate(s["map"], 0.5, 0.3)
    assert abs(z) < 1e-12 or abs(w) < 1e-12


def test_verify_rejects_bad_constant():
    b = dom("bidisc.dom")
    m = {"type": "elementary", "exponents": [[1, 0], [0, 1]], "constants": [2, 1]}
    rep = reinhardt.verify(b, b, m, samples=200)
    assert rep["verdict"] == "fail"
    assert "containment" in rep["reasons"]


def test_elementary_evaluation():
    m = {"type": "elementary", "exponents": [[2, -1], [0, 3]], "constants": [4, 1]}
    z, w = reinhardt.evaluate(m, cmath.e, cmath.e)
    assert abs(z) == pytest.approx(4 * cmath.e)
    assert abs(w) == pytest.approx(cmath.e ** 3)


def test_envelope_boundary_selfmaps():
    env = reinhardt.envelope(dom("hartogs.dom"))
    assert env["changed"] and env["added_axes"] == ["z"]
    pieces = reinhardt.boundary(dom("ball.dom"))["pieces"]
    assert [(p["kind"], p["model_type"]) for p in pieces] == [("spherical", 4)]
    assert reinhardt.self_maps(dom("bidisc.dom"), 2)["admits_nonelementary_nonbiholomorphic"]
    with pytest.raises(reinhardt.DomainError):
        reinhardt.boundary(dom("model_d.dom"))


def test_cli_in_process():
    code, doc = reinhardt.run_cli(["boundary", FIXTURES / "ball.dom"])
    assert code == 0
    assert doc["schema_version"] == reinhardt.SCHEMA_VERSION
    assert doc["command"] == "boundary"
    code, _ = reinhardt.run_cli(["classify", "/nonexistent.dom", FIXTURES / "ball.dom"])
    assert code == 1
