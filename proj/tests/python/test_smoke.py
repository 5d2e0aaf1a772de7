import pathlib

import pytest

import evoclass

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def algebra(rows, field="Q"):
    kind = {"kind": "Q"} if field == "Q" else {"kind": "Fp", "p": int(field[1:])}
    return {"field": kind, "dim": len(rows), "structure_matrix": [[str(x) for x in r] for r in rows]}


def test_invariants_of_two_minimal_ideals():
    inv = evoclass.invariants((DATA / "two_minimal_ideals.json").read_text())
    assert inv["socle"]["dim"] == 2


def test_classify_decomposable_leaf():
    report = evoclass.classify(algebra([[1, 0, 0], [0, 1, -1], [0, -1, 1]]))
    assert report["case"] == "socle2.decomposable"
    assert report["witness"] is not None


def test_iso_brute_force_over_f5():
    e1 = (DATA / "split_ann.json").read_text()
    e2 = (DATA / "glued_ann.json").read_text()
    out = evoclass.iso(e1, e2, field="f5")
    assert out["verdict"] == "no"
    assert out["method"] == "brute_force"
    assert evoclass.iso(e1, e1, field="f5")["verdict"] == "yes"


def test_construct_au_spec():
    built = evoclass.construct((DATA / "au_spec.json").read_text())
    assert built["dim"] == 3


def test_square_class_orbit():
    x = (DATA / "square_class_3.json").read_text()
    y = (DATA / "square_class_12.json").read_text()
    assert evoclass.same_orbit("square-class", x, y)["verdict"] == "yes"


def test_f2_catalog():
    cat = evoclass.catalog("f2", verify=True)
    assert cat["matrices"] == 512
    assert cat["classes"] == cat["brute_force_classes"]
    assert cat["partition_mismatches"] == 0


def test_errors_are_raised():
    with pytest.raises(evoclass.EvoclassError):
        evoclass.classify((DATA / "bad_fraction.json").read_text())
    with pytest.raises(evoclass.EvoclassError):
        evoclass.classify(algebra([[1, 0], [0, 1]]))
