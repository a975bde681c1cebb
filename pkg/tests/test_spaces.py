from __future__ import annotations

import json
import random

import pytest

from cuntzk.invariants import s_to_chern
from cuntzk.ringcore import nilpotency_index, validate
from cuntzk.spaces import (SchemaError, ValidationFailed, builtin, cp, dumps, from_dict, load,
                           loads, resolve, save, sphere, suspension_of_group, to_dict, wedge)

from conftest import CORPUS

EXTRA = ("cp(4)", "sphere(6)", "wedge(cp(1),cp(1))", "wedge(sphere(2),sphere(4))")


@pytest.mark.parametrize("name", CORPUS + EXTRA)
def test_builtins_validate_and_round_trip(name):
    X = builtin(name)
    assert validate(X.kring).valid
    assert loads(dumps(X)) == X
    assert dumps(loads(dumps(X))) == dumps(X)


@pytest.mark.parametrize("alias, name", [("cp2", "cp(2)"), ("s4", "sphere(4)"), (" cp( 3 ) ", "cp(3)")])
def test_aliases(alias, name):
    assert builtin(alias) == builtin(name)


@pytest.mark.parametrize("name, rank, index", [("cp(4)", 4, 4), ("sphere(6)", 1, 1), ("point", 0, 1),
                                               ("wedge(cp(1),cp(1))", 2, 1), ("suspension(0,3)", 2, 1)])
def test_shapes(name, rank, index):
    X = builtin(name)
    assert X.kring.rank == rank
    assert nilpotency_index(X.kring) == index


def test_wedge_renames_and_keeps_products_separate():
    W = builtin("wedge(cp(1),cp(1))")
    assert W.kring.generator_names == ("x", "x_b")
    x, xb = W.kring.gens()
    assert (x * xb).is_zero()
    assert W.cohomology.ring.generator_names == ("t", "t_b")


def test_cp_s_classes_follow_product_rule():
    # s_k(x^2) = (2t)^k - 2 t^k for x = [L] - 1 with c_1(L) = t
    X = cp(3)
    t = X.cohomology.cls(2, [1])
    sx2 = X.s_classes["x^2"]
    assert [c == t ** k * (2 ** k - 2) for k, c in enumerate(sx2, start=1)] == [True] * 3


@pytest.mark.parametrize("name", ["cp(2)", "cp(3)", "sphere(4)", "sphere(6)", "wedge(sphere(2),sphere(4))"])
def test_chern_classes_of_k_classes_are_integral(name):
    # every class of K~^0 is a virtual bundle, so Newton inversion must be exact
    X = builtin(name)
    rng = random.Random(name)
    top = X.dim // 2
    for _ in range(30):
        a = X.kring.element([rng.randint(-5, 5) for _ in range(X.kring.rank)])
        s_to_chern(X.s_of(a, top), 0)


def test_sphere_s_class():
    S = sphere(4)
    assert S.s_classes["y"][1] == S.cohomology.cls(4, [2])
    with pytest.raises(ValueError):
        sphere(3)


def test_unknown_builtin():
    with pytest.raises(SchemaError) as err:
        builtin("torus")
    assert err.value.field == "space"
    with pytest.raises(SchemaError):
        builtin("cp(2")


def _doc():
    return to_dict(builtin("cp(2)"))


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("generators"), "generators"),
    (lambda d: d["generators"][1].pop("level"), "generators[1].level"),
    (lambda d: d["generators"][0].__setitem__("order", "two"), "generators[0].order"),
    (lambda d: d["generators"][0].__setitem__("order", True), "generators[0].order"),
    (lambda d: d["products"].__setitem__("x*x", [0]), "products.x*x"),
    (lambda d: d["products"].__setitem__("x*q", [0, 1]), "products.x*q"),
    (lambda d: d.__setitem__("name", 3), "name"),
    (lambda d: d.__setitem__("dim", 2), "dim"),
    (lambda d: d["cohomology"]["generators"][0].pop("degree"), "cohomology.generators[0].degree"),
    (lambda d: d["s_classes"].__setitem__("w", [[1, 0]]), "s_classes.w"),
])
def test_schema_errors_name_the_field(mutate, field):
    doc = _doc()
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        from_dict(doc)
    assert err.value.field == field
    assert field in str(err.value)


def test_json_syntax_error_reports_line():
    with pytest.raises(SchemaError) as err:
        loads('{\n  "name": "x",\n  oops\n}')
    assert err.value.line == 3


def test_validation_failure_is_reported():
    doc = {"name": "bad", "generators": [{"name": "x", "level": 1}], "products": {"x*x": [1]}}
    with pytest.raises(ValidationFailed) as err:
        from_dict(doc)
    assert not err.value.report.valid
    # without checking the presentation is still built
    assert from_dict(doc, check=False).kring.rank == 1


def test_big_integers_survive_json():
    big = 2 ** 70 + 1
    X = suspension_of_group([big])
    text = dumps(X)
    assert json.loads(text)["generators"][0]["order"] == str(big)
    assert loads(text).kring.torsion_orders == (big,)


def test_file_round_trip(tmp_path):
    X = wedge(builtin("rp2"), cp(2))
    path = tmp_path / "w.json"
    save(X, path)
    assert load(path) == X
    assert resolve(str(path)) == X
    assert resolve("rp2") == builtin("rp2")


def test_suspension_of_group_checks_orders():
    with pytest.raises(ValueError):
        suspension_of_group([1])
    assert suspension_of_group([0, 3]).kring.generator_names == ("y1", "y2")


def test_readme_space_example_matches_builtin():
    import re
    from pathlib import Path
    readme = Path(__file__).resolve().parent.parent / "README.md"
    if not readme.exists():
        pytest.skip("README not available")
    doc = re.search(r"```json\n(.*?)```", readme.read_text(encoding="utf-8"), re.S).group(1)
    assert loads(doc) == builtin("cp(2)")
