"""Built-in space models and the JSON schema for user-defined ones.

Schema (all keys except ``name`` and ``generators`` optional)::

    {
      "name": "cp2",
      "dim": 4,
      "generators": [{"name": "x", "order": 0, "level": 1}, ...],
      "products": {"x*x": [0, 1]},
      "relations": [[...], ...],
      "cohomology": {
        "generators": [{"name": "t", "degree": 2, "order": 0}, ...],
        "products": {"t*t": [0, 1]},
        "relations": [[...], ...]
      },
      "torsion_assertions": [0],
      "s_classes": {"x": [[1, 0], [0, 1]]}
    }

Vectors are coefficient lists in generator order.  ``s_classes[g][k-1]`` is
s_k(g) as a vector over all cohomology generators.  Integers may be written
as decimal strings.
"""

from __future__ import annotations

import json
import re
from math import comb, factorial
from typing import Any, Dict, List, Optional, Sequence

from .classify import SpaceModel
from .invariants import CohomologyClass, CohomologyRing
from .ringcore import RingPresentation, validate


class SchemaError(ValueError):
    """Malformed space document; ``field`` names the offending key path."""

    def __init__(self, message: str, field: str = "", line: Optional[int] = None):
        where = field + (f" (line {line})" if line else "")
        super().__init__(f"{where}: {message}" if where else message)
        self.field = field
        self.line = line


class ValidationFailed(ValueError):
    def __init__(self, report):
        super().__init__("; ".join(report.lines()))
        self.report = report


# ---------------------------------------------------------------------------
# builtins
# ---------------------------------------------------------------------------

def _s_product(sa: Sequence[CohomologyClass], sb: Sequence[CohomologyClass]) -> List[CohomologyClass]:
    # s_k(ab) = sum_{0<i<k} C(k, i) s_i(a) s_{k-i}(b)
    out = []
    for k in range(1, len(sa) + 1):
        acc = sa[0].H.zero(2 * k)
        for i in range(1, k):
            acc = acc + sa[i - 1] * sb[k - i - 1] * comb(k, i)
        out.append(acc)
    return out


def point() -> SpaceModel:
    return SpaceModel("point", RingPresentation([], [], []), 0, None, (0,))


def cp(n: int) -> SpaceModel:
    """CP^n: K~^0 = x Z[x]/x^(n+1), x the reduced Hopf class."""
    if n < 1:
        raise ValueError("cp(n) needs n >= 1")
    names = ["x" if j == 1 else f"x^{j}" for j in range(1, n + 1)]
    products = {}
    for i in range(n):
        for j in range(i, n):
            if i + j + 2 <= n:
                products[(i, j)] = [int(t == i + j + 1) for t in range(n)]
    R = RingPresentation(names, [0] * n, list(range(1, n + 1)), products)
    tnames = ["t" if j == 1 else f"t^{j}" for j in range(1, n + 1)]
    H = CohomologyRing([(tn, 2 * j, 0) for j, tn in enumerate(tnames, start=1)], products, 2 * n)
    # x = [L] - 1 with c_1(L) = t, so s_k(x) = t^k; powers via the product rule
    t = H.cls(2, [1])
    s_x = [t ** k for k in range(1, n + 1)]
    s = {names[0]: s_x}
    cur = s_x
    for j in range(2, n + 1):
        cur = _s_product(cur, s_x)
        s[names[j - 1]] = cur
    return SpaceModel(f"cp({n})", R, 2 * n, H, (0,), {g: tuple(v) for g, v in s.items()})


def sphere(d: int) -> SpaceModel:
    """S^d for even d = 2k: K~^0 = Z y, y^2 = 0, s_k(y) = k! u."""
    if d < 2 or d % 2:
        raise ValueError("sphere(d) needs even d >= 2")
    k = d // 2
    R = RingPresentation(["y"], [0], [k])
    H = CohomologyRing([("u", d, 0)], {}, d)
    s = [H.zero(2 * j) for j in range(1, k + 1)]
    s[k - 1] = H.cls(d, [factorial(k)])
    return SpaceModel(f"sphere({d})", R, d, H, (0,), {"y": tuple(s)})


def rp2() -> SpaceModel:
    """RP^2: K~^0 = Z/2 z, z^2 = 0, H^2 = Z/2 w, s_1(z) = w."""
    R = RingPresentation(["z"], [2], [1])
    H = CohomologyRing([("w", 2, 2)], {}, 2)
    return SpaceModel("rp2", R, 2, H, (), {"z": (H.cls(2, [1]),)})


def _rename(names: Sequence[str], taken: Sequence[str], tag: str) -> List[str]:
    out = []
    for nm in names:
        new = nm
        while new in taken or new in out:
            new = f"{new}_{tag}"
        out.append(new)
    return out


def wedge(A: SpaceModel, B: SpaceModel) -> SpaceModel:
    """A v B: reduced invariants add, cross products vanish."""
    ka, kb = A.kring.rank, B.kring.rank
    bnames = _rename(B.kring.generator_names, A.kring.generator_names, "b")
    def shift(v, off, total):
        return [0] * off + list(v) + [0] * (total - off - len(v))
    k = ka + kb
    products = {(i, j): shift(v, 0, k) for (i, j), v in A.kring.products.items()}
    products.update({(i + ka, j + ka): shift(v, ka, k) for (i, j), v in B.kring.products.items()})
    rels = [shift(r, 0, k) for r in A.kring.extra_relations] + [shift(r, ka, k) for r in B.kring.extra_relations]
    R = RingPresentation(list(A.kring.generator_names) + bnames,
                         A.kring.torsion_orders + B.kring.torsion_orders,
                         A.kring.filtration_levels + B.kring.filtration_levels, products, rels)
    dim = None if A.dim is None or B.dim is None else max(A.dim, B.dim)
    H = None
    s = None
    if A.cohomology is not None and B.cohomology is not None:
        HA, HB = A.cohomology, B.cohomology
        ha, hb = HA.ring.rank, HB.ring.rank
        hn = _rename([g for g, _, _ in HB.generators], [g for g, _, _ in HA.generators], "b")
        hgens = list(HA.generators) + [(nm, d, o) for nm, (_, d, o) in zip(hn, HB.generators)]
        hp = {(i, j): shift(v, 0, ha + hb) for (i, j), v in HA.ring.products.items()}
        hp.update({(i + ha, j + ha): shift(v, ha, ha + hb) for (i, j), v in HB.ring.products.items()})
        hr = [shift(r, 0, ha + hb) for r in HA.ring.extra_relations] + \
             [shift(r, ha, ha + hb) for r in HB.ring.extra_relations]
        H = CohomologyRing(hgens, hp, max(HA.dim_bound, HB.dim_bound), hr)
        if A.s_classes is not None and B.s_classes is not None:
            s = {}
            for src, names, off in ((A, A.kring.generator_names, 0), (B, bnames, ha)):
                for g, nm in zip(src.kring.generator_names, names):
                    s[nm] = tuple(_embed_class(H, c, off) for c in src.s_classes[g])
    assertions = tuple(sorted(_meet(A.torsion_assertions, B.torsion_assertions)))
    return SpaceModel(f"wedge({A.name},{B.name})", R, dim, H, assertions, s)


def _embed_class(H: CohomologyRing, c: CohomologyClass, off: int) -> CohomologyClass:
    v = [0] * H.ring.rank
    for i, x in enumerate(c.element.coeffs):
        v[off + i] = x
    return CohomologyClass(H, c.degree, H.ring.element(v))


def _meet(a, b):
    sa, sb = set(a), set(b)
    if 0 in sa:
        return sb
    if 0 in sb:
        return sa
    return sa & sb


def suspension_of_group(orders: Sequence[int], level: int = 1, dim: Optional[int] = None) -> SpaceModel:
    """A suspension model: K~^0 = sum of Z/order (0 = Z), all products zero."""
    orders = [int(o) for o in orders]
    if any(o < 0 or o == 1 for o in orders):
        raise ValueError("orders must be 0 (infinite) or >= 2")
    names = ["y"] if len(orders) == 1 else [f"y{i}" for i in range(1, len(orders) + 1)]
    R = RingPresentation(names, orders, [level] * len(orders))
    label = ",".join(map(str, orders))
    return SpaceModel(f"suspension({label})", R, dim, None, ())


def builtin(name: str) -> SpaceModel:
    """Parse names like point, cp2, cp(2), sphere(4), s4, rp2, wedge(rp2,cp(2)), suspension(0,3)."""
    text = name.replace(" ", "")
    node, rest = _parse_builtin(text)
    if rest:
        raise SchemaError(f"trailing text {rest!r}", "space")
    return node


def _parse_builtin(text: str):
    m = re.match(r"([a-z]+)(\d*)", text)
    if not m:
        raise SchemaError(f"cannot parse {text!r}", "space")
    word, digits = m.group(1), m.group(2)
    rest = text[m.end():]
    args: List[Any] = []
    if rest.startswith("(") and not digits:
        rest = rest[1:]
        while True:
            if rest.startswith(")"):
                rest = rest[1:]
                break
            if word == "wedge":
                sub, rest = _parse_builtin(rest)
                args.append(sub)
            else:
                num = re.match(r"-?\d+", rest)
                if not num:
                    raise SchemaError(f"expected an integer in {text!r}", "space")
                args.append(int(num.group()))
                rest = rest[num.end():]
            if rest.startswith(","):
                rest = rest[1:]
            elif not rest.startswith(")"):
                raise SchemaError(f"unbalanced parentheses in {text!r}", "space")
    elif digits:
        args = [int(digits)]
    try:
        if word == "point" and not args:
            return point(), rest
        if word == "cp" and len(args) == 1:
            return cp(args[0]), rest
        if word in ("sphere", "s") and len(args) == 1:
            return sphere(args[0]), rest
        if word == "rp" and args == [2]:
            return rp2(), rest
        if word == "wedge" and len(args) == 2:
            return wedge(args[0], args[1]), rest
        if word == "suspension" and args:
            return suspension_of_group(args), rest
    except ValueError as exc:
        raise SchemaError(str(exc), "space") from exc
    raise SchemaError(f"unknown builtin {text!r}", "space")


BUILTIN_NAMES = ("point", "cp(n)", "sphere(2k)", "rp2", "wedge(A,B)", "suspension(o1,...)")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_BIG = 2 ** 53


def _out_int(x: int):
    return str(x) if abs(x) >= _BIG else x


def _in_int(x, fld):
    if isinstance(x, bool):
        raise SchemaError("expected an integer, got a boolean", fld)
    if isinstance(x, int):
        return x
    if isinstance(x, str) and re.fullmatch(r"-?\d+", x.strip()):
        return int(x)
    raise SchemaError(f"expected an integer, got {x!r}", fld)


def _vec(v, k, fld):
    if not isinstance(v, list):
        raise SchemaError("expected a list of integers", fld)
    if len(v) != k:
        raise SchemaError(f"expected {k} entries, got {len(v)}", fld)
    return [_in_int(x, f"{fld}[{i}]") for i, x in enumerate(v)]


def _products(doc, names, fld):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", fld)
    out = {}
    for key, v in doc.items():
        parts = key.split("*")
        if len(parts) != 2 or any(p not in names for p in parts):
            raise SchemaError(f"bad product key {key!r}", f"{fld}.{key}")
        i, j = names.index(parts[0]), names.index(parts[1])
        out[(i, j)] = _vec(v, len(names), f"{fld}.{key}")
    return out


def _req(doc, key, fld):
    if key not in doc:
        raise SchemaError("missing field", f"{fld}.{key}" if fld else key)
    return doc[key]


def from_dict(doc: Dict[str, Any], check: bool = True) -> SpaceModel:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    name = _req(doc, "name", "")
    if not isinstance(name, str):
        raise SchemaError("expected a string", "name")
    gens = _req(doc, "generators", "")
    if not isinstance(gens, list):
        raise SchemaError("expected a list", "generators")
    names, orders, levels = [], [], []
    for i, g in enumerate(gens):
        fld = f"generators[{i}]"
        if not isinstance(g, dict):
            raise SchemaError("expected an object", fld)
        names.append(str(_req(g, "name", fld)))
        orders.append(_in_int(g.get("order", 0), f"{fld}.order"))
        levels.append(_in_int(_req(g, "level", fld), f"{fld}.level"))
    k = len(names)
    products = _products(doc.get("products", {}), names, "products")
    rels = [_vec(r, k, f"relations[{i}]") for i, r in enumerate(doc.get("relations", []))]
    try:
        R = RingPresentation(names, orders, levels, products, rels)
    except ValueError as exc:
        raise SchemaError(str(exc), "generators") from exc
    if check:
        rep = validate(R)
        if not rep.valid:
            raise ValidationFailed(rep)
    dim = doc.get("dim")
    dim = None if dim is None else _in_int(dim, "dim")
    H = None
    if doc.get("cohomology") is not None:
        H = _cohomology_from(doc["cohomology"])
    ta = tuple(_in_int(x, f"torsion_assertions[{i}]") for i, x in enumerate(doc.get("torsion_assertions", [])))
    s = None
    if doc.get("s_classes") is not None:
        if H is None:
            raise SchemaError("s_classes need a cohomology ring", "s_classes")
        s = {}
        for g, vecs in doc["s_classes"].items():
            if g not in names:
                raise SchemaError(f"unknown generator {g!r}", f"s_classes.{g}")
            classes = []
            for j, v in enumerate(vecs, start=1):
                fld = f"s_classes.{g}[{j - 1}]"
                vv = _vec(v, H.ring.rank, fld)
                try:
                    classes.append(CohomologyClass(H, 2 * j, H.ring.element(vv)))
                except ValueError as exc:
                    raise SchemaError(str(exc), fld) from exc
            s[g] = tuple(classes)
    try:
        return SpaceModel(name, R, dim, H, ta, s)
    except ValueError as exc:
        raise SchemaError(str(exc), "dim") from exc


def _cohomology_from(doc) -> CohomologyRing:
    fld = "cohomology"
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", fld)
    gens = _req(doc, "generators", fld)
    out = []
    for i, g in enumerate(gens):
        gf = f"{fld}.generators[{i}]"
        out.append((str(_req(g, "name", gf)), _in_int(_req(g, "degree", gf), f"{gf}.degree"),
                    _in_int(g.get("order", 0), f"{gf}.order")))
    names = [g[0] for g in out]
    products = _products(doc.get("products", {}), names, f"{fld}.products")
    rels = [_vec(r, len(names), f"{fld}.relations[{i}]") for i, r in enumerate(doc.get("relations", []))]
    try:
        return CohomologyRing(out, products, _in_int(doc.get("dim_bound", 0), f"{fld}.dim_bound"), rels)
    except ValueError as exc:
        raise SchemaError(str(exc), fld) from exc


def to_dict(M: SpaceModel) -> Dict[str, Any]:
    R = M.kring
    names = R.generator_names
    doc: Dict[str, Any] = {"name": M.name}
    if M.dim is not None:
        doc["dim"] = M.dim
    doc["generators"] = [{"name": n, "order": _out_int(o), "level": q}
                         for n, o, q in zip(names, R.torsion_orders, R.filtration_levels)]
    doc["products"] = {f"{names[i]}*{names[j]}": [_out_int(x) for x in v]
                       for (i, j), v in sorted(R.products.items())}
    if R.extra_relations:
        doc["relations"] = [[_out_int(x) for x in r] for r in R.extra_relations]
    if M.cohomology is not None:
        H = M.cohomology
        hn = H.ring.generator_names
        hdoc: Dict[str, Any] = {
            "dim_bound": H.dim_bound,
            "generators": [{"name": n, "degree": d, "order": _out_int(o)} for n, d, o in H.generators],
            "products": {f"{hn[i]}*{hn[j]}": [_out_int(x) for x in v]
                         for (i, j), v in sorted(H.ring.products.items())},
        }
        if H.ring.extra_relations:
            hdoc["relations"] = [[_out_int(x) for x in r] for r in H.ring.extra_relations]
        doc["cohomology"] = hdoc
    doc["torsion_assertions"] = list(M.torsion_assertions)
    if M.s_classes is not None:
        doc["s_classes"] = {g: [[_out_int(x) for x in c.element.coeffs] for c in M.s_classes[g]]
                            for g in names if g in M.s_classes}
    return doc


def dumps(M: SpaceModel) -> str:
    return json.dumps(to_dict(M), indent=2) + "\n"


def loads(text: str, check: bool = True) -> SpaceModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, "document", exc.lineno) from exc
    return from_dict(doc, check)


def load(path, check: bool = True) -> SpaceModel:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), check)


def save(M: SpaceModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(M))


def resolve(spec: str) -> SpaceModel:
    """A builtin name, or a path to a JSON document."""
    if spec.endswith(".json"):
        return load(spec)
    return builtin(spec)
