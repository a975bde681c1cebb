"""Reproduction report and symbolic identity suite.

``reproduce`` recomputes every printed formula and worked example and diffs
the results against the golden files shipped in ``cuntzk/paper``.
``verify_identities`` runs the polynomial identities for ranges of n and m.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import polyfam
from .classify import decide_isomorphism, decide_iso_Tn, trivialization_test
from .invariants import ChernData, chern_to_s, mu_divisibility_test, q_invariant, \
    s_of_p_identity, truncated_polynomial_cohomology
from .poly import IntegralityError, Poly
from .ringcore import eval_poly, is_divisible

SECTIONS = ("polynomials", "newton", "invariants", "chern", "examples")
# examples compare rendered text; the other sections compare polynomials
_TEXT_SECTIONS = {"examples"}


def read_golden(section: str, directory: Optional[Path] = None) -> List[Tuple[str, str]]:
    if directory is None:
        text = resources.files("cuntzk").joinpath("paper").joinpath(f"{section}.golden").read_text("utf-8")
    else:
        text = (Path(directory) / f"{section}.golden").read_text("utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition(" = ")
        if not sep:
            raise ValueError(f"golden line without ' = ': {line!r}")
        out.append((key.strip(), val.strip()))
    return out


# ---------------------------------------------------------------------------
# computed values
# ---------------------------------------------------------------------------

def _chern_poly(n: int) -> Poly:
    q = polyfam.q_poly(n, None, "s")
    return q.substitute({f"s{k}": polyfam.newton_poly(k, "c") for k in range(1, n + 1)})


def grouped_text(p: Poly, outer: Sequence[str]) -> str:
    """Render p as a sum over monomials in ``outer`` with coefficients that
    are polynomials in the remaining variables, e.g. ``(m - 1)*c1^2 - 2*m*c2``."""
    inner = [v for v in p.variables if v not in outer]
    groups: Dict[tuple, Poly] = {}
    for e, c in p.terms.items():
        key = tuple(e[p.variables.index(v)] if v in p.variables else 0 for v in outer)
        mono = {tuple(e[p.variables.index(v)] for v in inner): c}
        groups[key] = groups.get(key, Poly(inner, {})) + Poly(inner, mono)
    order = sorted(groups, key=lambda k: (-sum(k), tuple(-x for x in k)))
    parts = []
    for key in order:
        coef = groups[key]
        if not coef:
            continue
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(outer, key) if k)
        lead = coef.terms[max(coef.terms, key=lambda e: (sum(e), e))]
        neg = lead < 0
        body = (-coef if neg else coef).to_text()
        if len(coef.terms) > 1:
            body = f"({body})"
        if body == "1":
            text = mono
        else:
            text = f"{body}*{mono}" if mono else body
        parts.append(("-" if neg else "+", text))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _polynomials() -> List[Tuple[str, Poly]]:
    out = [(f"p_{n}", polyfam.p_poly(n)) for n in range(1, 6)]
    out += [(f"q_{n}", polyfam.q_poly(n)) for n in range(1, 4)]
    return out


def _newton() -> List[Tuple[str, Poly]]:
    return [(f"Q_{k}", polyfam.newton_poly(k)) for k in range(1, 5)]


def _invariants() -> List[Tuple[str, Poly]]:
    return [(f"s_{n}", polyfam.q_poly(n, None, "s")) for n in range(1, 5)]


def _chern() -> List[Tuple[str, Poly]]:
    return [(f"c_{n}", _chern_poly(n)) for n in range(1, 5)]


def _examples() -> List[Tuple[str, str]]:
    from .spaces import builtin
    yn = {True: "yes", False: "no"}
    out = []
    C = builtin("cp(2)")
    E, F = C.bundle(3, [3, 0]), C.bundle(3, [1, 0])
    out.append(("cp2.E~", str(E.reduced)))
    out.append(("cp2.F~", str(F.reduced)))
    mu = mu_divisibility_test(C.kring, 2, E, F, 2)
    out.append(("cp2.p_2(E~) - p_2(F~)", str(mu.difference)))
    out.append(("cp2.mu_2 divisible by 4", yn[mu.divisible]))
    tn = decide_iso_Tn(C, E, F)
    out.append(("cp2.(E~ - F~)(2 - F~)", tn.values["product"]))
    out.append(("cp2.T_2 product divisible by 4", tn.values["divisible by 4"]))
    out.append(("cp2.isomorphic", decide_isomorphism(C, E, F).verdict.value))
    W = builtin("wedge(rp2,cp(2))")
    E, F = W.bundle(3, [1, 2, 2]), W.bundle(3, [0, 0, 0])
    out.append(("wedge.E~", str(E.reduced)))
    out.append(("wedge.F~", str(F.reduced)))
    tn = decide_iso_Tn(W, E, F)
    out.append(("wedge.(E~ - F~)(2 - F~)", tn.values["product"]))
    out.append(("wedge.T_2 product divisible by 4", tn.values["divisible by 4"]))
    out.append(("wedge.[E] - 1", f"2 + {E.reduced}"))
    out.append(("wedge.[E] - 1 divisible by 2", yn[is_divisible(E.reduced, 2) is not None]))
    out.append(("wedge.trivial", trivialization_test(W, E).verdict.value))
    out.append(("wedge.T_n path", tn.verdict.value))
    return out


_COMPUTE: Dict[str, Callable[[], list]] = {
    "polynomials": _polynomials, "newton": _newton, "invariants": _invariants,
    "chern": _chern, "examples": _examples,
}


def chern_numeric_check(max_m: int = 5, golden_dir: Optional[Path] = None) -> List[Tuple[str, bool]]:
    """q_invariant of Newton-substituted Chern classes against the golden
    Chern formulas, numerically for m = 1..max_m in a universal ring."""
    golden = dict(read_golden("chern", golden_dir))
    H = truncated_polynomial_cohomology([(f"c{k}", 2 * k) for k in range(1, 5)], 8)
    c = ChernData(0, tuple(H.cls(2 * k, {f"c{k}": 1}) for k in range(1, 5)))
    s = chern_to_s(c, 4)
    gens = {f"c{k}": c.c[k - 1].element for k in range(1, 5)}
    rows = []
    for m in range(1, max_m + 1):
        for n in range(1, 5):
            expected = Poly.parse(golden[f"c_{n}"]).substitute({"m": m})
            want = eval_poly(expected, {v: gens[v] for v in expected.variables})
            got = q_invariant(H, m, s, n).integral.element
            rows.append((f"c_{n} at m={m}", got == want))
    return rows


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class ReproductionReport:
    lines: List[str] = field(default_factory=list)
    diffs: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diffs

    def text(self) -> str:
        body = list(self.lines)
        body.append("")
        body.append(f"diffs: {len(self.diffs)}")
        body += [f"  {d}" for d in self.diffs]
        return "\n".join(body) + "\n"


def reproduce(only: Sequence[str] = SECTIONS, golden_dir: Optional[Path] = None) -> ReproductionReport:
    rep = ReproductionReport()
    for section in only:
        if section not in _COMPUTE:
            raise ValueError(f"unknown section {section!r}; choose from {', '.join(SECTIONS)}")
        golden = read_golden(section, golden_dir)
        computed = _COMPUTE[section]()
        rep.lines.append(f"[{section}]")
        gmap = dict(golden)
        for key, val in computed:
            if isinstance(val, str):
                text = val
            elif section == "chern":
                text = grouped_text(val, [f"c{k}" for k in range(1, 5)])
            else:
                text = val.to_text()
            rep.lines.append(f"{key} = {text}")
            if key not in gmap:
                rep.diffs.append(f"{section}/{key}: no golden value")
                continue
            exp = gmap[key]
            if section in _TEXT_SECTIONS:
                same = text == exp
            else:
                try:
                    same = Poly.parse(exp) == val
                except ValueError:
                    same = False
            if not same:
                rep.diffs.append(f"{section}/{key}: expected {exp}, got {text}")
        for key in gmap:
            if key not in dict(computed):
                rep.diffs.append(f"{section}/{key}: not computed")
        if section == "chern":
            for label, ok in chern_numeric_check(golden_dir=golden_dir):
                rep.lines.append(f"q_invariant {label}: {'ok' if ok else 'MISMATCH'}")
                if not ok:
                    rep.diffs.append(f"chern/q_invariant {label}: mismatch")
        rep.lines.append("")
    if rep.lines and rep.lines[-1] == "":
        rep.lines.pop()
    return rep


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

@contextmanager
def corrupted_p() -> Iterator[None]:
    """Fault injection: add x to every p_n."""
    orig = polyfam.p_poly

    def bad(n, m=None, var="x"):
        return orig(n, m, var) + Poly.var(var, 1)

    polyfam.p_poly = bad
    try:
        yield
    finally:
        polyfam.p_poly = orig


def _lemma_abc_ok(n, m) -> bool:
    try:
        polyfam.lemma_abc_decompose(n, m)
    except (ArithmeticError, IntegralityError):
        return False
    return True


def _q_ok(n, m) -> bool:
    try:
        q = polyfam.q_poly(n, m)
    except IntegralityError:
        return False
    return q == polyfam.q_closed_form(n, m) and polyfam.r_poly(n).is_integral()


def verify_identities(max_n: int = 8, max_m: int = 5) -> List[Tuple[str, bool]]:
    """Every identity as (label, holds), in a fixed order."""
    if max_n < 1 or max_m < 1:
        raise ValueError("max_n and max_m must be >= 1")
    ms: List[Optional[int]] = [None] + list(range(1, max_m + 1))
    rows = []
    for n in range(1, max_n + 1):
        for m in ms:
            tag = "m" if m is None else str(m)
            rows.append((f"recurrence n={n} m={tag}", polyfam.recurrence_check(n, m)))
            rows.append((f"T identity n={n} m={tag}", polyfam.t_identity_check(n, m)))
            rows.append((f"q integral n={n} m={tag}", _q_ok(n, m)))
        for m in range(1, max_m + 1):
            rows.append((f"decomposition n={n} m={m}", _lemma_abc_ok(n, m)))
    for j in range(1, 7):
        for k in range(1, 7):
            rows.append((f"a({j},{k})", polyfam.a_coeff(j, k) == polyfam.a_coeff_factorial(j, k)))
    for n in range(1, min(max_n, 5) + 1):
        for m in range(1, max_m + 1):
            rows.append((f"s(p_n) = ell(n) q_n n={n} m={m}", s_of_p_identity(n, m)))
    return rows
