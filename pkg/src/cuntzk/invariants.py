"""Computable invariants of O_E.

* ``mu_n``: p_n([E~]) in the filtration quotient K~^0 / K^0_{2n+2}.
* ``q_invariant``: q_n of the s-classes in H^{2n}, reduced mod m^n.
* ``chern_to_s`` and the formal s-class calculus used to check
  s_n(p_n(E~)) = ell(n) q_n(s_1, ..., s_n).

Even cohomology is modelled as a graded ring presentation whose filtration
level is half the degree, so the ring machinery carries over unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .intlinalg import AbelianGroupPresentation, IntMatrix
from .polyfam import lcm_1_to_n, newton_poly, p_poly, q_poly
from .poly import Poly
from .ringcore import (BundleClass, RingElement, RingPresentation, SubmodulePresentation,
                       eval_poly, filtration_submodule, ideal_power, is_divisible)


class RankMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

class CohomologyRing:
    """H^{2k}(X, Z) for 1 <= k <= dim_bound // 2 with cup products.

    ``generators`` is a list of ``(name, degree, order)`` (order 0 = Z);
    ``products`` maps generator index pairs to coefficient vectors.
    """

    def __init__(self, generators: Sequence[Tuple[str, int, int]],
                 products: Mapping[Tuple[int, int], Sequence[int]] = None,
                 dim_bound: int = 0, extra_relations: Sequence[Sequence[int]] = ()):
        gens = [(str(n), int(d), int(o)) for n, d, o in generators]
        if any(d < 2 or d % 2 for _, d, _ in gens):
            raise ValueError("generator degrees must be even and positive")
        self.dim_bound = int(dim_bound) or max((d for _, d, _ in gens), default=0)
        if any(d > self.dim_bound for _, d, _ in gens):
            raise ValueError("generator above dim_bound")
        self.generators = tuple(gens)
        self.degrees = tuple(d for _, d, _ in gens)
        products = dict(products or {})
        for (i, j), v in products.items():
            for t, c in enumerate(v):
                if c and self.degrees[t] != self.degrees[i] + self.degrees[j]:
                    raise ValueError(f"cup product of generators {i}, {j} is not homogeneous")
        for r in extra_relations:
            if len({self.degrees[t] for t, c in enumerate(r) if c}) > 1:
                raise ValueError("relations must be homogeneous")
        self.ring = RingPresentation([n for n, _, _ in gens], [o for _, _, o in gens],
                                     [d // 2 for d in self.degrees], products, extra_relations)

    def indices(self, degree: int) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def group(self, degree: int) -> AbelianGroupPresentation:
        idx = self.indices(degree)
        rows = [[r[i] for i in idx] for r in self.ring.relation_rows if any(r[i] for i in idx)]
        return AbelianGroupPresentation(len(idx), IntMatrix.from_rows(rows, len(idx)))

    def cls(self, degree: int, coeffs: Mapping[str, int] | Sequence[int] = ()) -> "CohomologyClass":
        """A class of the given degree from {name: coeff} or a vector over that degree."""
        idx = self.indices(degree)
        full = [0] * self.ring.rank
        if isinstance(coeffs, Mapping):
            for name, c in coeffs.items():
                i = self.ring.generator_names.index(name)
                if self.degrees[i] != degree:
                    raise ValueError(f"{name} is not in degree {degree}")
                full[i] = c
        else:
            coeffs = list(coeffs) or [0] * len(idx)
            if len(coeffs) != len(idx):
                raise ValueError(f"degree {degree} has {len(idx)} generators")
            for i, c in zip(idx, coeffs):
                full[i] = c
        return CohomologyClass(self, degree, self.ring.element(full))

    def zero(self, degree: int) -> "CohomologyClass":
        return CohomologyClass(self, degree, self.ring.zero())

    def __eq__(self, other):
        return (isinstance(other, CohomologyRing) and self.ring == other.ring
                and self.dim_bound == other.dim_bound)

    def __hash__(self):
        return hash((self.ring, self.dim_bound))

    def __repr__(self):
        return f"CohomologyRing({[n for n, _, _ in self.generators]}, dim_bound={self.dim_bound})"


@dataclass(frozen=True)
class CohomologyClass:
    H: CohomologyRing = field(repr=False)
    degree: int
    element: RingElement

    def __post_init__(self):
        if self.degree < 2 or self.degree % 2:
            raise ValueError("degree must be even and positive")
        for i, c in enumerate(self.element.coeffs):
            if c and self.H.degrees[i] != self.degree:
                raise ValueError("class is not homogeneous of its degree")

    def _wrap(self, degree, e):
        return CohomologyClass(self.H, degree, e)

    def __add__(self, other):
        if other.degree != self.degree:
            raise ValueError("adding classes of different degrees")
        return self._wrap(self.degree, self.element + other.element)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._wrap(self.degree, -self.element)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._wrap(self.degree, self.element * other)
        return self._wrap(self.degree + other.degree, self.element * other.element)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._wrap(self.degree * k, self.element ** k)

    def is_zero(self) -> bool:
        return self.element.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self.degree == other.degree and self.element == other.element

    def __hash__(self):
        return hash((self.degree, self.element))

    def __str__(self):
        return str(self.element)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(self.element.coeffs[i] for i in self.H.indices(self.degree))


def truncated_polynomial_cohomology(variables: Sequence[Tuple[str, int]], top_degree: int
                                    ) -> CohomologyRing:
    """Free graded ring on the given (name, degree) variables, truncated above ``top_degree``.

    Generators are the monomials themselves, named like ``c1^2*c2``; useful as
    a universal target for characteristic-class formulas.
    """
    names = [v for v, _ in variables]
    wts = [d // 2 for _, d in variables]
    top = top_degree // 2
    monos: List[Tuple[int, ...]] = []

    def rec(i, rest, acc):
        if i == len(names):
            if rest < top:
                monos.append(tuple(acc))
            return
        for k in range(rest // wts[i] + 1):
            rec(i + 1, rest - k * wts[i], acc + [k])

    rec(0, top, [])
    monos = [e for e in monos if any(e)]
    monos.sort(key=lambda e: (sum(k * w for k, w in zip(e, wts)), tuple(-k for k in e)))
    pos = {e: i for i, e in enumerate(monos)}
    labels = [Poly(names, {e: 1}, wts).to_text() for e in monos]
    products = {}
    for i, a in enumerate(monos):
        for j in range(i, len(monos)):
            e = tuple(x + y for x, y in zip(a, monos[j]))
            if e in pos:
                v = [0] * len(monos)
                v[pos[e]] = 1
                products[(i, j)] = v
    degrees = [2 * sum(k * w for k, w in zip(e, wts)) for e in monos]
    return CohomologyRing([(lab, d, 0) for lab, d in zip(labels, degrees)], products, top_degree)


# ---------------------------------------------------------------------------
# Chern classes and s-classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChernData:
    rank: int
    c: Tuple[CohomologyClass, ...]   # c_1, c_2, ...

    def __post_init__(self):
        for k, ck in enumerate(self.c, start=1):
            if ck.degree != 2 * k:
                raise ValueError(f"c_{k} must have degree {2 * k}")


def _classes_eval(H: CohomologyRing, p: Poly, values: Mapping[str, CohomologyClass], degree: int
                  ) -> CohomologyClass:
    assignment = {v: values[v].element for v in p.variables if v in values}
    missing = [v for v in p.variables if v not in values]
    if missing:
        raise KeyError(f"unassigned classes {missing}")
    if not p or not assignment:
        return H.zero(degree)
    return CohomologyClass(H, degree, eval_poly(p, assignment))


def chern_to_s(c: ChernData, up_to: int) -> List[CohomologyClass]:
    """s_k = Q_k(c_1, ..., c_k) for k = 1..up_to (classes above the top degree are zero)."""
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    H = c.c[0].H if c.c else None
    if H is None:
        raise ValueError("ChernData needs at least c_1 to fix the cohomology ring")
    out = []
    for k in range(1, up_to + 1):
        if 2 * k > H.dim_bound:
            out.append(H.zero(2 * k))
            continue
        Q = newton_poly(k, "c")
        vals = {f"c{i}": c.c[i - 1] if i <= len(c.c) else H.zero(2 * i) for i in range(1, k + 1)}
        out.append(_classes_eval(H, Q, vals, 2 * k))
    return out


def s_to_chern(s: Sequence[CohomologyClass], rank: int) -> ChernData:
    """Invert Newton: k c_k = sum_{i=1}^k (-1)^(i-1) c_{k-i} s_i with c_0 = 1.

    Division by k must be exact coefficientwise (torsion-free targets).
    """
    H = s[0].H
    c: List[CohomologyClass] = []
    for k in range(1, len(s) + 1):
        acc = s[k - 1] * ((-1) ** (k - 1))
        for i in range(1, k):
            acc = acc + c[k - i - 1] * s[i - 1] * ((-1) ** (i - 1))
        if any(x % k for x in acc.element.coeffs):
            raise ArithmeticError(f"k c_{k} not divisible by {k}")
        c.append(CohomologyClass(H, 2 * k, H.ring.element([x // k for x in acc.element.coeffs])))
    return ChernData(rank, tuple(c))


def _mod_power(H: CohomologyRing, degree: int, M: int) -> SubmodulePresentation:
    """M * H^degree, the kernel of reduction into H^degree(X, Z/M) in the simplified model."""
    k = H.ring.rank
    return SubmodulePresentation(H.ring, [tuple(M * int(t == i) for t in range(k)) for i in H.indices(degree)])


class QInvariant(NamedTuple):
    integral: CohomologyClass
    mod_class: CohomologyClass   # canonical representative mod m^n


def q_invariant(H: CohomologyRing, m: int, s: Sequence[CohomologyClass], n: int) -> QInvariant:
    """q_n(s_1, ..., s_n) in H^{2n}(X, Z) and its image mod m^n."""
    if len(s) < n:
        raise ValueError(f"need s_1..s_{n}")
    if 2 * n > H.dim_bound:
        return QInvariant(H.zero(2 * n), H.zero(2 * n))
    vals = {f"x{i}": s[i - 1] for i in range(1, n + 1)}
    val = _classes_eval(H, q_poly(n, m), vals, 2 * n)
    red = _mod_power(H, 2 * n, m ** n).reduce(val.element)
    return QInvariant(val, CohomologyClass(H, 2 * n, red))


class DivisibilityResult(NamedTuple):
    divisible: bool
    witness: Optional[object]
    difference: object


def _homogeneous_witness(H, degree, w):
    idx = set(H.indices(degree))
    return CohomologyClass(H, degree, H.ring.element([c if i in idx else 0 for i, c in enumerate(w.coeffs)]))


def q_divisibility_test(H: CohomologyRing, m: int, sE: Sequence[CohomologyClass],
                        sF: Sequence[CohomologyClass], n: int) -> DivisibilityResult:
    """Is q_n(s(E)) - q_n(s(F)) divisible by m^n in H^{2n}(X, Z)?"""
    diff = q_invariant(H, m, sE, n).integral - q_invariant(H, m, sF, n).integral
    if diff.is_zero():
        return DivisibilityResult(True, H.zero(2 * n), diff)
    w = is_divisible(diff.element, m ** n)
    if w is None:
        return DivisibilityResult(False, None, diff)
    # relations are homogeneous, so the degree-2n part of a witness is a witness
    w = _homogeneous_witness(H, 2 * n, w)
    if w * (m ** n) != diff:
        raise ArithmeticError("homogeneous witness failed substitution")
    return DivisibilityResult(True, w, diff)


class LineBundleRow(NamedTuple):
    n: int
    q_at_ones: int
    divisible: bool
    difference: CohomologyClass


def q_at_ones(n: int, m: int) -> int:
    q = q_poly(n, m)
    return q.evaluate({v: 1 for v in q.variables})


def line_bundle_q_test(H: CohomologyRing, m: int, c1L: CohomologyClass, c1Lp: CohomologyClass,
                       max_n: int) -> List[LineBundleRow]:
    """q_n(1, ..., 1)(c_1(L)^n - c_1(L')^n) divisible by m^n, for n = 1..max_n."""
    if c1L.degree != 2 or c1Lp.degree != 2:
        raise ValueError("first Chern classes live in degree 2")
    rows = []
    for n in range(1, max_n + 1):
        qn = q_at_ones(n, m)
        if 2 * n > H.dim_bound:
            rows.append(LineBundleRow(n, qn, True, H.zero(2 * n)))
            continue
        diff = (c1L ** n - c1Lp ** n) * qn
        ok = diff.is_zero() or is_divisible(diff.element, m ** n) is not None
        rows.append(LineBundleRow(n, qn, ok, diff))
    return rows


# ---------------------------------------------------------------------------
# mu_n
# ---------------------------------------------------------------------------

def _check_rank(m, *bundles):
    for E in bundles:
        if E.rank != m + 1:
            raise RankMismatch(f"bundle of rank {E.rank} does not match m = {m}")


def p_value(m: int, n: int, a: RingElement) -> RingElement:
    return eval_poly(p_poly(n, m), {"x": a})


def mu_n(R: RingPresentation, m: int, E: BundleClass, n: int) -> RingElement:
    """Canonical representative of p_n([E~]) modulo K^0_{2n+2}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_rank(m, E)
    return filtration_submodule(R, n + 1).reduce(p_value(m, n, E.reduced))


def mu_divisibility_test(R: RingPresentation, m: int, E: BundleClass, F: BundleClass, n: int
                         ) -> DivisibilityResult:
    """Is p_n([E~]) - p_n([F~]) divisible by m^n modulo K^0_{2n+2}?"""
    _check_rank(m, E, F)
    diff = p_value(m, n, E.reduced) - p_value(m, n, F.reduced)
    w = is_divisible(diff, m ** n, filtration_submodule(R, n + 1))
    return DivisibilityResult(w is not None, w, diff)


class TowerCheck(NamedTuple):
    holds: bool
    failures: Tuple[str, ...]


def mu_tower_check(R: RingPresentation, m: int, E: BundleClass, n: int, k: int) -> TowerCheck:
    """mu_{n+k} = (ell(n+k)/ell(n)) m^k mu_n exactly, and each lower step
    (ell(j)/ell(j-1)) m mu_{j-1} = mu_j modulo K^0_{2j}, for 2 <= j <= n.
    """
    if not ideal_power(R, n + 1).is_zero():
        raise ValueError(f"K~^0 to the power {n + 1} is not zero")
    if k < 0:
        raise ValueError("k must be >= 0")
    _check_rank(m, E)
    a = E.reduced
    fails = []
    top = p_value(m, n + k, a)
    scaled = p_value(m, n, a) * (lcm_1_to_n(n + k) // lcm_1_to_n(n) * m ** k)
    if top != scaled:
        fails.append(f"mu_{n + k} != (ell({n + k})/ell({n})) m^{k} mu_{n}")
    for j in range(2, n + 1):
        lhs = p_value(m, j - 1, a) * (lcm_1_to_n(j) // lcm_1_to_n(j - 1) * m)
        if not filtration_submodule(R, j).contains(lhs - p_value(m, j, a)):
            fails.append(f"mu_{j} != (ell({j})/ell({j - 1})) m mu_{j - 1} mod level {j}")
    return TowerCheck(not fails, tuple(fails))


# ---------------------------------------------------------------------------
# formal s-classes
# ---------------------------------------------------------------------------

class FormalSClassExpression:
    """s_1, ..., s_N of a virtual rank-zero class, as polynomials in formal symbols.

    Sums are additive; products follow s_k(EF) = sum_{i+j=k} C(k, i) s_i(E) s_j(F)
    with s_0 = 0 (reduced classes), which also makes s_n vanish on (n+1)-fold
    products.
    """

    def __init__(self, components: Sequence[Poly]):
        self.components = tuple(components)

    @classmethod
    def generic(cls, N: int, prefix: str = "s") -> "FormalSClassExpression":
        names = tuple(f"{prefix}{i}" for i in range(1, N + 1))
        wts = tuple(range(1, N + 1))
        return cls([Poly(names, {tuple(int(j == i) for j in range(N)): 1}, wts) for i in range(N)])

    @property
    def N(self) -> int:
        return len(self.components)

    def _check(self, other):
        if other.N != self.N:
            raise ValueError("formal classes truncated at different orders")

    def __add__(self, other):
        self._check(other)
        return FormalSClassExpression([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return FormalSClassExpression([a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, other):
        if isinstance(other, int):
            return FormalSClassExpression([a * other for a in self.components])
        self._check(other)
        out = []
        for k in range(1, self.N + 1):
            acc = self.components[0] * 0
            for i in range(1, k):
                acc = acc + self.components[i - 1] * other.components[k - i - 1] * comb(k, i)
            out.append(acc)
        return FormalSClassExpression(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("exponent must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def s(self, k: int) -> Poly:
        return self.components[k - 1]

    def __eq__(self, other):
        return isinstance(other, FormalSClassExpression) and self.components == other.components

    __hash__ = None


def s_of_polynomial(p: Poly, E: FormalSClassExpression, var: str = "x") -> FormalSClassExpression:
    """s-classes of p(E) for an integer polynomial p without constant term."""
    p = p.integral()
    if var not in p.variables:
        raise ValueError(f"{var} does not occur in the polynomial")
    i = p.variables.index(var)
    others = [v for v in p.variables if v != var]
    if others:
        raise ValueError(f"unexpected variables {others}")
    total = E * 0
    for e, c in p.terms.items():
        if e[i] == 0:
            raise ValueError("constant term has no s-classes in rank zero")
        total = total + (E ** e[i]) * c
    return total


def s_of_p_identity(n: int, m: int) -> bool:
    """s_n(p_n(E~)) == ell(n) q_n(s_1(E), ..., s_n(E)) in the formal s-symbols."""
    E = FormalSClassExpression.generic(n, "x")
    lhs = s_of_polynomial(p_poly(n, m), E).s(n)
    rhs = q_poly(n, m) * lcm_1_to_n(n)
    return lhs == rhs
