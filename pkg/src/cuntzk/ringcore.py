"""Finitely presented filtered commutative rings (models of reduced K^0).

A presentation is a free abelian group on named generators, modulo torsion
orders and extra relation vectors, with a multiplication table on generators
and a filtration level per generator.  There is no unit: every element is a
reduced (virtual rank zero) class, and the ring is nilpotent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .intlinalg import IntMatrix, Lattice, solve_in_quotient, AbelianGroupPresentation
from .poly import Poly


class PresentationMismatch(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


class RingPresentation:
    """Generators, relations, products and filtration levels.

    ``products`` maps index pairs ``(i, j)`` to coefficient vectors of
    ``gen_i * gen_j``; missing pairs multiply to zero, and a pair given only
    once is used for both orders.
    """

    def __init__(self, generator_names: Sequence[str], torsion_orders: Sequence[int],
                 filtration_levels: Sequence[int],
                 products: Mapping[Tuple[int, int], Sequence[int]] = None,
                 extra_relations: Iterable[Sequence[int]] = ()):
        self.generator_names = tuple(generator_names)
        k = len(self.generator_names)
        self.torsion_orders = tuple(int(t) for t in torsion_orders)
        self.filtration_levels = tuple(int(q) for q in filtration_levels)
        if len(self.torsion_orders) != k or len(self.filtration_levels) != k:
            raise ValueError("need one torsion order and one filtration level per generator")
        if len(set(self.generator_names)) != k:
            raise ValueError("generator names must be distinct")
        if any(t < 0 for t in self.torsion_orders):
            raise ValueError("torsion orders must be >= 0 (0 = infinite order)")
        if any(q < 1 for q in self.filtration_levels):
            raise ValueError("filtration levels must be >= 1")
        self.extra_relations = tuple(tuple(int(x) for x in r) for r in extra_relations)
        if any(len(r) != k for r in self.extra_relations):
            raise ValueError("relation vectors must have one entry per generator")
        self.products: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        for (i, j), v in (products or {}).items():
            v = tuple(int(x) for x in v)
            if not (0 <= i < k and 0 <= j < k) or len(v) != k:
                raise ValueError(f"bad product entry {(i, j)}")
            self.products[(i, j)] = v
        zero = (0,) * k
        self._table = [[self.products.get((i, j), self.products.get((j, i), zero))
                        for j in range(k)] for i in range(k)]

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    @cached_property
    def relation_rows(self) -> Tuple[Tuple[int, ...], ...]:
        k = self.rank
        rows = [tuple(t if i == j else 0 for j in range(k)) for i, t in enumerate(self.torsion_orders) if t]
        return tuple(rows) + self.extra_relations

    @cached_property
    def relations(self) -> Lattice:
        return Lattice(self.relation_rows, self.rank)

    def additive_group(self) -> AbelianGroupPresentation:
        return AbelianGroupPresentation(self.rank, IntMatrix.from_rows(self.relation_rows, self.rank))

    def table(self, i: int, j: int) -> Tuple[int, ...]:
        return self._table[i][j]

    @property
    def max_level(self) -> int:
        return max(self.filtration_levels, default=0)

    # -- element construction --------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "RingElement":
        if len(coeffs) != self.rank:
            raise ValueError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return RingElement(self, self.relations.reduce([int(c) for c in coeffs]))

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.rank)

    def gen(self, which) -> "RingElement":
        i = self.generator_names.index(which) if isinstance(which, str) else which
        return self.element([int(j == i) for j in range(self.rank)])

    def gens(self) -> List["RingElement"]:
        return [self.gen(i) for i in range(self.rank)]

    def _mul_raw(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        k = self.rank
        out = [0] * k
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self._table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for t, v in enumerate(row[j]):
                    if v:
                        out[t] += c * v
        return out

    def _key(self):
        return (self.generator_names, self.torsion_orders, self.filtration_levels,
                tuple(tuple(r) for r in self._table), self.extra_relations)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, RingPresentation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"RingPresentation({list(self.generator_names)})"


@dataclass(frozen=True, eq=False)
class RingElement:
    """Reduced coefficient vector in the generator basis."""

    ring: RingPresentation
    coeffs: Tuple[int, ...]

    def _same(self, other: "RingElement"):
        if not isinstance(other, RingElement):
            raise TypeError(f"expected a RingElement, got {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise PresentationMismatch("elements belong to different presentations")

    def __add__(self, other):
        self._same(other)
        return self.ring.element([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._same(other)
        return self.ring.element([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return self.ring.element([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ring.element([other * a for a in self.coeffs])
        self._same(other)
        return self.ring.element(self.ring._mul_raw(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("the reduced ring has no unit; exponent must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.ring is other.ring or self.ring == other.ring)

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        terms = []
        for c, name in zip(self.coeffs, self.ring.generator_names):
            if not c:
                continue
            body = name if abs(c) == 1 else f"{abs(c)}*{name}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"RingElement({self})"


class SubmodulePresentation:
    """Subgroup of the ring generated by vectors (always taken modulo the relations)."""

    def __init__(self, ring: RingPresentation, vectors: Iterable[Sequence[int]]):
        self.ring = ring
        rows = [tuple(v) for v in vectors] + list(ring.relation_rows)
        self.lattice = Lattice(rows, ring.rank)
        gens = []
        for row in self.lattice.basis:
            r = ring.relations.reduce(row)
            if any(r) and r not in gens:
                gens.append(r)
        self.generators: Tuple[Tuple[int, ...], ...] = tuple(gens)

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, e) -> bool:
        v = e.coeffs if isinstance(e, RingElement) else tuple(e)
        return self.lattice.contains(v)

    def reduce(self, e: RingElement) -> RingElement:
        """Canonical coset representative of ``e`` modulo this submodule."""
        return RingElement(self.ring, self.lattice.reduce(e.coeffs))

    def elements(self) -> List[RingElement]:
        return [RingElement(self.ring, g) for g in self.generators]

    def __le__(self, other: "SubmodulePresentation") -> bool:
        return self.lattice <= other.lattice

    def __eq__(self, other):
        return isinstance(other, SubmodulePresentation) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"SubmodulePresentation({[str(e) for e in self.elements()]})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def lines(self) -> List[str]:
        if self.valid:
            return ["valid"]
        return [f"{v.axiom}: {v.detail} (witness {v.witness})" for v in self.violations]


def validate(R: RingPresentation) -> ValidationReport:
    """Check the ring axioms the engine relies on; never raises."""
    report = ValidationReport()
    add = report.violations.append
    k = R.rank
    names = R.generator_names
    rel = R.relations

    for (i, j), v in R.products.items():
        w = R.products.get((j, i))
        if w is not None and rel.reduce(v) != rel.reduce(w):
            add(Violation("symmetry", (names[i], names[j]),
                          f"{names[i]}*{names[j]} != {names[j]}*{names[i]}"))

    gens = [tuple(int(a == i) for a in range(k)) for i in range(k)]
    for i, j, l in product(range(k), repeat=3):
        if i > l:
            continue
        left = R._mul_raw(R._mul_raw(gens[i], gens[j]), gens[l])
        right = R._mul_raw(gens[i], R._mul_raw(gens[j], gens[l]))
        if rel.reduce(left) != rel.reduce(right):
            add(Violation("associativity", (names[i], names[j], names[l]),
                          f"({names[i]}*{names[j]})*{names[l]} != {names[i]}*({names[j]}*{names[l]})"))

    for r, row in enumerate(R.relation_rows):
        for j in range(k):
            if not rel.contains(R._mul_raw(row, gens[j])):
                add(Violation("relations", (r, names[j]),
                              f"relation {list(row)} times {names[j]} is not a relation"))

    levels = R.filtration_levels
    for i in range(k):
        for j in range(i, k):
            prod = rel.reduce(R.table(i, j))
            need = levels[i] + levels[j]
            for t, c in enumerate(prod):
                if c and levels[t] < need:
                    add(Violation("filtration", (names[i], names[j], names[t]),
                                  f"{names[i]}*{names[j]} has a component on {names[t]} "
                                  f"(level {levels[t]} < {need})"))

    if not report.violations:
        try:
            nilpotency_index(R)
        except NotNilpotentError as exc:
            add(Violation("nilpotency", (), str(exc)))
    return report


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def _same_ring(*elems):
    R = elems[0].ring
    for e in elems[1:]:
        if e.ring is not R and e.ring != R:
            raise PresentationMismatch("elements belong to different presentations")
    return R


def add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def neg(a: RingElement) -> RingElement:
    return -a


def mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def scalar_mul(k: int, a: RingElement) -> RingElement:
    return a * k


class UnassignedVariable(KeyError):
    pass


def eval_poly(p: Poly, assignment: Mapping[str, RingElement],
              multiplier: Optional[RingElement] = None) -> RingElement:
    """Evaluate an integer polynomial at ring elements.

    The ring has no unit, so a nonzero constant term is only meaningful
    against ``multiplier``: the result is then ``multiplier * p(assignment)``.
    """
    p = p.integral()
    elems = [e for e in assignment.values()]
    if multiplier is not None:
        elems.append(multiplier)
    if not elems:
        raise UnassignedVariable("no ring elements given")
    R = _same_ring(*elems)
    powers: Dict[Tuple[str, int], RingElement] = {}

    def power(v, k):
        if (v, k) not in powers:
            powers[(v, k)] = assignment[v] if k == 1 else power(v, k - 1) * assignment[v]
        return powers[(v, k)]

    total = R.zero()
    for e, c in sorted(p.terms.items()):
        factor = multiplier
        for v, k in zip(p.variables, e):
            if not k:
                continue
            if v not in assignment:
                raise UnassignedVariable(v)
            factor = power(v, k) if factor is None else factor * power(v, k)
        if factor is None:
            raise ValueError("constant term in a reduced ring without a multiplier")
        total = total + factor * c
    return total


def ideal_power(R: RingPresentation, n: int) -> SubmodulePresentation:
    """Generating set of R^n (products of n elements)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = R.rank
    current = SubmodulePresentation(R, [tuple(int(a == i) for a in range(k)) for i in range(k)])
    for _ in range(n - 1):
        if current.is_zero():
            break
        current = SubmodulePresentation(
            R, [R._mul_raw(g, tuple(int(a == i) for a in range(k)))
                for g in current.generators for i in range(k)])
    return current


def nilpotency_index(R: RingPresentation) -> int:
    """Least n >= 1 with R^(n+1) = 0."""
    cap = R.rank + R.max_level + 1 + sum(t.bit_length() for t in R.torsion_orders)
    k = R.rank
    unit_vecs = [tuple(int(a == i) for a in range(k)) for i in range(k)]
    power = SubmodulePresentation(R, unit_vecs)
    if power.is_zero():
        return 1
    for n in range(1, cap + 1):
        nxt = SubmodulePresentation(R, [R._mul_raw(g, u) for g in power.generators for u in unit_vecs])
        if nxt.is_zero():
            return n
        if nxt == power:
            raise NotNilpotentError(f"R^{n} = R^{n + 1} != 0")
        power = nxt
    raise NotNilpotentError(f"no n <= {cap} with R^(n+1) = 0")


def filtration_submodule(R: RingPresentation, q: int) -> SubmodulePresentation:
    """Span of the generators of filtration level >= q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    k = R.rank
    return SubmodulePresentation(
        R, [tuple(int(a == i) for a in range(k)) for i in range(k) if R.filtration_levels[i] >= q])


def zero_submodule(R: RingPresentation) -> SubmodulePresentation:
    return SubmodulePresentation(R, [])


def is_divisible(e: RingElement, M: int, modulo: Optional[SubmodulePresentation] = None
                 ) -> Optional[RingElement]:
    """Some c with e - M c in ``modulo`` (zero by default), or None."""
    if M < 1:
        raise ValueError("M must be positive")
    R = e.ring
    k = R.rank
    extra = list(modulo.generators) if modulo is not None else []
    S = IntMatrix.from_rows(extra + list(R.relation_rows), k)
    A = IntMatrix(k, k, tuple(M if i == j else 0 for i in range(k) for j in range(k)))
    sol = solve_in_quotient(A, list(e.coeffs), S)
    if sol is None:
        return None
    c = R.element(sol.x)
    residue = e - c * M
    if modulo is not None and not modulo.contains(residue) or modulo is None and residue:
        raise ArithmeticError("divisibility witness failed substitution")
    return c


def multiplication_endomorphism(R: RingPresentation, a: RingElement) -> IntMatrix:
    """Matrix of h -> a*h; column i is a * gen_i (unreduced)."""
    k = R.rank
    cols = [R._mul_raw(a.coeffs, tuple(int(t == i) for t in range(k))) for i in range(k)]
    return IntMatrix(k, k, tuple(cols[j][i] for i in range(k) for j in range(k)))


@dataclass(frozen=True)
class BundleClass:
    """A vector bundle through its K-theory data: rank and [E] - rank."""

    rank: int
    reduced: RingElement

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @property
    def m(self) -> int:
        return self.rank - 1

    def __str__(self):
        return f"rank{self.rank}:[{','.join(map(str, self.reduced.coeffs))}]"
