"""The relation a ~ b  <=>  a = b + m h + b h  on a nilpotent filtered ring.

Equivalently m + a = (m + b)(1 + h).  Decisions are a single linear solve in
h; ``brute_force_equivalent`` is an independent enumeration kept as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial, gcd, prod
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .intlinalg import (AbelianGroupPresentation, IntMatrix, Lattice, smith_normal_form,
                        solve_in_quotient, tensor_with_zmod, tor_with_zmod)
from .polyfam import T_poly, p_poly
from .ringcore import (RingElement, RingPresentation, eval_poly, ideal_power, is_divisible,
                       multiplication_endomorphism, zero_submodule)


class HypothesisError(ValueError):
    """A theorem's hypotheses do not hold for the given input."""

    def __init__(self, message: str, failed: Sequence[str] = ()):
        super().__init__(message)
        self.failed = tuple(failed) or (message,)


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class EquivalenceWitness:
    h: RingElement


def _check_m(m):
    if m < 1:
        raise ValueError("m must be >= 1")


def relation_holds(m: int, a: RingElement, b: RingElement, h: RingElement) -> bool:
    return a == b + h * m + b * h


def are_equivalent(R: RingPresentation, m: int, a: RingElement, b: RingElement
                   ) -> Optional[EquivalenceWitness]:
    """Solve (m + b) h = a - b for h, or return None."""
    _check_m(m)
    k = R.rank
    Mb = multiplication_endomorphism(R, b)
    A = IntMatrix(k, k, tuple(Mb[i, j] + (m if i == j else 0) for i in range(k) for j in range(k)))
    diff = a - b
    sol = solve_in_quotient(A, list(diff.coeffs), IntMatrix.from_rows(R.relation_rows, k))
    if sol is None:
        return None
    h = R.element(sol.x)
    if not relation_holds(m, a, b, h):
        raise ArithmeticError("equivalence witness failed substitution")
    return EquivalenceWitness(h)


def brute_force_equivalent(R: RingPresentation, m: int, a: RingElement, b: RingElement,
                           bound: int = 8, cap: int = 2_000_000) -> Optional[EquivalenceWitness]:
    """Enumerate h (finite-order coordinates fully, others in [-bound, bound]).

    Returns the first witness in lexicographic order of coefficient vectors.
    """
    _check_m(m)
    ranges = [range(t) if t else range(-bound, bound + 1) for t in R.torsion_orders]
    if prod(len(r) for r in ranges) > cap:
        raise SearchSpaceTooLarge(f"{prod(len(r) for r in ranges)} candidates exceed cap {cap}")
    # h -> m h + b h is linear: take its values on generators from ring products
    k = R.rank
    cols = [list((g * m + b * g).coeffs) for g in R.gens()]
    target = (a - b).coeffs
    reduce = R.relations.reduce
    for coeffs in product(*ranges):
        v = [0] * k
        for c, col in zip(coeffs, cols):
            if c:
                for i, x in enumerate(col):
                    v[i] += c * x
        if reduce(v) == target:
            h = R.element(coeffs)
            if not relation_holds(m, a, b, h):
                raise ArithmeticError("enumerated witness failed substitution")
            return EquivalenceWitness(h)
    return None


# ---------------------------------------------------------------------------
# filtration quotients R_k / R_{k+1}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationQuotient:
    level: int
    indices: Tuple[int, ...]           # generators of exactly this level
    group: AbelianGroupPresentation    # presentation of R_k / R_{k+1} on those generators


def filtration_quotients(R: RingPresentation) -> List[FiltrationQuotient]:
    """R_k/R_{k+1} for k = 1..max level, presented on the level-k generators."""
    levels = R.filtration_levels
    order = sorted(range(R.rank), key=lambda i: (levels[i], i))
    perm_rows = [tuple(row[i] for i in order) for row in R.relation_rows]
    lat = Lattice(perm_rows, R.rank)
    out = []
    pos = 0
    for k in range(1, R.max_level + 1):
        block = [i for i in order if levels[i] == k]
        lo, hi = pos, pos + len(block)
        rels = [row[lo:hi] for row, piv in zip(lat.basis, lat.pivots) if piv >= lo]
        rels = [r for r in rels if any(r)]
        out.append(FiltrationQuotient(
            k, tuple(block), AbelianGroupPresentation(len(block), IntMatrix.from_rows(rels, len(block)))))
        pos = hi
    return out


def tor_hypothesis_failures(R: RingPresentation, m: int) -> List[int]:
    """Levels k with Tor(R_k/R_{k+1}, Z/m) != 0."""
    return [q.level for q in filtration_quotients(R) if not tor_with_zmod(q.group, m).is_tor_free]


def _require_tor_free(R, m):
    bad = tor_hypothesis_failures(R, m)
    if bad:
        raise HypothesisError(f"Tor(R_{bad[0]}/R_{bad[0] + 1}, Z/{m}) != 0",
                              [f"Tor(R_{k}/R_{k + 1}, Z/{m}) != 0" for k in bad])


# ---------------------------------------------------------------------------
# counting and canonical representatives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _LevelLift:
    quotient: FiltrationQuotient
    V: IntMatrix
    V_inv: IntMatrix
    free_coords: Tuple[int, ...]


def _level_lifts(R: RingPresentation) -> List[_LevelLift]:
    lifts = []
    for q in filtration_quotients(R):
        n = q.group.num_generators
        if q.group.relations.rows:
            snf = smith_normal_form(q.group.relations)
            V, Vinv, rank = snf.V, snf.V_inv, snf.rank
        else:
            V = Vinv = IntMatrix.identity(n)
            rank = 0
        lifts.append(_LevelLift(q, V, Vinv, tuple(range(rank, n))))
    return lifts


@dataclass(frozen=True)
class RepresentativeSet:
    reps: Tuple[RingElement, ...]
    levels: Tuple[Tuple[RingElement, ...], ...]   # A_1, ..., A_n


def _lift_element(R, lift: _LevelLift, y: Sequence[int]) -> RingElement:
    # y in SNF coordinates -> level-k generator coefficients v = y V^{-1}
    n = len(lift.quotient.indices)
    v = [sum(y[i] * lift.V_inv[i, j] for i in range(n)) for j in range(n)]
    full = [0] * R.rank
    for idx, c in zip(lift.quotient.indices, v):
        full[idx] = c
    return R.element(full)


def _level_set(R, lift: _LevelLift, m: int) -> Tuple[RingElement, ...]:
    n = len(lift.quotient.indices)
    out = []
    for vals in product(range(m), repeat=len(lift.free_coords)):
        y = [0] * n
        for c, v in zip(lift.free_coords, vals):
            y[c] = v
        out.append(_lift_element(R, lift, y))
    return tuple(out)


def canonical_representatives(R: RingPresentation, m: int) -> RepresentativeSet:
    """One element per class of R/~ (requires Tor(R_k/R_{k+1}, Z/m) = 0)."""
    _check_m(m)
    _require_tor_free(R, m)
    levels = tuple(_level_set(R, lift, m) for lift in _level_lifts(R))
    reps = []
    for choice in product(*levels):
        total = R.zero()
        for a in choice:
            total = total + a
        reps.append(total)
    return RepresentativeSet(tuple(reps), levels)


def count_classes(R: RingPresentation, m: int) -> int:
    """|R/~| = prod_k |R_k/R_{k+1} (x) Z/m| under the Tor hypothesis."""
    _check_m(m)
    _require_tor_free(R, m)
    return prod(tensor_with_zmod(q.group, m).cardinality for q in filtration_quotients(R))


class Reduction(NamedTuple):
    rep: RingElement
    chain: Tuple[RingElement, ...]   # h_k of each descent step
    witness: EquivalenceWitness     # rep = x + m H + x H


def reduce_to_representative(R: RingPresentation, m: int, x: RingElement) -> Reduction:
    """Walk x down the filtration onto its canonical representative."""
    _check_m(m)
    _require_tor_free(R, m)
    lifts = _level_lifts(R)
    k_all = R.rank
    levels = R.filtration_levels
    chosen = R.zero()      # a_1 + ... + a_{k-1}
    xk = x
    chain = []
    H = R.zero()
    for lift in lifts:
        k = lift.quotient.level
        idx = lift.quotient.indices
        n = len(idx)
        # pi_k(x_k): SNF coordinates of the level-k part, free coordinates mod m
        v = [xk.coeffs[i] for i in idx]
        y = [sum(v[j] * lift.V[j, i] for j in range(n)) for i in range(n)]
        ya = [0] * n
        for c in lift.free_coords:
            ya[c] = y[c] % m
        ak = _lift_element(R, lift, ya)
        # a_k = x_k + m h_k + y_{k+1}, with h_k in R_k and y_{k+1} in R_{k+1}
        cols = [i for i in range(k_all) if levels[i] >= k]
        A = IntMatrix(k_all, len(cols), tuple(m if i == c else 0 for i in range(k_all) for c in cols))
        upper = [tuple(int(t == i) for t in range(k_all)) for i in range(k_all) if levels[i] > k]
        S = IntMatrix.from_rows(upper + list(R.relation_rows), k_all)
        sol = solve_in_quotient(A, list((ak - xk).coeffs), S)
        if sol is None:
            raise ArithmeticError(f"descent failed at level {k}")
        hv = [0] * k_all
        for c, val in zip(cols, sol.x):
            hv[c] = val
        hk = R.element(hv)
        y_next = ak - xk - hk * m
        x_next = (chosen + xk) * hk - y_next
        chain.append(hk)
        H = H + hk + H * hk
        chosen = chosen + ak
        xk = x_next
    if xk:
        raise ArithmeticError("descent did not terminate inside the filtration")
    rep = chosen
    if not relation_holds(m, rep, x, H):
        raise ArithmeticError("composite descent witness failed substitution")
    return Reduction(rep, tuple(chain), EquivalenceWitness(H))


# ---------------------------------------------------------------------------
# criteria in terms of T_n and p_n
# ---------------------------------------------------------------------------

class LemmaCheck(NamedTuple):
    value: RingElement
    expected: RingElement
    holds: bool


def _require_power_zero(R, n):
    if not ideal_power(R, n + 1).is_zero():
        raise HypothesisError(f"R^{n + 1} != 0")


def t_product(m: int, n: int, a: RingElement, b: RingElement) -> RingElement:
    """(a - b) T_n(b)."""
    return eval_poly(T_poly(n, m), {"b": b}, multiplier=a - b)


def lemma_b_forward(R: RingPresentation, m: int, n: int, a: RingElement, b: RingElement,
                    h: RingElement) -> LemmaCheck:
    """a = b + m h + b h  implies  (a - b) T_n(b) = m^n h, when R^(n+1) = 0."""
    _require_power_zero(R, n)
    if not relation_holds(m, a, b, h):
        raise HypothesisError("a != b + m h + b h")
    lhs = t_product(m, n, a, b)
    rhs = h * m ** n
    return LemmaCheck(lhs, rhs, lhs == rhs)


def lemma_b_converse(R: RingPresentation, m: int, n: int, a: RingElement, b: RingElement,
                     h: RingElement) -> LemmaCheck:
    """(a - b) T_n(b) = m^n h  implies  m^n (a - b - m h - b h) = 0."""
    _require_power_zero(R, n)
    if t_product(m, n, a, b) != h * m ** n:
        raise HypothesisError("(a - b) T_n(b) != m^n h")
    value = (a - b - h * m - b * h) * m ** n
    return LemmaCheck(value, R.zero(), value.is_zero())


class LemmaCDecision(NamedTuple):
    equivalent: bool
    n: int
    difference: RingElement
    witness: Optional[RingElement]


def lemma_c_decide(R: RingPresentation, m: int, a: RingElement, b: RingElement) -> LemmaCDecision:
    """Decide a ~ b by divisibility of p_n(a) - p_n(b) by m^n.

    Needs R_{n+1} = 0 (n = filtration depth), gcd(m, n!) = 1 and
    Tor(R_k/R_{k+1}, Z/m) = 0 for every k.
    """
    _check_m(m)
    n = max(R.max_level, 1)
    failed = []
    if gcd(m, factorial(n)) != 1:
        failed.append(f"gcd({m}, {n}!) = {gcd(m, factorial(n))} != 1")
    failed += [f"Tor(R_{k}/R_{k + 1}, Z/{m}) != 0" for k in tor_hypothesis_failures(R, m)]
    if failed:
        raise HypothesisError("; ".join(failed), failed)
    p = p_poly(n, m)
    diff = eval_poly(p, {"x": a}) - eval_poly(p, {"x": b})
    w = is_divisible(diff, m ** n, zero_submodule(R))
    return LemmaCDecision(w is not None, n, diff, w)
