"""Decision procedures for isomorphism and embedding of O_E.

Every procedure returns a ``DecisionReport``.  YES verdicts carry a witness
that has been checked by substitution; hypothesis checks are logged whether
or not they pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import factorial, gcd, prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .equivrel import are_equivalent, tor_hypothesis_failures
from .intlinalg import IntMatrix, solve_in_quotient, tensor_with_zmod, tor_with_zmod
from .invariants import CohomologyClass, CohomologyRing
from .ringcore import (BundleClass, RingElement, RingPresentation, eval_poly, is_divisible,
                       multiplication_endomorphism, nilpotency_index)
from .polyfam import T_poly, p_poly

__all__ = [
    "BundleClass", "SpaceModel", "Verdict", "DecisionReport", "RankOneError", "NotASuspension",
    "decide_embedding", "decide_isomorphism", "trivialization_test", "decide_iso_Tn",
    "decide_iso_pn", "count_algebras", "decide_line_bundle", "decide_suspension",
]


class RankOneError(ValueError):
    """Rank-one bundles are handled by ``decide_line_bundle`` only."""


class NotASuspension(ValueError):
    pass


@dataclass(frozen=True)
class SpaceModel:
    """A space through its reduced K-ring and optional cohomology.

    ``torsion_assertions`` lists the m for which the user asserts
    Tor(H^*(X, Z), Z/m) = 0; the entry 0 asserts it for every m.
    ``s_classes`` maps each K-ring generator name to (s_1, s_2, ...).
    """

    name: str
    kring: RingPresentation
    dim: Optional[int] = None
    cohomology: Optional[CohomologyRing] = None
    torsion_assertions: Tuple[int, ...] = ()
    s_classes: Optional[Mapping[str, Tuple[CohomologyClass, ...]]] = None

    def __post_init__(self):
        if self.dim is not None:
            if self.dim < 0:
                raise ValueError("dim must be >= 0")
            if self.kring.max_level > self.dim // 2:
                raise ValueError(f"filtration level {self.kring.max_level} exceeds dim/2 = {self.dim // 2}")

    def asserts_torsion_free(self, m: int) -> bool:
        return 0 in self.torsion_assertions or m in self.torsion_assertions

    def bundle(self, rank: int, coeffs: Sequence[int]) -> BundleClass:
        return BundleClass(rank, self.kring.element(coeffs))

    def s_of(self, a: RingElement, up_to: int) -> List[CohomologyClass]:
        """s_1..s_up_to of a reduced class, by additivity over the generators."""
        if self.s_classes is None or self.cohomology is None:
            raise ValueError(f"{self.name} carries no s-class data")
        H = self.cohomology
        out = []
        for k in range(1, up_to + 1):
            acc = H.zero(2 * k)
            for c, g in zip(a.coeffs, self.kring.generator_names):
                sk = self.s_classes[g]
                if c and k <= len(sk):
                    acc = acc + sk[k - 1] * c
            out.append(acc)
        return out

    def __eq__(self, other):
        if not isinstance(other, SpaceModel):
            return NotImplemented
        def sc(M):
            if M.s_classes is None:
                return None
            return {g: tuple((c.degree, c.element.coeffs) for c in v) for g, v in M.s_classes.items()}
        return (self.name, self.kring, self.dim, self.cohomology, tuple(self.torsion_assertions), sc(self)) == \
               (other.name, other.kring, other.dim, other.cohomology, tuple(other.torsion_assertions), sc(other))

    __hash__ = None


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"
    UNDECIDED = "undecided"


@dataclass
class DecisionReport:
    verdict: Verdict
    theorem_path: str
    witness: Optional[Tuple[int, RingElement]] = None
    hypothesis_log: List[Tuple[str, bool]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    values: Dict[str, str] = field(default_factory=dict)

    @property
    def hypotheses_met(self) -> bool:
        return all(ok for _, ok in self.hypothesis_log)

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            r, h = self.witness
            w = {"rank": r, "reduced": [str(c) for c in h.coeffs], "text": str(h)}
        return {
            "verdict": self.verdict.value,
            "theorem_path": self.theorem_path,
            "witness": w,
            "hypotheses": [{"condition": c, "holds": ok} for c, ok in self.hypothesis_log],
            "notes": list(self.notes),
            "values": dict(self.values),
        }

    def lines(self) -> List[str]:
        out = [f"verdict: {self.verdict.value}", f"path: {self.theorem_path}"]
        if self.witness is not None:
            r, h = self.witness
            out.append(f"witness: h = {r} + ({h})" if h else f"witness: h = {r}")
        out += [f"hypothesis: {c}: {'ok' if ok else 'FAILED'}" for c, ok in self.hypothesis_log]
        out += [f"{k}: {v}" for k, v in self.values.items()]
        out += [f"note: {n}" for n in self.notes]
        return out


def _check_bundles(X: SpaceModel, *bundles: BundleClass):
    for E in bundles:
        if E.rank < 2:
            raise RankOneError("rank-one bundles: use decide_line_bundle")
        if E.reduced.ring != X.kring:
            raise ValueError("bundle does not belong to the space's K-ring")


def _m_of(E: BundleClass, F: BundleClass) -> Optional[int]:
    return E.rank - 1 if E.rank == F.rank else None


def _rank_log(E, F):
    return (f"rank E = rank F = {E.rank}" if E.rank == F.rank
            else f"rank E = rank F ({E.rank} vs {F.rank})", E.rank == F.rank)


# ---------------------------------------------------------------------------
# general criterion
# ---------------------------------------------------------------------------

def decide_embedding(X: SpaceModel, E: BundleClass, F: BundleClass) -> DecisionReport:
    """Is there h in K^0(X) with 1 - [E] = (1 - [F]) h ?"""
    _check_bundles(X, E, F)
    R = X.kring
    rep = DecisionReport(Verdict.NO, "embedding")
    num, den = E.rank - 1, F.rank - 1
    if num % den:
        rep.notes.append(f"rank equation {den}*r = {num} has no integer solution")
        return rep
    r = num // den
    rep.values["r"] = str(r)
    # ((1 - rank F) I - M_F) h~ = r F~ - E~
    k = R.rank
    MF = multiplication_endomorphism(R, F.reduced)
    A = IntMatrix(k, k, tuple((1 - F.rank if i == j else 0) - MF[i, j] for i in range(k) for j in range(k)))
    rhs = F.reduced * r - E.reduced
    sol = solve_in_quotient(A, list(rhs.coeffs), IntMatrix.from_rows(R.relation_rows, k))
    if sol is None:
        rep.notes.append("reduced equation has no solution")
        return rep
    h = R.element(sol.x)
    # 1 - [E] = (1 - [F])(r + h~), split into rank and reduced parts
    if not (1 - E.rank == (1 - F.rank) * r
            and -E.reduced == h * (1 - F.rank) - F.reduced * r - F.reduced * h):
        raise ArithmeticError("embedding witness failed substitution")
    rep.verdict = Verdict.YES
    rep.witness = (r, h)
    return rep


def decide_isomorphism(X: SpaceModel, E: BundleClass, F: BundleClass) -> DecisionReport:
    """Isomorphism: a witness h of virtual rank one, i.e. E~ ~ F~ for m = rank - 1."""
    _check_bundles(X, E, F)
    rep = DecisionReport(Verdict.NO, "isomorphism")
    rep.hypothesis_log.append(_rank_log(E, F))
    m = _m_of(E, F)
    if m is None:
        rep.notes.append("ranks differ, so the fibres O_{m+1} differ")
        return rep
    w = are_equivalent(X.kring, m, E.reduced, F.reduced)
    if w is not None:
        rep.verdict = Verdict.YES
        rep.witness = (1, w.h)
    return rep


def trivialization_test(X: SpaceModel, E: BundleClass) -> DecisionReport:
    """O_E is trivial iff [E] - 1 = m + E~ is divisible by m."""
    _check_bundles(X, E)
    m = E.rank - 1
    rep = DecisionReport(Verdict.NO, "trivialization")
    rep.values["[E]-1"] = f"{m} + ({E.reduced})" if E.reduced else str(m)
    c = is_divisible(E.reduced, m)
    if c is None:
        rep.notes.append(f"[E] - 1 is not divisible by {m}")
    else:
        rep.verdict = Verdict.YES
        rep.witness = (1, c)
    return rep


# ---------------------------------------------------------------------------
# criteria in terms of T_n and p_n
# ---------------------------------------------------------------------------

def decide_iso_Tn(X: SpaceModel, E: BundleClass, F: BundleClass) -> DecisionReport:
    """(E~ - F~) T_n(F~) divisible by m^n, n the nilpotency index; needs Tor(K^0, Z/m) = 0."""
    _check_bundles(X, E, F)
    R = X.kring
    rep = DecisionReport(Verdict.HYPOTHESIS_NOT_MET, "T_n")
    rep.hypothesis_log.append(_rank_log(E, F))
    m = _m_of(E, F)
    if m is None:
        return rep
    n = nilpotency_index(R)
    rep.values["n"] = str(n)
    rep.hypothesis_log.append((f"K~^0 to the power {n + 1} is zero", True))
    prod_ = eval_poly(T_poly(n, m), {"b": F.reduced}, multiplier=E.reduced - F.reduced)
    w = is_divisible(prod_, m ** n)
    rep.values["product"] = str(prod_)
    rep.values[f"divisible by {m ** n}"] = "yes" if w is not None else "no"
    tor = tor_with_zmod(R.additive_group(), m)
    rep.hypothesis_log.append((f"Tor(K^0(X), Z/{m}) = 0", tor.is_tor_free))
    if not tor.is_tor_free:
        if w is not None:
            rep.notes.append("the divisibility test passes here, but without the Tor hypothesis "
                             "it does not imply isomorphism")
        return rep
    rep.verdict = Verdict.YES if w is not None else Verdict.NO
    if w is not None:
        iso = are_equivalent(R, m, E.reduced, F.reduced)
        if iso is None:
            raise ArithmeticError("T_n criterion disagrees with the direct solve")
        rep.witness = (1, iso.h)
    return rep


def decide_iso_pn(X: SpaceModel, E: BundleClass, F: BundleClass) -> DecisionReport:
    """p_n(E~) - p_n(F~) divisible by m^n for n = floor(d/2).

    Needs gcd(m, n!) = 1, the user's torsion assertion, and the ring-level
    consequence Tor(K^0_{2q}/K^0_{2q+2}, Z/m) = 0 for every q.
    """
    _check_bundles(X, E, F)
    R = X.kring
    rep = DecisionReport(Verdict.HYPOTHESIS_NOT_MET, "p_n")
    rep.hypothesis_log.append(_rank_log(E, F))
    m = _m_of(E, F)
    if m is None:
        return rep
    if X.dim is None:
        rep.hypothesis_log.append(("dimension known", False))
        return rep
    half = X.dim // 2
    n = max(half, 1)
    rep.values["n"] = str(n)
    g = gcd(m, factorial(half))
    rep.hypothesis_log.append((f"gcd({m}, {half}!) = 1", g == 1))
    rep.hypothesis_log.append((f"asserted Tor(H^*(X), Z/{m}) = 0", X.asserts_torsion_free(m)))
    bad = tor_hypothesis_failures(R, m)
    rep.hypothesis_log.append((f"Tor(K^0_2q/K^0_2q+2, Z/{m}) = 0 for all q", not bad))
    p = p_poly(n, m)
    diff = eval_poly(p, {"x": E.reduced}) - eval_poly(p, {"x": F.reduced})
    w = is_divisible(diff, m ** n)
    rep.values["difference"] = str(diff)
    rep.values[f"divisible by {m ** n}"] = "yes" if w is not None else "no"
    if g != 1 and w is not None:
        rep.notes.append("coprimality is necessary: with m = 2 on CP^2, p_2(3x) - p_2(x) = 8(x - x^2) "
                         "is divisible by 4 although the algebras are not isomorphic")
    if not rep.hypotheses_met:
        return rep
    rep.verdict = Verdict.YES if w is not None else Verdict.NO
    if w is not None:
        iso = are_equivalent(R, m, E.reduced, F.reduced)
        if iso is None:
            raise ArithmeticError("p_n criterion disagrees with the direct solve")
        rep.witness = (1, iso.h)
    return rep


def decide_suspension(SX: SpaceModel, m: int, E: BundleClass, F: BundleClass) -> DecisionReport:
    """With all products zero, E~ ~ F~ iff E~ - F~ is in m K^0."""
    R = SX.kring
    if any(any(v) for v in R.products.values()):
        raise NotASuspension(f"{SX.name} has nonzero products")
    _check_bundles(SX, E, F)
    rep = DecisionReport(Verdict.NO, "suspension")
    rep.hypothesis_log.append((f"rank E = rank F = {m + 1}", E.rank == F.rank == m + 1))
    if not rep.hypotheses_met:
        rep.verdict = Verdict.HYPOTHESIS_NOT_MET
        return rep
    h = is_divisible(E.reduced - F.reduced, m)
    if h is not None:
        if E.reduced != F.reduced + h * m + F.reduced * h:
            raise ArithmeticError("suspension witness failed substitution")
        rep.verdict = Verdict.YES
        rep.witness = (1, h)
    return rep


# ---------------------------------------------------------------------------
# counting and line bundles
# ---------------------------------------------------------------------------

def count_algebras(X: SpaceModel, m: int) -> DecisionReport:
    """|O_{m+1}(X)| = |K~^0(X) (x) Z/m| when m >= (d - 3)/2 and H^* has no m-torsion."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rep = DecisionReport(Verdict.HYPOTHESIS_NOT_MET, "count")
    if X.dim is None:
        rep.hypothesis_log.append(("dimension known", False))
        return rep
    bound = -((3 - X.dim) // 2)  # ceil((d - 3) / 2)
    rep.hypothesis_log.append((f"m >= ceil((d-3)/2) = {bound}", m >= bound))
    rep.hypothesis_log.append((f"asserted Tor(H^*(X), Z/{m}) = 0", X.asserts_torsion_free(m)))
    count = tensor_with_zmod(X.kring.additive_group(), m).cardinality
    rep.values["|K~^0 (x) Z/m|"] = str(count)
    if X.cohomology is not None:
        H = X.cohomology
        hc = prod(tensor_with_zmod(H.group(d), m).cardinality for d in sorted(set(H.degrees)))
        rep.values["|H~^even(X, Z/m)|"] = str(hc)
        rep.hypothesis_log.append(("|K~^0 (x) Z/m| = |H~^even(X, Z/m)|", hc == count))
    if not rep.hypotheses_met:
        rep.notes.append("both hypotheses are needed: S^8 with m = 2, and the suspension of RP^2, "
                         "show the count can fail otherwise")
        return rep
    rep.verdict = Verdict.YES
    rep.values["count"] = str(count)
    rep.notes.append("every such algebra is some O_E (realization is cited, not computed)")
    return rep


def decide_line_bundle(H: CohomologyRing, c1E: CohomologyClass, c1F: CohomologyClass) -> DecisionReport:
    """Line bundles: O_E = O_F iff c_1(E) = +- c_1(F)."""
    if c1E.degree != 2 or c1F.degree != 2:
        raise ValueError("first Chern classes live in degree 2")
    rep = DecisionReport(Verdict.NO, "line-bundle")
    if c1E == c1F:
        rep.verdict = Verdict.YES
        rep.notes.append("E = F")
    elif c1E == -c1F:
        rep.verdict = Verdict.YES
        rep.notes.append("E is the conjugate of F")
    return rep
