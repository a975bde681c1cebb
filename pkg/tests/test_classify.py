from __future__ import annotations

import random

import pytest

from cuntzk.classify import (NotASuspension, RankOneError, Verdict, count_algebras,
                             decide_embedding, decide_iso_pn, decide_iso_Tn, decide_isomorphism,
                             decide_line_bundle, decide_suspension, trivialization_test)
from cuntzk.equivrel import are_equivalent
from cuntzk.spaces import builtin

CP2 = builtin("cp(2)")
WEDGE = builtin("wedge(rp2,cp(2))")
POINT = builtin("point")
S2 = builtin("sphere(2)")


def _virtual_one_minus(E):
    """(rank part, reduced part) of 1 - [E]."""
    return 1 - E.rank, -E.reduced


# ---------------------------------------------------------------------------
# embedding
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("re, rf, verdict, r", [(4, 2, Verdict.YES, 3), (2, 4, Verdict.NO, None),
                                                (3, 3, Verdict.YES, 1), (7, 3, Verdict.YES, 3)])
def test_point_embedding(re, rf, verdict, r):
    rep = decide_embedding(POINT, POINT.bundle(re, []), POINT.bundle(rf, []))
    assert rep.verdict is verdict
    if r is not None:
        assert rep.witness[0] == r


def test_cp2_embedding_example():
    rep = decide_embedding(CP2, CP2.bundle(3, [3, 0]), CP2.bundle(3, [1, 0]))
    assert rep.verdict is Verdict.NO and rep.values["r"] == "1"


def _apply(F, r, h):
    """(1 - [F]) (r + h) as (rank part, reduced part)."""
    R0 = 1 - F.rank
    return R0 * r, h * R0 - F.reduced * r - F.reduced * h


def test_embedding_witnesses_compose():
    rng = random.Random(11)
    found = 0
    for _ in range(300):
        G = CP2.bundle(2, [rng.randint(-3, 3), rng.randint(-3, 3)])
        r2 = rng.choice([1, 2, 3])
        h2 = CP2.kring.element([rng.randint(-2, 2), rng.randint(-2, 2)])
        rankF, redF = _apply(G, r2, h2)
        F = CP2.bundle(1 - rankF, (-redF).coeffs)
        r1 = rng.choice([1, 2])
        h1 = CP2.kring.element([rng.randint(-2, 2), rng.randint(-2, 2)])
        rankE, redE = _apply(F, r1, h1)
        E = CP2.bundle(1 - rankE, (-redE).coeffs)
        a = decide_embedding(CP2, E, F)
        b = decide_embedding(CP2, F, G)
        c = decide_embedding(CP2, E, G)
        assert a.verdict is b.verdict is c.verdict is Verdict.YES
        # the product of witnesses is again a witness
        (ra, ha), (rb, hb) = a.witness, b.witness
        prod_r, prod_h = ra * rb, ha * rb + hb * ra + ha * hb
        assert _apply(G, prod_r, prod_h) == _virtual_one_minus(E)
        found += 1
    assert found == 300


def test_rank_one_is_rejected():
    with pytest.raises(RankOneError):
        decide_isomorphism(CP2, CP2.bundle(1, [0, 0]), CP2.bundle(2, [0, 0]))


# ---------------------------------------------------------------------------
# isomorphism and trivialization
# ---------------------------------------------------------------------------

def test_cp2_isomorphism_counterexample():
    E, F = CP2.bundle(3, [3, 0]), CP2.bundle(3, [1, 0])
    assert decide_isomorphism(CP2, E, F).verdict is Verdict.NO
    tn = decide_iso_Tn(CP2, E, F)
    assert tn.verdict is Verdict.NO
    assert tn.values["product"] == "4*x - 2*x^2" and tn.values["divisible by 4"] == "no"
    pn = decide_iso_pn(CP2, E, F)
    assert pn.verdict is Verdict.HYPOTHESIS_NOT_MET
    assert pn.values["divisible by 4"] == "yes" and pn.notes


def test_identical_bundles_are_isomorphic():
    E = CP2.bundle(4, [2, -1])
    rep = decide_isomorphism(CP2, E, E)
    assert rep.verdict is Verdict.YES and rep.witness[0] == 1 and rep.witness[1].is_zero()
    assert decide_iso_Tn(CP2, E, E).verdict is Verdict.YES


def test_different_ranks_are_not_isomorphic():
    rep = decide_isomorphism(CP2, CP2.bundle(3, [0, 0]), CP2.bundle(4, [0, 0]))
    assert rep.verdict is Verdict.NO and not rep.hypotheses_met


def test_wedge_counterexample():
    E, F = WEDGE.bundle(3, [1, 2, 2]), WEDGE.bundle(3, [0, 0, 0])
    assert decide_isomorphism(WEDGE, E, F).verdict is Verdict.NO
    triv = trivialization_test(WEDGE, E)
    assert triv.verdict is Verdict.NO
    assert triv.values["[E]-1"] == "2 + (z + 2*x + 2*x^2)"
    tn = decide_iso_Tn(WEDGE, E, F)
    assert tn.verdict is Verdict.HYPOTHESIS_NOT_MET
    assert tn.values["product"] == "4*x + 4*x^2" and tn.values["divisible by 4"] == "yes"
    assert tn.notes


@pytest.mark.parametrize("coeffs, verdict", [([0, 0], Verdict.YES), ([2, 0], Verdict.YES),
                                             ([2, 4], Verdict.YES), ([1, 0], Verdict.NO)])
def test_trivialization(coeffs, verdict):
    rep = trivialization_test(CP2, CP2.bundle(3, coeffs))
    assert rep.verdict is verdict
    # agrees with isomorphism to the trivial bundle
    iso = decide_isomorphism(CP2, CP2.bundle(3, coeffs), CP2.bundle(3, [0, 0]))
    assert iso.verdict is verdict


@pytest.mark.parametrize("name", ["cp(2)", "cp(3)", "sphere(4)", "wedge(rp2,cp(2))"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_isomorphism_is_symmetric(name, m):
    X = builtin(name)
    rng = random.Random(f"sym {name} {m}")
    R = X.kring
    for _ in range(50):
        E = X.bundle(m + 1, [rng.randrange(t) if t else rng.randint(-6, 6) for t in R.torsion_orders])
        F = X.bundle(m + 1, [rng.randrange(t) if t else rng.randint(-6, 6) for t in R.torsion_orders])
        assert decide_isomorphism(X, E, F).verdict is decide_isomorphism(X, F, E).verdict


@pytest.mark.parametrize("m", [3, 5, 7])
def test_paths_agree_on_cp2_when_coprime(m):
    rng = random.Random(m)
    for _ in range(80):
        E = CP2.bundle(m + 1, [rng.randint(-9, 9), rng.randint(-9, 9)])
        F = CP2.bundle(m + 1, [rng.randint(-9, 9), rng.randint(-9, 9)])
        if rng.random() < 0.5:
            h = CP2.kring.element([rng.randint(-3, 3), rng.randint(-3, 3)])
            E = CP2.bundle(m + 1, (F.reduced + h * m + F.reduced * h).coeffs)
        base = decide_isomorphism(CP2, E, F).verdict
        assert decide_iso_Tn(CP2, E, F).verdict is base
        assert decide_iso_pn(CP2, E, F).verdict is base


def test_iso_pn_needs_dimension():
    X = builtin("suspension(0)")
    rep = decide_iso_pn(X, X.bundle(3, [2]), X.bundle(3, [0]))
    assert rep.verdict is Verdict.HYPOTHESIS_NOT_MET
    assert ("dimension known", False) in rep.hypothesis_log
    S4 = builtin("sphere(4)")
    assert decide_iso_pn(S4, S4.bundle(4, [3]), S4.bundle(4, [0])).verdict is Verdict.YES


# ---------------------------------------------------------------------------
# suspensions, counting, line bundles
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("e, f, verdict", [([2], [0], Verdict.YES), ([1], [0], Verdict.NO),
                                           ([5], [5], Verdict.YES)])
def test_suspension_examples(e, f, verdict):
    rep = decide_suspension(S2, 2, S2.bundle(3, e), S2.bundle(3, f))
    assert rep.verdict is verdict
    if e == [2] and f == [0]:
        assert rep.witness[1] == S2.kring.element([1])


def test_suspension_agrees_with_direct_solve():
    X = builtin("suspension(0,3)")
    rng = random.Random(5)
    for _ in range(200):
        m = rng.choice([1, 2, 4, 5])
        E = X.bundle(m + 1, [rng.randint(-9, 9), rng.randrange(3)])
        F = X.bundle(m + 1, [rng.randint(-9, 9), rng.randrange(3)])
        direct = are_equivalent(X.kring, m, E.reduced, F.reduced) is not None
        assert (decide_suspension(X, m, E, F).verdict is Verdict.YES) == direct


def test_suspension_requires_trivial_products():
    with pytest.raises(NotASuspension):
        decide_suspension(CP2, 2, CP2.bundle(3, [0, 0]), CP2.bundle(3, [0, 0]))


@pytest.mark.parametrize("name, m, count", [("cp(2)", 3, 9), ("sphere(2)", 2, 2), ("point", 2, 1),
                                            ("point", 5, 1), ("cp(3)", 2, 8)])
def test_count_algebras(name, m, count):
    rep = count_algebras(builtin(name), m)
    assert rep.verdict is Verdict.YES and rep.values["count"] == str(count)


def test_count_algebras_outside_hypotheses():
    rep = count_algebras(builtin("rp2"), 2)
    assert rep.verdict is Verdict.HYPOTHESIS_NOT_MET and rep.notes


def test_line_bundles():
    H = CP2.cohomology
    t = H.cls(2, [1])
    assert decide_line_bundle(H, t, t).verdict is Verdict.YES
    assert decide_line_bundle(H, t * -1, t).verdict is Verdict.YES
    assert decide_line_bundle(H, t * 2, t).verdict is Verdict.NO


def test_report_serialisation():
    rep = decide_isomorphism(CP2, CP2.bundle(3, [3, 1]), CP2.bundle(3, [1, 0]))
    d = rep.to_dict()
    assert d["verdict"] == "yes" and d["witness"]["text"] == "x"
    assert rep.lines()[0] == "verdict: yes"
