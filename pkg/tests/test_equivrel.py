from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from cuntzk.equivrel import (HypothesisError, SearchSpaceTooLarge, are_equivalent,
                             brute_force_equivalent, canonical_representatives, count_classes,
                             filtration_quotients, lemma_b_converse, lemma_b_forward,
                             lemma_c_decide, reduce_to_representative, relation_holds,
                             tor_hypothesis_failures)
from cuntzk.intlinalg import tensor_with_zmod
from cuntzk.spaces import builtin

from conftest import CORPUS, random_element, related_pair

CP2 = builtin("cp(2)").kring


def el(R, *coeffs):
    return R.element(list(coeffs))


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name, m, a, b, witness", [
    ("cp(2)", 2, (3, 0), (1, 0), None),
    ("cp(2)", 2, (3, 1), (1, 0), (1, 0)),
    ("cp(2)", 5, (2, -1), (2, -1), (0, 0)),
    ("rp2", 2, (1,), (0,), None),
    ("sphere(2)", 2, (2,), (0,), (1,)),
])
def test_are_equivalent_examples(name, m, a, b, witness):
    R = builtin(name).kring
    got = are_equivalent(R, m, el(R, *a), el(R, *b))
    brute = brute_force_equivalent(R, m, el(R, *a), el(R, *b))
    if witness is None:
        assert got is None and brute is None
    else:
        assert got.h == el(R, *witness)
        assert brute is not None and relation_holds(m, el(R, *a), el(R, *b), brute.h)


def test_m_must_be_positive():
    with pytest.raises(ValueError):
        are_equivalent(CP2, 0, CP2.zero(), CP2.zero())


def test_brute_force_cap():
    R = builtin("cp(3)").kring
    with pytest.raises(SearchSpaceTooLarge):
        brute_force_equivalent(R, 2, R.zero(), R.zero(), bound=200, cap=1000)


# ---------------------------------------------------------------------------
# equivalence relation properties
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_reflexive_symmetric_transitive(name, m, spaces):
    R = spaces[name].kring
    rng = random.Random(f"{name}-{m}")
    for _ in range(40):
        a, b, _h = related_pair(R, m, rng)
        h2 = random_element(R, rng)
        c = a + h2 * m + a * h2
        assert relation_holds(m, a, a, are_equivalent(R, m, a, a).h)
        ab = are_equivalent(R, m, a, b)
        ba = are_equivalent(R, m, b, a)
        assert ab is not None and ba is not None
        assert relation_holds(m, b, a, ba.h)
        ca = are_equivalent(R, m, c, a)
        cb = are_equivalent(R, m, c, b)
        assert ca is not None and cb is not None
        # composing units: (1 + h1)(1 + h2) = 1 + h1 + h2 + h1 h2
        comp = ca.h + ab.h + ca.h * ab.h
        assert relation_holds(m, c, b, comp)


@pytest.mark.parametrize("name", ["cp(2)", "rp2", "wedge(rp2,cp(2))", "suspension(0,3)"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_agrees_with_brute_force(name, m, spaces):
    R = spaces[name].kring
    rng = random.Random(f"{name}/{m}")
    for i in range(150):
        if i % 2:
            a, b, _h = related_pair(R, m, rng)
        else:
            a, b = random_element(R, rng, -6, 6), random_element(R, rng, -6, 6)
        fast = are_equivalent(R, m, a, b)
        brute = brute_force_equivalent(R, m, a, b)
        if brute is not None:
            assert fast is not None
        if fast is not None:
            assert relation_holds(m, a, b, fast.h)
            # free coordinates of the witness are unique; torsion ones are enumerated
            in_box = all(t or abs(c) <= 8 for c, t in zip(fast.h.coeffs, R.torsion_orders))
            assert (brute is not None) == in_box


# ---------------------------------------------------------------------------
# filtration quotients and representatives
# ---------------------------------------------------------------------------

def test_filtration_quotients_of_wedge():
    W = builtin("wedge(rp2,cp(2))").kring
    qs = filtration_quotients(W)
    assert [q.level for q in qs] == [1, 2]
    assert tor_hypothesis_failures(W, 2) == [1]
    assert tor_hypothesis_failures(W, 3) == []


def test_cp2_mod_3_has_nine_pairwise_inequivalent_reps():
    reps = canonical_representatives(CP2, 3)
    assert len(reps.reps) == 9 == count_classes(CP2, 3)
    assert set(reps.reps) == {el(CP2, a, b) for a in range(3) for b in range(3)}
    for a, b in combinations(reps.reps, 2):
        assert are_equivalent(CP2, 3, a, b) is None


@pytest.mark.parametrize("name, m, count", [
    ("point", 2, 1), ("point", 7, 1), ("sphere(2)", 2, 2), ("cp(3)", 2, 8), ("suspension(0,3)", 2, 2), ("suspension(0,3)", 5, 5),
])
def test_count_classes(name, m, count):
    assert count_classes(builtin(name).kring, m) == count


def test_suspension_reps_are_residues():
    R = builtin("sphere(2)").kring
    assert set(canonical_representatives(R, 2).reps) == {el(R, 0), el(R, 1)}


def test_rp2_counting_needs_tor_free():
    with pytest.raises(HypothesisError):
        canonical_representatives(builtin("rp2").kring, 2)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_count_equals_tensor_cardinality(name, m, spaces):
    R = spaces[name].kring
    if tor_hypothesis_failures(R, m):
        with pytest.raises(HypothesisError):
            count_classes(R, m)
        return
    assert count_classes(R, m) == tensor_with_zmod(R.additive_group(), m).cardinality


def test_reduce_example():
    # 4x is congruent to x at level 1; descent fixes the x^2 coordinate
    red = reduce_to_representative(CP2, 3, el(CP2, 4, 0))
    assert red.rep == el(CP2, 1, 2)
    assert relation_holds(3, red.rep, el(CP2, 4, 0), red.witness.h)
    assert are_equivalent(CP2, 3, el(CP2, 4, 0), el(CP2, 1, 0)) is None


@pytest.mark.parametrize("coeffs", [(0, 0), (1, 2), (2, 0)])
def test_reduce_fixes_representatives(coeffs):
    red = reduce_to_representative(CP2, 3, el(CP2, *coeffs))
    assert red.rep == el(CP2, *coeffs)
    assert all(h.is_zero() for h in red.chain)


@pytest.mark.parametrize("name", ["cp(2)", "cp(3)", "sphere(4)", "suspension(0,3)"])
@pytest.mark.parametrize("m", [2, 3, 5])
def test_reduce_lands_on_an_equivalent_representative(name, m, spaces):
    R = spaces[name].kring
    if tor_hypothesis_failures(R, m):
        with pytest.raises(HypothesisError):
            reduce_to_representative(R, m, R.zero())
        return
    reps = set(canonical_representatives(R, m).reps)
    rng = random.Random(f"reduce {name} {m}")
    for _ in range(60):
        x = random_element(R, rng, -20, 20)
        red = reduce_to_representative(R, m, x)
        assert red.rep in reps
        assert are_equivalent(R, m, red.rep, x) is not None


# ---------------------------------------------------------------------------
# T_n and p_n lemmas
# ---------------------------------------------------------------------------

def test_lemma_b_forward_example():
    x = CP2.gen("x")
    chk = lemma_b_forward(CP2, 2, 2, x * 3 + x * x, x, x)
    assert chk.holds and chk.value == x * 4


def test_lemma_b_premises_are_checked():
    x = CP2.gen("x")
    with pytest.raises(HypothesisError):
        lemma_b_forward(CP2, 2, 2, x * 3, x, x)
    with pytest.raises(HypothesisError):
        lemma_b_forward(CP2, 2, 1, x, x, CP2.zero())
    with pytest.raises(HypothesisError):
        lemma_b_converse(CP2, 2, 2, x * 3, x, x)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_lemma_b_both_directions(name, m, spaces):
    from cuntzk.ringcore import nilpotency_index
    R = spaces[name].kring
    n = nilpotency_index(R)
    rng = random.Random(f"lemma b {name} {m}")
    for _ in range(25):
        a, b, h = related_pair(R, m, rng)
        assert lemma_b_forward(R, m, n, a, b, h).holds
        assert lemma_b_converse(R, m, n, a, b, h).holds


@settings(max_examples=60, deadline=None)
@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9),
       st.sampled_from([1, 3, 5, 7]))
def test_lemma_c_agrees_with_linear_solve(a1, a2, b1, b2, m):
    a, b = el(CP2, a1, a2), el(CP2, b1, b2)
    dec = lemma_c_decide(CP2, m, a, b)
    assert dec.equivalent == (are_equivalent(CP2, m, a, b) is not None)


def test_lemma_c_examples():
    x = CP2.gen("x")
    dec = lemma_c_decide(CP2, 3, x, x + x * x * 3)
    assert dec.equivalent and dec.n == 2
    assert dec.difference == dec.witness * 9
    assert lemma_c_decide(CP2, 5, x, x).equivalent
    with pytest.raises(HypothesisError) as err:
        lemma_c_decide(CP2, 2, x, x)
    assert err.value.failed
