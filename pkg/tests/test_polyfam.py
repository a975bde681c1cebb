from __future__ import annotations

import random
from fractions import Fraction
from math import factorial, lcm

import pytest
from hypothesis import given, settings, strategies as st

from cuntzk import polyfam
from cuntzk.paperrun import read_golden
from cuntzk.poly import Poly


# ---------------------------------------------------------------------------
# goldens
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("key, text", read_golden("polynomials"))
def test_polynomial_goldens(key, text):
    name, n = key.split("_")
    fn = polyfam.p_poly if name == "p" else polyfam.q_poly
    assert fn(int(n)) == Poly.parse(text)


@pytest.mark.parametrize("key, text", read_golden("newton"))
def test_newton_goldens(key, text):
    assert polyfam.newton_poly(int(key.split("_")[1])) == Poly.parse(text)


# ---------------------------------------------------------------------------
# independent numeric oracles
# ---------------------------------------------------------------------------

def _series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, u in enumerate(a):
        if u:
            for j in range(n + 1 - i):
                out[i + j] += u * b[j]
    return out


def q_at_powers_oracle(n, m):
    """q_n(1, ..., 1) = [t^n] sum_r (-1)^(r-1) m^(n-r) (n!/r) (e^t - 1)^r,
    computed with truncated power series in t."""
    e1 = [Fraction(0)] + [Fraction(1, factorial(k)) for k in range(1, n + 1)]
    power = [Fraction(1)] + [Fraction(0)] * n
    total = Fraction(0)
    for r in range(1, n + 1):
        power = _series_mul(power, e1, n)
        total += Fraction((-1) ** (r - 1) * m ** (n - r), r) * power[n]
    return total * factorial(n)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_q_at_pure_powers_matches_series(n, m):
    # weight-homogeneous, so q_n(c, c^2, ..., c^n) = c^n q_n(1, ..., 1)
    q = polyfam.q_poly(n, m)
    ones = {f"x{i}": 1 for i in range(1, n + 1)}
    assert q.evaluate(ones) == q_at_powers_oracle(n, m)
    twos = {f"x{i}": 2 ** i for i in range(1, n + 1)}
    assert q.evaluate(twos) == 2 ** n * q.evaluate(ones)


@settings(max_examples=60)
@given(st.integers(1, 5), st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_newton_matches_numeric_power_sums(k, roots):
    roots = roots[:k]
    # elementary symmetric values from the roots via prod (1 + r t)
    e = [1] + [0] * k
    for r in roots:
        for i in range(k, 0, -1):
            e[i] += r * e[i - 1]
    vals = {f"sigma{i}": e[i] for i in range(1, k + 1)}
    assert polyfam.newton_poly(k).evaluate(vals) == sum(r ** k for r in roots)


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("m", [1, 2, 3, 4, 7])
def test_p_is_ell_times_truncated_log(n, m):
    # p_n(x) = ell(n) m^n log(1 + x/m), truncated at degree n, checked at integers
    ell = lcm(*range(1, n + 1))
    p = polyfam.p_poly(n, m)
    for xv in (-3, -1, 1, 2, 5):
        series = sum(Fraction((-1) ** (k - 1), k) * Fraction(xv, m) ** k for k in range(1, n + 1))
        assert p.evaluate({"x": xv}) == ell * m ** n * series
    assert p.is_integral()


@pytest.mark.parametrize("n", range(1, 9))
def test_symbolic_m_specialises(n):
    for m in (1, 2, 3):
        assert polyfam.p_poly(n).substitute({"m": m}) == polyfam.p_poly(n, m)
        assert polyfam.T_poly(n).substitute({"m": m}) == polyfam.T_poly(n, m)
    if n <= 5:
        assert polyfam.q_poly(n).substitute({"m": 2}) == polyfam.q_poly(n, 2)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("m", [None, 1, 2, 3, 6])
def test_identities(n, m):
    assert polyfam.t_identity_check(n, m)
    assert polyfam.recurrence_check(n, m)
    if n <= 6:
        assert polyfam.q_poly(n, m) == polyfam.q_closed_form(n, m)


@settings(max_examples=60)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(-6, 6))
def test_t_identity_numerically(n, m, b):
    assert (m + b) * polyfam.T_poly(n, m).evaluate({"b": b}) == m ** n - (-b) ** n


@pytest.mark.parametrize("j", range(1, 7))
@pytest.mark.parametrize("k", range(1, 7))
def test_a_coeff(j, k):
    assert polyfam.a_coeff(j, k) == polyfam.a_coeff_factorial(j, k)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_lemma_abc_decomposition_reassembles(n, m):
    u, v, s = polyfam.lemma_abc_decompose(n, m)
    x, y = Poly.var("x", 1), Poly.var("y", 1)
    p = polyfam.p_poly(n, m)
    assert p.substitute({"x": x + y}) == p + p.substitute({"x": y}) + x * y * u
    assert p.substitute({"x": x + m * y + x * y}) == p + v * m ** n + s
    assert not s or s.min_degree(("x", "y")) >= n + 1
    for part in (u, v, s):
        assert part.is_integral()


def test_truncation_example():
    P = Poly.parse("sigma1^3 + sigma1*sigma2 + sigma3 + sigma1").with_variables(
        ("sigma1", "sigma2", "sigma3"), (1, 2, 3))
    assert polyfam.weighted_truncate(P, 3) == Poly.parse("sigma1^3 + sigma1*sigma2 + sigma3")
    assert polyfam.weighted_truncate(P, 1) == Poly.parse("sigma1")


def test_lcm_and_errors():
    assert [polyfam.lcm_1_to_n(n) for n in range(0, 7)] == [1, 1, 2, 6, 12, 60, 60]
    with pytest.raises(ValueError):
        polyfam.p_poly(0)
    with pytest.raises(ValueError):
        polyfam.p_poly(2, 0)
    with pytest.raises(ValueError):
        polyfam.a_coeff(0, 1)


def test_random_specialisation_of_q_is_integral():
    rng = random.Random(7)
    for _ in range(50):
        n, m = rng.randint(1, 5), rng.randint(1, 9)
        vals = {f"x{i}": rng.randint(-9, 9) for i in range(1, n + 1)}
        assert isinstance(polyfam.q_poly(n, m).evaluate(vals), int)
