"""The polynomial families behind the invariants.

Every family takes ``m`` either as a positive integer or as ``None``; with
``None`` the polynomial carries ``m`` as a symbol (weight 0), which is how the
closed forms are compared against their printed versions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from typing import NamedTuple, Optional

from .poly import DivisionError, IntegralityError, Poly

__all__ = [
    "lcm_1_to_n", "p_poly", "T_poly", "V_poly", "W_poly", "newton_poly",
    "weighted_truncate", "q_poly", "q_closed_form", "r_poly", "a_coeff",
    "a_coeff_factorial", "lemma_abc_decompose", "recurrence_check",
    "t_identity_check", "ABCDecomposition",
]


def lcm_1_to_n(n: int) -> int:
    """ell(n) = lcm(1, ..., n); ell(0) = 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return lcm(*range(1, n + 1)) if n else 1


def _check(n, m):
    if n < 1:
        raise ValueError("n must be >= 1")
    if m is not None and m < 1:
        raise ValueError("m must be >= 1")


def _m_power(m, k, variables, weights, slot):
    """m**k as a coefficient (int) or as a monomial in the symbol m."""
    if m is not None:
        return m ** k, None
    e = [0] * len(variables)
    e[slot] = k
    return 1, tuple(e)


def _univariate(n, m, var, coeff):
    # sum_k coeff(k) * m^(n-k) * var^k, k = 1..n (coeff(k) may be 0)
    if m is None:
        variables, weights = ("m", var), (0, 1)
        terms = {(n - k, k): coeff(k) for k in range(1, n + 1)}
    else:
        variables, weights = (var,), (1,)
        terms = {(k,): coeff(k) * m ** (n - k) for k in range(1, n + 1)}
    return Poly(variables, terms, weights)


def p_poly(n: int, m: Optional[int] = None, var: str = "x") -> Poly:
    """p_n(x) = sum_{k=1}^n (-1)^(k-1) (ell(n)/k) m^(n-k) x^k."""
    _check(n, m)
    ell = lcm_1_to_n(n)
    return _univariate(n, m, var, lambda k: (-1) ** (k - 1) * (ell // k))


def T_poly(n: int, m: Optional[int] = None, var: str = "b") -> Poly:
    """T_n(b) = sum_{k=1}^n (-1)^(k-1) m^(n-k) b^(k-1).

    Satisfies (m + b) T_n(b) = m^n - (-b)^n.
    """
    _check(n, m)
    if m is None:
        terms = {(n - k, k - 1): (-1) ** (k - 1) for k in range(1, n + 1)}
        return Poly(("m", var), terms, (0, 1))
    return Poly((var,), {(k - 1,): (-1) ** (k - 1) * m ** (n - k) for k in range(1, n + 1)}, (1,))


def V_poly(n: int, var: str = "x") -> Poly:
    """Truncated logarithm: sum_{k=1}^n (-1)^(k-1) x^k / k (rational)."""
    _check(n, None)
    return Poly((var,), {(k,): Fraction((-1) ** (k - 1), k) for k in range(1, n + 1)}, (1,))


def W_poly(n: int, m: Optional[int] = None, var: str = "x") -> Poly:
    """W_n = (n!/ell(n)) p_n = sum_r (-1)^(r-1) m^(n-r) (n!/r) x^r."""
    _check(n, m)
    f = factorial(n)
    return _univariate(n, m, var, lambda r: (-1) ** (r - 1) * (f // r))


def t_identity_check(n: int, m: Optional[int] = None) -> bool:
    """(m + b) T_n(b) == m^n - (-b)^n as polynomials."""
    b = Poly.var("b", 1)
    mm = Poly.var("m", 0) if m is None else m
    lhs = (b + mm) * T_poly(n, m)
    rhs = mm ** n - (-b) ** n if m is None else m ** n - (-b) ** n
    return lhs == rhs


@lru_cache(maxsize=None)
def newton_poly(k: int, prefix: str = "sigma") -> Poly:
    """Power sum p_k in the elementary symmetric polynomials sigma_1..sigma_k.

    Newton: Q_k = sigma_1 Q_{k-1} - sigma_2 Q_{k-2} + ... + (-1)^(k-1) k sigma_k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    names = tuple(f"{prefix}{i}" for i in range(1, k + 1))
    weights = tuple(range(1, k + 1))
    sig = [None] + [Poly(names, {tuple(int(j == i) for j in range(k)): 1}, weights)
                    for i in range(k)]
    Q = [None]
    for j in range(1, k + 1):
        acc = sig[j] * ((-1) ** (j - 1) * j)
        for i in range(1, j):
            acc = acc + sig[i] * Q[j - i] * (-1) ** (i - 1)
        Q.append(acc)
    return Q[k]


def weighted_truncate(P: Poly, n: int) -> Poly:
    """Sum of the monomials of ``P`` of total weight exactly ``n``."""
    return P.truncate_weight(n)


def _x_vars(n, prefix):
    return tuple(f"{prefix}{i}" for i in range(1, n + 1)), tuple(range(1, n + 1))


@lru_cache(maxsize=None)
def q_poly(n: int, m: Optional[int] = None, prefix: str = "x") -> Poly:
    """q_n(x_1..x_n) = W_n(x_1/1! + ... + x_n/n!) truncated to weight n.

    Built over the rationals and then checked to be integral.
    """
    _check(n, m)
    names, weights = _x_vars(n, prefix)
    if m is None:
        names, weights = ("m",) + names, (0,) + weights
    off = 1 if m is None else 0
    y = Poly(names, {tuple(int(j == i + off) for j in range(len(names))): Fraction(1, factorial(i + 1))
                     for i in range(n)}, weights)
    f = factorial(n)
    total = Poly.zero(names, weights)
    ypow = Poly.const(1, names, weights)
    for r in range(1, n + 1):
        ypow = ypow.mul(y, max_weight=n)
        coef, mexp = (m ** (n - r), None) if m is not None else (1, n - r)
        term = ypow.truncate_weight(n) * (Fraction(f, r) * (-1) ** (r - 1) * coef)
        if mexp:
            term = term * (Poly.var("m", 0) ** mexp)
        total = total + term
    try:
        return total.integral()
    except IntegralityError as exc:
        raise IntegralityError(f"q_{n} is not integral: {exc}") from exc


def _partitions_by_weight(n):
    """All (k_1..k_n) with k_1 + 2 k_2 + ... + n k_n = n."""
    def rec(i, rest):
        if i > n:
            if rest == 0:
                yield ()
            return
        for k in range(rest // i + 1):
            for tail in rec(i + 1, rest - i * k):
                yield (k,) + tail
    return rec(1, n)


def q_closed_form(n: int, m: Optional[int] = None, prefix: str = "x") -> Poly:
    """Direct enumeration of the coefficient formula for q_n.

    Independent of ``q_poly``: no truncated powers, only the closed-form
    coefficient per weight-n exponent vector.
    """
    _check(n, m)
    names, weights = _x_vars(n, prefix)
    if m is None:
        names, weights = ("m",) + names, (0,) + weights
    terms = {}
    for ks in _partitions_by_weight(n):
        s = sum(ks)
        num = factorial(n) * factorial(s - 1)
        den = 1
        for i, k in enumerate(ks, start=1):
            den *= factorial(i) ** k * factorial(k)
        c = Fraction(num, den) * (-1) ** (s - 1)
        if m is None:
            terms[(n - s,) + ks] = c
        else:
            terms[ks] = c * m ** (n - s)
    return Poly(names, terms, weights)


def r_poly(n: int, prefix: str = "x") -> Poly:
    """q_n at m = 1."""
    return q_poly(n, 1, prefix)


def a_coeff(j: int, k: int) -> int:
    """(jk)! / ((j!)^k k!) via a(j,k) = C(jk-1, j-1) a(j,k-1), a(j,1) = 1."""
    if j < 1 or k < 1:
        raise ValueError("j, k must be >= 1")
    a = 1
    for i in range(2, k + 1):
        a *= comb(j * i - 1, j - 1)
    return a


def a_coeff_factorial(j: int, k: int) -> Fraction:
    return Fraction(factorial(j * k), factorial(j) ** k * factorial(k))


class ABCDecomposition(NamedTuple):
    u: Poly
    v: Poly
    s_next: Poly


def lemma_abc_decompose(n: int, m: int) -> ABCDecomposition:
    """u_n, v_n, s_{n+1} with

    p_n(x+y) = p_n(x) + p_n(y) + x y u_n(x, y)
    p_n(x+my+xy) = p_n(x) + m^n v_n(y) + s_{n+1}(x, y)

    and every monomial of s_{n+1} of total degree >= n+1.
    """
    if m is None or m < 1:
        raise ValueError("m must be a positive integer")
    _check(n, m)
    x, y = Poly.var("x", 1), Poly.var("y", 1)
    p = p_poly(n, m)
    diff = p.substitute({"x": x + y}) - p - p.substitute({"x": y})
    diff = diff.with_variables(("x", "y"))
    try:
        u = diff.divide_by_monomial(x=1, y=1)
    except DivisionError as exc:
        raise DivisionError(f"u_{n}: {exc}") from exc
    v = (V_poly(n, "y") * lcm_1_to_n(n)).integral()
    s_next = (p.substitute({"x": x + y * m + x * y}) - p - v * m ** n).with_variables(("x", "y"))
    s_next.integral()
    u.integral()
    if s_next and s_next.min_degree(("x", "y")) < n + 1:
        raise ArithmeticError(f"s_{n + 1} has a monomial of degree < {n + 1}")
    return ABCDecomposition(u, v, s_next)


def recurrence_check(n: int, m: Optional[int] = None) -> bool:
    """p_{n+1} = (ell(n+1)/ell(n)) m p_n + (-1)^n (ell(n+1)/(n+1)) x^(n+1)."""
    _check(n, m)
    ratio = lcm_1_to_n(n + 1) // lcm_1_to_n(n)
    mm = Poly.var("m", 0) if m is None else m
    x = Poly.var("x", 1)
    rhs = p_poly(n, m) * mm * ratio + x ** (n + 1) * ((-1) ** n * (lcm_1_to_n(n + 1) // (n + 1)))
    return p_poly(n + 1, m) == rhs
