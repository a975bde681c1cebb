"""Sparse multivariate polynomials with exact (int or Fraction) coefficients.

Variables may carry an integer weight, used by weighted truncation.  A
coefficient that is integral is always stored as ``int``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Exps = Tuple[int, ...]


class IntegralityError(ArithmeticError):
    """A polynomial expected to have integer coefficients does not."""


class DivisionError(ArithmeticError):
    """Exact division by a monomial failed."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class Poly:
    __slots__ = ("variables", "weights", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, object] = (),
                 weights: Optional[Sequence[Optional[int]]] = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        if weights is None:
            weights = (None,) * len(self.variables)
        self.weights = tuple(weights)
        if len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable")
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(e)
            if len(e) != len(self.variables):
                raise ValueError("exponent vector length must match variables")
            c = _norm(c)
            if c:
                clean[e] = c
        self.terms: Dict[Exps, object] = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def var(cls, name: str, weight: Optional[int] = None) -> "Poly":
        return cls((name,), {(1,): 1}, (weight,))

    @classmethod
    def const(cls, c, variables: Sequence[str] = (), weights=None) -> "Poly":
        return cls(variables, {(0,) * len(variables): c}, weights)

    @classmethod
    def zero(cls, variables: Sequence[str] = (), weights=None) -> "Poly":
        return cls(variables, {}, weights)

    # -- variable bookkeeping -------------------------------------------------

    def weight_of(self, name: str) -> Optional[int]:
        return self.weights[self.variables.index(name)]

    def with_variables(self, variables: Sequence[str], weights=None) -> "Poly":
        """Re-express over a (super)set of variables."""
        variables = tuple(variables)
        wmap = dict(zip(self.variables, self.weights))
        if weights is None:
            weights = tuple(wmap.get(v) for v in variables)
        pos = {v: i for i, v in enumerate(variables)}
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for v, k in zip(self.variables, e):
                if k:
                    if v not in pos:
                        raise ValueError(f"variable {v!r} is used and cannot be dropped")
                    ne[pos[v]] = k
            terms[tuple(ne)] = c
        return Poly(variables, terms, weights)

    def _align(self, other: "Poly"):
        if self.variables == other.variables:
            for v, a, b in zip(self.variables, self.weights, other.weights):
                if a is not None and b is not None and a != b:
                    raise ValueError(f"conflicting weights for {v!r}")
            ws =tuple(a if a is not None else b for a, b in zip(self.weights, other.weights))
            return self.terms, other.terms, self.variables, ws
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        wmap = {}
        for p in (self, other):
            for v, w in zip(p.variables, p.weights):
                if w is not None:
                    if wmap.get(v, w) != w:
                        raise ValueError(f"conflicting weights for {v!r}")
                    wmap[v] = w
        ws = tuple(wmap.get(v) for v in variables)
        return (self.with_variables(variables).terms, other.with_variables(variables).terms,
                variables, ws)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(other, self.variables, self.weights)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, vs, ws = self._align(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return Poly(vs, out, ws)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {e: -c for e, c in self.terms.items()}, self.weights)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return Poly(self.variables, {e: c * other for e, c in self.terms.items()}, self.weights)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.mul(other)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Rational)):
            return NotImplemented
        return Poly(self.variables, {e: Fraction(c) / k for e, c in self.terms.items()},
                    self.weights)

    def mul(self, other: "Poly", max_weight: Optional[int] = None) -> "Poly":
        """Product; with ``max_weight`` monomials heavier than it are dropped."""
        a, b, vs, ws = self._align(other)
        if max_weight is not None and any(w is None for w in ws):
            raise ValueError("weighted truncation needs a weight on every variable")
        out: Dict[Exps, object] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if max_weight is not None and sum(w * k for w, k in zip(ws, e)) > max_weight:
                    continue
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(vs, out, ws)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.const(1, self.variables, self.weights)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b, _, _ = self._align(other)
        return a == b

    def __hash__(self):
        return hash(frozenset(self.canonical_terms()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ------------------------------------------------------------

    def canonical_terms(self):
        """Terms keyed by {variable: exponent} so order of variables is irrelevant."""
        return {tuple((v, k) for v, k in zip(self.variables, e) if k): c
                for e, c in self.terms.items()}

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def integral(self) -> "Poly":
        if not self.is_integral():
            bad = next(c for c in self.terms.values() if not isinstance(c, int))
            raise IntegralityError(f"non-integral coefficient {bad}")
        return self

    def degree(self, variables: Optional[Iterable[str]] = None) -> int:
        sel = self._select(variables)
        return max((sum(e[i] for i in sel) for e in self.terms), default=-1)

    def min_degree(self, variables: Optional[Iterable[str]] = None) -> int:
        sel = self._select(variables)
        return min((sum(e[i] for i in sel) for e in self.terms), default=-1)

    def _select(self, variables):
        if variables is None:
            return range(len(self.variables))
        return [self.variables.index(v) for v in variables if v in self.variables]

    def weight(self, e: Exps) -> int:
        if any(w is None for w in self.weights):
            raise ValueError("weighted truncation needs a weight on every variable")
        return sum(w * k for w, k in zip(self.weights, e))

    def coefficient(self, **exponents) -> object:
        e = tuple(exponents.get(v, 0) for v in self.variables)
        return self.terms.get(e, 0)

    # -- transformations --------------------------------------------------------

    def truncate_weight(self, n: int) -> "Poly":
        """Keep only monomials of total weight exactly ``n``."""
        return Poly(self.variables, {e: c for e, c in self.terms.items() if self.weight(e) == n},
                    self.weights)

    def divide_by_monomial(self, **exponents) -> "Poly":
        d = tuple(exponents.get(v, 0) for v in self.variables)
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, d))
            if min(q, default=0) < 0:
                raise DivisionError(f"term {self._mono_text(e)} is not divisible")
            out[q] = c
        return Poly(self.variables, out, self.weights)

    def substitute(self, mapping: Mapping[str, object]) -> "Poly":
        """Replace variables by polynomials or numbers (a composition)."""
        result = None
        cache = {}
        keep = [v for v in self.variables if v not in mapping]
        keepw = [w for v, w in zip(self.variables, self.weights) if v not in mapping]
        one = Poly.const(1, keep, keepw)
        for e, c in self.terms.items():
            term = one * c
            for v, k in zip(self.variables, e):
                if not k:
                    continue
                if v in mapping:
                    key = (v, k)
                    if key not in cache:
                        val = mapping[v]
                        val = val if isinstance(val, Poly) else Poly.const(val)
                        cache[key] = val ** k
                    term = term * cache[key]
                else:
                    term = term * (Poly.var(v, self.weight_of(v)) ** k)
            result = term if result is None else result + term
        if result is None:
            return Poly.zero(keep, keepw)
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value at a point (every variable used must be given)."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.variables, e):
                if k:
                    t *= values[v] ** k
            total += t
        return _norm(Fraction(total)) if isinstance(total, Fraction) else total

    def drop_unused(self) -> "Poly":
        used = [i for i in range(len(self.variables)) if any(e[i] for e in self.terms)]
        return Poly([self.variables[i] for i in used],
                    {tuple(e[i] for i in used): c for e, c in self.terms.items()},
                    [self.weights[i] for i in used])

    # -- text ----------------------------------------------------------------------

    def _mono_text(self, e: Exps, order=None) -> str:
        order = order or self.variables
        parts = []
        for v in order:
            if v not in self.variables:
                continue
            k = e[self.variables.index(v)]
            if k == 1:
                parts.append(v)
            elif k > 1:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def to_text(self, order: Optional[Sequence[str]] = None) -> str:
        """Deterministic canonical text.

        Terms are sorted by total degree (descending), ties broken
        lexicographically by exponents in ``order`` (descending).
        """
        order = tuple(order) if order else self.variables
        order = order + tuple(v for v in self.variables if v not in order)
        idx = [self.variables.index(v) if v in self.variables else None for v in order]

        def key(e):
            ex = tuple(e[i] if i is not None else 0 for i in idx)
            return (-sum(ex),) + tuple(-k for k in ex)

        out = []
        for e in sorted(self.terms, key=key):
            c = self.terms[e]
            mono = self._mono_text(e, order)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            out.append((sign, body))
        if not out:
            return "0"
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return _Parser(text).parse()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive-descent parser for ``+ - * / ^ ( )`` with explicit ``*``."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        for num, name, op in _TOKEN.findall(text):
            if num:
                self.tokens.append(("num", int(num)))
            elif name:
                self.tokens.append(("var", name))
            elif op.strip():
                self.tokens.append(("op", op))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ValueError(f"expected {op!r} in {self.text!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self):
        p = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.power()
            if op == "*":
                p = p * f
            else:
                if f.degree() > 0:
                    raise ValueError("division by a non-constant")
                p = p / f.terms.get((0,) * len(f.variables), 0)
        return p

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, k = self.take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer")
            base = base ** k
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.const(val)
        if kind == "var":
            return Poly.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.take(")")
            return p
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")
