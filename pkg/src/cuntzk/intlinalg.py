"""Exact integer linear algebra.

Smith normal form, Hermite-style lattice reduction and solvers for linear
equations over finitely presented abelian groups.  Everything works on Python
ints, so coefficient growth is never an issue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix with explicit shape (so 0 x n is representable)."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a, b = self.tolist(), other.tolist()
        out = []
        for i in range(self.rows):
            ai = a[i]
            for j in range(other.cols):
                out.append(sum(ai[k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[int]) -> list:
        if len(v) != self.cols:
            raise DimensionError("vector length does not match column count")
        return [sum(self[i, k] * v[k] for k in range(self.cols)) for i in range(self.rows)]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)


def determinant(A: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    if A.rows != A.cols:
        raise DimensionError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal.

    ``V_inv`` is carried along because inverting a unimodular matrix by other
    means is a needless detour.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix
    rank: int
    invariant_factors: tuple


def _pick_pivot(D, t, m, n):
    best = None
    for i in range(t, m):
        row = D[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def smith_normal_form(A: IntMatrix) -> SnfDecomposition:
    """Smith normal form with smallest-absolute-value pivoting.

    Ties are broken by the lowest (row, column) index in row-major order, so
    the transforms are deterministic.
    """
    m, n = A.rows, A.cols
    D = A.tolist()
    U = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()
    Vinv = IntMatrix.identity(n).tolist()

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in D:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vinv[j], Vinv[k] = Vinv[k], Vinv[j]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        # col_dst += c * col_src; inverse acts on rows of Vinv
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]
        Vinv[src] = [a - c * b for a, b in zip(Vinv[src], Vinv[dst])]

    t = 0
    while t < min(m, n):
        piv = _pick_pivot(D, t, m, n)
        if piv is None:
            break
        while True:
            _, i, j = piv
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                piv = _pick_pivot(D, t, m, n)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
            piv = _pick_pivot(D, t, m, n)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    rank = t
    return SnfDecomposition(
        U=IntMatrix.from_rows(U, m),
        D=IntMatrix.from_rows(D, n),
        V=IntMatrix.from_rows(V, n),
        V_inv=IntMatrix.from_rows(Vinv, n),
        rank=rank,
        invariant_factors=tuple(D[i][i] for i in range(rank)),
    )


# --------------------------------------------------------------------------
# Lattices in Z^n (echelon basis, canonical reduction)
# --------------------------------------------------------------------------

def _echelon(rows: Iterable[Sequence[int]], dim: int):
    rows = [list(r) for r in rows if any(r)]
    for r in rows:
        if len(r) != dim:
            raise DimensionError(f"lattice vector of length {len(r)} in Z^{dim}")
    basis, pivots = [], []
    top = 0
    for col in range(dim):
        while True:
            nz = [r for r in range(top, len(rows)) if rows[r][col]]
            if not nz:
                break
            best = min(nz, key=lambda r: (abs(rows[r][col]), r))
            rows[top], rows[best] = rows[best], rows[top]
            p = rows[top][col]
            done = True
            for r in range(top + 1, len(rows)):
                if rows[r][col]:
                    q = rows[r][col] // p
                    rows[r] = [a - q * b for a, b in zip(rows[r], rows[top])]
                    if rows[r][col]:
                        done = False
            if done:
                break
        if top < len(rows) and rows[top][col]:
            if rows[top][col] < 0:
                rows[top] = [-a for a in rows[top]]
            p = rows[top][col]
            for r in range(top):
                q = rows[r][col] // p
                if q:
                    rows[r] = [a - q * b for a, b in zip(rows[r], rows[top])]
            pivots.append(col)
            top += 1
            rows = rows[:top] + [r for r in rows[top:] if any(r)]
    basis = [tuple(r) for r in rows[:top]]
    return tuple(basis), tuple(pivots)


class Lattice:
    """Sublattice of Z^dim held as a reduced row-echelon basis.

    The basis is canonical, so two lattices are equal iff their bases are.
    ``reduce`` returns the canonical representative of a coset.
    """

    __slots__ = ("dim", "basis", "pivots")

    def __init__(self, rows: Iterable[Sequence[int]], dim: int):
        self.dim = dim
        self.basis, self.pivots = _echelon(rows, dim)

    def reduce(self, v: Sequence[int]) -> tuple:
        if len(v) != self.dim:
            raise DimensionError(f"vector of length {len(v)} in Z^{self.dim}")
        v = list(v)
        for row, col in zip(self.basis, self.pivots):
            q = v[col] // row[col]
            if q:
                for k in range(col, self.dim):
                    v[k] -= q * row[k]
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __le__(self, other: "Lattice") -> bool:
        return all(other.contains(r) for r in self.basis)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __repr__(self):
        return f"Lattice(dim={self.dim}, basis={list(self.basis)})"


# --------------------------------------------------------------------------
# Solving A x = c modulo a subgroup
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientSolution:
    x: tuple
    kernel_basis: tuple


def solve_in_quotient(A: IntMatrix, c: Sequence[int],
                      S: Optional[IntMatrix] = None) -> Optional[QuotientSolution]:
    """Solve ``A x = c`` modulo the row span of ``S``.

    ``S`` rows live in the target space Z^rows(A).  Returns a particular
    solution and generators for the solutions of the homogeneous equation,
    or ``None`` when ``c`` is not in ``image(A) + span(S)``.
    """
    r, n = A.rows, A.cols
    if len(c) != r:
        raise DimensionError(f"right-hand side has length {len(c)}, expected {r}")
    if S is None:
        S = IntMatrix.zeros(0, r)
    if S.cols != r:
        raise DimensionError(f"subgroup generators have length {S.cols}, expected {r}")

    B = [A.row(i) + [S[k, i] for k in range(S.rows)] for i in range(r)]
    N = n + S.rows
    if N == 0:
        return QuotientSolution((), ()) if not any(c) else None
    if r == 0:
        return QuotientSolution((0,) * n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
    snf = smith_normal_form(IntMatrix.from_rows(B, N))
    w = snf.U.apply(list(c))
    z = [0] * N
    for i in range(snf.rank):
        d = snf.invariant_factors[i]
        if w[i] % d:
            return None
        z[i] = w[i] // d
    if any(w[snf.rank:]):
        return None
    full = snf.V.apply(z)
    x = tuple(full[:n])
    kernel = []
    for j in range(snf.rank, N):
        k = tuple(snf.V[i, j] for i in range(n))
        if any(k):
            kernel.append(k)
    if n:
        kernel = list(Lattice(kernel, n).basis)
    sol = QuotientSolution(x, tuple(kernel))
    residual = [a - b for a, b in zip(A.apply(list(x)), c)]
    if any(residual) and not Lattice(S.tolist(), r).contains(residual):
        raise ArithmeticError("solve_in_quotient produced a non-solution")
    return sol


# --------------------------------------------------------------------------
# Finitely presented abelian groups
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z^num_generators modulo the row span of ``relations``."""

    num_generators: int
    relations: IntMatrix = None

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(0, self.num_generators))
        if self.relations.cols != self.num_generators:
            raise DimensionError("relation vectors must have length num_generators")

    @classmethod
    def cyclic(cls, *orders: int) -> "AbelianGroupPresentation":
        """Direct sum of cyclic groups; order 0 means Z."""
        k = len(orders)
        rows = [[o if i == j else 0 for j in range(k)] for i, o in enumerate(orders) if o]
        return cls(k, IntMatrix.from_rows(rows, k))

    def invariant_factors(self) -> tuple:
        """(torsion invariant factors > 1, free rank)."""
        if self.relations.rows == 0:
            return (), self.num_generators
        snf = smith_normal_form(self.relations)
        return tuple(d for d in snf.invariant_factors if d != 1), self.num_generators - snf.rank


@dataclass(frozen=True)
class TensorResult:
    cardinality: int
    cyclic_orders: tuple


@dataclass(frozen=True)
class TorResult:
    is_tor_free: bool
    cardinality: int


def tensor_with_zmod(G: AbelianGroupPresentation, m: int) -> TensorResult:
    """Structure of G (x) Z/m from the invariant factors of G."""
    if m < 1:
        raise ValueError("m must be positive")
    torsion, free = G.invariant_factors()
    orders = [gcd(d, m) for d in torsion if gcd(d, m) > 1]
    if m > 1:
        orders += [m] * free
    card = 1
    for o in orders:
        card *= o
    return TensorResult(card, tuple(sorted(orders)))


def tor_with_zmod(G: AbelianGroupPresentation, m: int) -> TorResult:
    """Tor(G, Z/m), i.e. the m-torsion subgroup of G."""
    if m < 1:
        raise ValueError("m must be positive")
    torsion, _ = G.invariant_factors()
    card = 1
    for d in torsion:
        card *= gcd(d, m)
    return TorResult(card == 1, card)
