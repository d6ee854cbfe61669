"""Exact rational matrices: LDL^T PSD certification, inverses, ranks, Kronecker products.

Every scalar is a :class:`fractions.Fraction`. Matrices are small and dense, so
they are stored as tuples of row tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class SingularMatrix(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal literal such as ``"0.25"`` exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not s:
        raise ValueError("empty rational literal")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Dense matrix over the rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(x if type(x) is Fraction else Fraction(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.rows)
        return f"{type(self).__name__}([{body}])"

    def _wrap(self, rows, other: "Matrix | None" = None):
        # sums, differences and multiples of symmetric matrices stay symmetric
        if isinstance(self, SymMatrix) and (other is None or isinstance(other, SymMatrix)):
            return _trusted_sym(rows)
        return _auto(rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return self._wrap(_entrywise(Fraction.__add__, self.rows, other.rows), other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return self._wrap(_entrywise(Fraction.__sub__, self.rows, other.rows), other)

    def __neg__(self) -> "Matrix":
        return self._wrap([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        memo: dict[int, Fraction] = {}  # keyed by id: entries stay alive in self.rows
        out = []
        for r in self.rows:
            row = []
            for a in r:
                v = memo.get(id(a))
                if v is None:
                    v = memo[id(a)] = c * a
                row.append(v)
            out.append(row)
        return self._wrap(out)

    def __mul__(self, c) -> "Matrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        # clear denominators so the inner loop runs on Python ints
        da, ia = _integer_rows(self.rows)
        db, ib = _integer_rows(other.rows)
        den = da * db
        cols = list(zip(*ib))
        return _auto([[Fraction(sum(map(int.__mul__, r, c)), den) for c in cols] for r in ia])

    def transpose(self) -> "Matrix":
        return _auto(zip(*self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return _auto([[self.rows[i][j] for j in cols] for i in rows])

    def apply(self, x: Sequence) -> list[Fraction]:
        return [sum((a * Fraction(b) for a, b in zip(r, x)), Fraction(0)) for r in self.rows]

    def quadratic_form(self, x: Sequence) -> Fraction:
        return sum((Fraction(a) * b for a, b in zip(x, self.apply(x))), Fraction(0))

    def is_symmetric(self) -> bool:
        n = self.nrows
        return n == self.ncols and self.rows == tuple(zip(*self.rows))

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)


class SymMatrix(Matrix):
    """Square symmetric rational matrix."""

    __slots__ = ()

    def __init__(self, rows: Iterable[Iterable]):
        super().__init__(rows)
        if self.nrows != self.ncols:
            raise NotSymmetric(f"not square: {self.shape}")
        if not self.is_symmetric():
            raise NotSymmetric("matrix is not symmetric")

    @property
    def order(self) -> int:
        return self.nrows

    def principal(self, idx: Sequence[int]) -> "SymMatrix":
        return _trusted_sym([[self.rows[i][j] for j in idx] for i in idx])


def _entrywise(op, rows_a, rows_b) -> list[list[Fraction]]:
    # structured matrices repeat few distinct entries; share the result objects
    memo: dict[tuple[int, int], Fraction] = {}
    out = []
    for r, s in zip(rows_a, rows_b):
        row = []
        for a, b in zip(r, s):
            key = (id(a), id(b))
            v = memo.get(key)
            if v is None:
                v = memo[key] = op(a, b)
            row.append(v)
        out.append(row)
    return out


def _integer_rows(rows) -> tuple[int, list[list[int]]]:
    den = 1
    for r in rows:
        for x in r:
            d = x.denominator
            if den % d:
                den = den * d // math.gcd(den, d)
    return den, [[x.numerator * (den // x.denominator) for x in r] for r in rows]


def _trusted_sym(rows) -> SymMatrix:
    m = Matrix(rows)
    sym = SymMatrix.__new__(SymMatrix)
    sym.rows, sym.nrows, sym.ncols = m.rows, m.nrows, m.ncols
    return sym


def _auto(rows) -> Matrix:
    m = Matrix(rows)
    if m.nrows == m.ncols and m.is_symmetric():
        sym = SymMatrix.__new__(SymMatrix)
        sym.rows, sym.nrows, sym.ncols = m.rows, m.nrows, m.ncols
        return sym
    return m


def identity(n: int) -> SymMatrix:
    one, zero = Fraction(1), Fraction(0)
    return _trusted_sym([[one if i == j else zero for j in range(n)] for i in range(n)])


def ones(n: int) -> SymMatrix:
    return _trusted_sym([[Fraction(1)] * n for _ in range(n)])


def zeros(n: int) -> SymMatrix:
    return _trusted_sym([[Fraction(0)] * n for _ in range(n)])


@dataclass(frozen=True)
class PsdCertificate:
    is_psd: bool
    rank: int
    failure_witness: tuple[Fraction, ...] | None = None
    pivots: tuple[Fraction, ...] = ()


def ldlt_certify(a: SymMatrix) -> PsdCertificate:
    """Certify positive semidefiniteness by exact diagonal-pivoted LDL^T.

    Pivots on the largest remaining diagonal entry. A negative pivot, or a zero
    diagonal facing a nonzero off-diagonal, ends the factorization with an
    explicit vector ``x`` such that ``x^T A x < 0``.
    """
    n = a.order
    s = [list(r) for r in a.rows]  # Schur complement, indexed by original labels
    remaining = list(range(n))
    steps: list[tuple[int, dict[int, Fraction]]] = []  # (pivot, multipliers l_{j,p})
    pivots: list[Fraction] = []

    while remaining:
        p = max(remaining, key=lambda k: (abs(s[k][k]), -k))
        d = s[p][p]
        if d < 0:
            y = {p: Fraction(1)}
            return _fail(a, steps, y, pivots)
        if d == 0:
            for i in remaining:
                for j in remaining:
                    if i != j and s[i][j] != 0:
                        # all remaining diagonals are zero: (e_i - sign e_j) is negative
                        y = {i: Fraction(1), j: Fraction(-1 if s[i][j] > 0 else 1)}
                        return _fail(a, steps, y, pivots)
            break
        remaining.remove(p)
        sp = s[p]
        mult = {j: sp[j] / d for j in remaining}
        for i in remaining:
            li = mult[i]
            if li == 0:
                continue
            row = s[i]
            for j in remaining:
                if sp[j]:
                    row[j] -= li * sp[j]
        steps.append((p, mult))
        pivots.append(d)
    return PsdCertificate(True, len(pivots), None, tuple(pivots))


def _fail(a: SymMatrix, steps, y: dict[int, Fraction], pivots) -> PsdCertificate:
    # back-substitute so that the eliminated coordinates cancel; x^T A x = y^T S y
    x = [Fraction(0)] * a.order
    for k, v in y.items():
        x[k] = v
    for p, mult in reversed(steps):
        x[p] = -sum((mult[j] * x[j] for j in mult), Fraction(0))
    value = a.quadratic_form(x)
    if value >= 0:  # pragma: no cover - would indicate an elimination bug
        raise AssertionError("failed to produce a negative witness")
    return PsdCertificate(False, rank(a), tuple(x), tuple(pivots))


def rank(a: Matrix) -> int:
    """Rank by fraction-exact Gaussian elimination with row pivoting."""
    rows = [list(r) for r in a.rows]
    r = 0
    for c in range(a.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f /= pr[c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def inverse(a: Matrix) -> Matrix:
    """Exact Gauss-Jordan inverse; raises :class:`SingularMatrix` when rank < order."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix of order {n} is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv_p = 1 / aug[c][c]
        aug[c] = [x * inv_p for x in aug[c]]
        pr = aug[c]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], pr)]
    return _auto([r[n:] for r in aug])


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Solve ``a x = b`` for nonsingular square ``a``."""
    n = a.nrows
    aug = [list(r) + [Fraction(v)] for r, v in zip(a.rows, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix of order {n} is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        pr = aug[c]
        for i in range(c + 1, n):
            if aug[i][c]:
                f = aug[i][c] / pr[c]
                aug[i] = [x - f * y for x, y in zip(aug[i], pr)]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = aug[i][n] - sum((aug[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = acc / aug[i][i]
    return x


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; entry ((i,k),(j,l)) is a[i][j] * b[k][l]."""
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return _auto(rows)


def charpoly(a: Matrix) -> list[Fraction]:
    """Characteristic polynomial det(xI - A), coefficients from x^n down to x^0.

    Reduces to upper Hessenberg form by exact elimination similarity
    transforms, then runs the standard Hessenberg recurrence.
    """
    n = a.nrows
    h = [list(r) for r in a.rows]
    for k in range(n - 2):
        piv = next((i for i in range(k + 1, n) if h[i][k] != 0), None)
        if piv is None:
            continue
        if piv != k + 1:
            h[piv], h[k + 1] = h[k + 1], h[piv]
            for r in h:
                r[piv], r[k + 1] = r[k + 1], r[piv]
        for i in range(k + 2, n):
            if h[i][k] == 0:
                continue
            f = h[i][k] / h[k + 1][k]
            h[i] = [x - f * y for x, y in zip(h[i], h[k + 1])]
            for r in h:
                r[k + 1] += f * r[i]
    # p[j] = charpoly of leading j x j block, as coefficient lists (low degree first)
    p: list[list[Fraction]] = [[Fraction(1)]]
    for m in range(1, n + 1):
        # x * p[m-1] - h[m-1][m-1] * p[m-1]
        prev = p[m - 1]
        cur = [Fraction(0)] + prev
        for i, c in enumerate(prev):
            cur[i] -= h[m - 1][m - 1] * c
        prod = Fraction(1)
        for i in range(1, m):
            prod *= h[m - i][m - i - 1]
            coeff = prod * h[m - i - 1][m - 1]
            if coeff:
                for j, c in enumerate(p[m - i - 1]):
                    cur[j] -= coeff * c
        p.append(cur)
    return list(reversed(p[n]))


def polyval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc
