"""Dense exact matrices and fraction-free elimination.

Rows of a rational matrix are scaled to integers (each row by the lcm of its
denominators), then reduced with Bareiss' one-step fraction-free scheme, so
every intermediate value is a Python int and every division is exact.
"""
from fractions import Fraction
from math import lcm

from .arith import format_rational
from .errors import DimensionMismatch, IndexOutOfRange, Singular

__all__ = ["ExactMatrix", "det_oracle", "inverse_oracle", "solve", "right_quotient"]


class ExactMatrix:
    """Immutable square matrix of Fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(v if type(v) is Fraction else Fraction(v) for v in r)
                     for r in rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("matrix must be square")
        self.rows = rows

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(v) for v in r) for r in self.rows)
        return f"ExactMatrix([{body}])"

    def __matmul__(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n}x{self.n} @ {other.n}x{other.n}")
        cols = list(zip(*other.rows))
        return ExactMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                            for r in self.rows])

    def transpose(self):
        return ExactMatrix(zip(*self.rows))

    def is_symmetric(self):
        return all(self.rows[i][j] == self.rows[j][i]
                   for i in range(self.n) for j in range(i))

    def is_integral(self):
        return all(v.denominator == 1 for r in self.rows for v in r)

    def first_nonintegral(self):
        """``(i, j, value)`` of the first non-integer entry in row-major order."""
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if v.denominator != 1:
                    return i, j, v
        return None

    def minor(self, t):
        """Delete row and column ``t``."""
        if not 0 <= t < self.n:
            raise IndexOutOfRange(f"index {t} outside 0..{self.n - 1}")
        return ExactMatrix([[v for j, v in enumerate(r) if j != t]
                            for i, r in enumerate(self.rows) if i != t])

    def leading(self, k):
        return ExactMatrix([r[:k] for r in self.rows[:k]])

    def to_text(self):
        return "\n".join("\t".join(format_rational(v) for v in r) for r in self.rows)

    def to_json(self):
        return [[format_rational(v) for v in r] for r in self.rows]


def _as_matrix(M):
    return M if isinstance(M, ExactMatrix) else ExactMatrix(M)


def _integer_rows(rows):
    """Scale each row to integers; returns the int rows and the row scales."""
    out, scales = [], []
    for r in rows:
        s = lcm(*[v.denominator for v in r]) if r else 1
        if s == 1:
            out.append([v.numerator for v in r])
        else:
            out.append([v.numerator * (s // v.denominator) for v in r])
        scales.append(s)
    return out, scales


def _bareiss(M, n):
    """In-place fraction-free forward elimination on the first n columns.

    ``M`` is a list of n int rows (possibly augmented).  Returns the sign of
    the row permutation, or 0 if a zero pivot column is met (singular).
    """
    sign = 1
    prev = 1
    width = len(M[0]) if M else 0
    for k in range(n):
        p = k
        while p < n and M[p][k] == 0:
            p += 1
        if p == n:
            return 0
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        pivot = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            f = rowi[k]
            if f == 0:
                if pivot != prev:
                    for j in range(k + 1, width):
                        rowi[j] = rowi[j] * pivot // prev
            else:
                for j in range(k + 1, width):
                    rowi[j] = (rowi[j] * pivot - f * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    return sign


def det_oracle(M):
    """Exact determinant.  The empty matrix has determinant 1."""
    M = _as_matrix(M)
    n = M.n
    if n == 0:
        return Fraction(1)
    rows, scales = _integer_rows(M.rows)
    sign = _bareiss(rows, n)
    if sign == 0:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * rows[n - 1][n - 1], denom)


def solve(A, B):
    """Exact ``X`` with ``A @ X == B``; raises :class:`Singular`."""
    A, B = _as_matrix(A), _as_matrix(B)
    n = A.n
    if B.n != n:
        raise DimensionMismatch(f"{n}x{n} system with {B.n}x{B.n} right-hand side")
    if n == 0:
        return ExactMatrix([])
    rows, _ = _integer_rows([ra + rb for ra, rb in zip(A.rows, B.rows)])
    if _bareiss(rows, n) == 0:
        raise Singular("matrix is singular")
    d = rows[n - 1][n - 1]
    # Back substitution on d*X, which is integral (Cramer), so // is exact.
    dx = [[0] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        ri = rows[i]
        piv = ri[i]
        for c in range(n):
            acc = d * ri[n + c]
            for j in range(i + 1, n):
                acc -= ri[j] * dx[j][c]
            dx[i][c] = acc // piv
    return ExactMatrix([[Fraction(v, d) for v in r] for r in dx])


def inverse_oracle(M):
    M = _as_matrix(M)
    return solve(M, ExactMatrix.identity(M.n))


def right_quotient(Mb, Ma):
    """``Mb @ Ma^-1``, computed by solving ``Ma^T X = Mb^T``."""
    Mb, Ma = _as_matrix(Mb), _as_matrix(Ma)
    if Mb.n != Ma.n:
        raise DimensionMismatch(f"{Mb.n}x{Mb.n} by {Ma.n}x{Ma.n}")
    return solve(Ma.transpose(), Mb.transpose()).transpose()
