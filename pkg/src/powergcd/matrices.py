"""Power GCD / LCM matrices and their structured determinants and inverses.

Vocabulary used below, for a gcd-closed set S = {x_0 < ... < x_{n-1}}:

* ``weight(S, k, f)`` is the Bourque-Ligh weight of x_k: the sum of
  ``(f * mu)(d)`` over divisors d of x_k that divide no smaller element of S.
  ``det (f(S)) = prod weight(S, k, f)``.
* ``mobius_coeff(S, i, j)`` is the integer coefficient c_ij: the sum of
  ``mu(d)`` over d with ``d*x_i | x_j`` and ``d*x_i`` dividing no element
  smaller than x_j.  It vanishes unless x_i | x_j.

With these, ``(f(S))^-1[i][j] = sum over k with x_i, x_j | x_k of
c_ik c_jk / weight_k``.  Every structured formula has an elimination-based
counterpart in :mod:`powergcd.linalg`, and the test-suite keeps the two in
lockstep.

All indices are 0-based positions in the sorted set.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm

from .arith import (
    _conv_mobius,
    _divisors,
    _mobius,
    inverse_power_fn,
    power_fn,
)
from .errors import (
    AlphaZero,
    ConditionGViolated,
    GtdTooLarge,
    IndexOutOfRange,
    NotFactorClosed,
    NotGcdClosed,
    Singular,
    UnsupportedFn,
)
from .linalg import ExactMatrix, det_oracle, inverse_oracle
from .structure import GcdSet, _condition_g, gtd_table, is_factor_closed, is_gcd_closed

__all__ = [
    "build_gcd_matrix",
    "build_lcm_matrix",
    "build_power_gcd_matrix",
    "coeff_table",
    "det_gcd_structured",
    "det_lcm_structured",
    "det_minor_lin_hong",
    "det_smith",
    "inverse_gcd_structured",
    "inverse_lcm_structured",
    "inverse_structured",
    "mobius_coeff",
    "mobius_coeff_closed",
    "weight",
    "weight_from_gtd",
    "weight_table",
]


def _closed(S):
    S = GcdSet(S)
    if not is_gcd_closed(S):
        raise NotGcdClosed(f"{list(S)} is not gcd-closed")
    return S


def _index(S, k):
    if not 0 <= k < len(S):
        raise IndexOutOfRange(f"index {k} outside 0..{len(S) - 1}")
    return k


def build_gcd_matrix(S, f):
    """``(f(S))``: entry (i, j) is ``f(gcd(x_i, x_j))``."""
    S = GcdSet(S)
    vals = {}
    rows = []
    for u in S:
        row = []
        for v in S:
            g = gcd(u, v)
            if g not in vals:
                vals[g] = f(g)
            row.append(vals[g])
        rows.append(row)
    return ExactMatrix(rows)


def build_power_gcd_matrix(S, a):
    return build_gcd_matrix(S, power_fn(a))


def build_lcm_matrix(S, a):
    """``[S^a]``: entry (i, j) is ``lcm(x_i, x_j) ** a``."""
    S = GcdSet(S)
    return ExactMatrix([[lcm(u, v) ** a for v in S] for u in S])


def weight(S, k, f):
    """Bourque-Ligh weight of ``S[k]`` for the arithmetic function ``f``."""
    S = _closed(S)
    _index(S, k)
    return _weight(S, k, f)


def _weight(S, k, f):
    x = S[k]
    smaller = S[:k]
    total = Fraction(0)
    for d in _divisors(x):
        if not any(t % d == 0 for t in smaller):
            total += _conv_mobius(f, d)
    return total


def weight_from_gtd(S, k, f):
    """The same weight by inclusion-exclusion over the greatest-type divisors.

    Only power functions ``x**a`` and ``x**-a`` are accepted.
    """
    S = _closed(S)
    _index(S, k)
    if not getattr(f, "is_power", False):
        raise UnsupportedFn(f"{f!r} is not a power function")
    x = S[k]
    gx = gtd_table(S)[k]
    total = Fraction(0)
    for size in range(len(gx) + 1):
        sign = -1 if size % 2 else 1
        for sub in combinations(gx, size):
            total += sign * f(gcd(x, *sub))
    return total


@lru_cache(maxsize=4096)
def _weight_table(S, f):
    return tuple(_weight(S, k, f) for k in range(len(S)))


def weight_table(S, f):
    """Memoised weights for every index of ``S``."""
    return _weight_table(_closed(S), f)


def mobius_coeff(S, i, j):
    """c_ij evaluated straight from its defining Moebius sum."""
    S = _closed(S)
    _index(S, i)
    _index(S, j)
    return _mobius_coeff(S, i, j)


def _mobius_coeff(S, i, j):
    xi, xj = S[i], S[j]
    if xj % xi:
        return 0
    smaller = S[:j]
    total = 0
    for d in _divisors(xj // xi):
        dx = d * xi
        if not any(t % dx == 0 for t in smaller):
            total += _mobius(d)
    return total


@lru_cache(maxsize=4096)
def _coeff_table(S):
    n = len(S)
    return tuple(tuple(_mobius_coeff(S, i, j) for j in range(n)) for i in range(n))


def coeff_table(S):
    """Memoised c_ij for all i, j (row i, column j)."""
    return _coeff_table(_closed(S))


def mobius_coeff_closed(S, r, m):
    """c_rm from the case tables for at most three greatest-type divisors.

    ``G(x_m)`` empty:  1 at r = m.
    One divisor y:     -1 at y, 1 at x_m.
    Two, y1 and y2:    -1 at y1, y2; 1 at x_m and (y1, y2).
    Three, y1..y3:     1 at x_m and each pairwise gcd; -1 at y1, y2, y3 and
                       their common gcd.  Requires condition G on S.
    Zero everywhere else.
    """
    S = _closed(S)
    _index(S, r)
    _index(S, m)
    gx = gtd_table(S)[m]
    xr, xm = S[r], S[m]
    if len(gx) > 3:
        raise GtdTooLarge(f"{xm} has {len(gx)} greatest-type divisors")
    plus, minus = {xm}, set()
    if len(gx) == 1:
        minus = {gx[0]}
    elif len(gx) == 2:
        minus = set(gx)
        plus.add(gcd(*gx))
    elif len(gx) == 3:
        verdict = _condition_g(S)
        if not verdict.holds:
            raise ConditionGViolated(f"condition G fails at {verdict.witness}")
        y1, y2, y3 = gx
        plus |= {gcd(y1, y2), gcd(y1, y3), gcd(y2, y3)}
        minus = {y1, y2, y3, gcd(y1, y2, y3)}
    if xr in plus:
        return 1
    if xr in minus:
        return -1
    return 0


def det_smith(S, f):
    """Smith's product ``prod (f * mu)(x)`` for a factor-closed set."""
    S = GcdSet(S)
    if not is_factor_closed(S):
        raise NotFactorClosed(f"{list(S)} is not factor-closed")
    out = Fraction(1)
    for x in S:
        out *= _conv_mobius(f, x)
    return out


def det_gcd_structured(S, a):
    out = Fraction(1)
    for w in weight_table(S, power_fn(a)):
        out *= w
    return out


def det_lcm_structured(S, a):
    S = _closed(S)
    out = Fraction(1)
    for x, w in zip(S, weight_table(S, inverse_power_fn(a))):
        out *= x ** (2 * a) * w
    return out


def det_minor_lin_hong(S, f, t):
    """Lin-Hong value of the minor of ``(f(S))`` with row/column t removed.

    Sum over l with x_t | x_l and x_l / x_t squarefree of the product of
    ``(f * mu)(x_k)`` over k != l.  For a one-element set this is the empty
    product, 1.
    """
    S = GcdSet(S)
    if not is_factor_closed(S):
        raise NotFactorClosed(f"{list(S)} is not factor-closed")
    _index(S, t)
    return _lin_hong_table(S, f)[t]


@lru_cache(maxsize=1024)
def _lin_hong_table(S, f):
    conv = [_conv_mobius(f, x) for x in S]
    zeros = [k for k, c in enumerate(conv) if c == 0]
    full = Fraction(1)
    for c in conv:
        if c:
            full *= c
    # product over k != l: all nonzero factors, with l taken out
    if not zeros:
        without = [full / c for c in conv]
    else:
        without = [full if zeros == [l] else Fraction(0) for l in range(len(S))]
    out = []
    for xt in S:
        total = Fraction(0)
        for l, xl in enumerate(S):
            if xl % xt == 0 and _mobius(xl // xt) != 0:
                total += without[l]
        out.append(total)
    return tuple(out)


def _structured_inverse(S, weights, scale=None):
    c = _coeff_table(S)
    n = len(S)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = Fraction(0)
            for k in range(max(i, j), n):
                cik, cjk = c[i][k], c[j][k]
                if cik and cjk:
                    total += Fraction(cik * cjk) / weights[k]
            if scale is not None:
                total /= scale[i] * scale[j]
            row.append(total)
        rows.append(row)
    return ExactMatrix(rows)


def inverse_structured(S, f):
    """``(f(S))^-1`` from weights and c coefficients, for any ``f``.

    The formula needs ``(f(S))`` nonsingular; with no general criterion
    available this is confirmed by elimination first.
    """
    S = _closed(S)
    if det_oracle(build_gcd_matrix(S, f)) == 0:
        raise Singular(f"({f.name}(S)) is singular for {list(S)}")
    weights = _weight_table(S, f)
    if any(w == 0 for w in weights):
        raise AlphaZero("a weight vanished on a nonsingular matrix")
    return _structured_inverse(S, weights)


def inverse_gcd_structured(S, a):
    S = _closed(S)
    # positive definite, so every weight is a ratio of positive minors
    return _structured_inverse(S, _weight_table(S, power_fn(a)))


def inverse_lcm_structured(S, a):
    """``[S^a]^-1`` via the inverse-power weights; needs max |G(x)| <= 3."""
    S = _closed(S)
    if max(len(g) for g in gtd_table(S)) > 3:
        raise GtdTooLarge("nonvanishing of the weights is only known for at most 3")
    weights = _weight_table(S, inverse_power_fn(a))
    for x, w in zip(S, weights):
        if w == 0:
            raise AlphaZero(f"inverse-power weight of {x} is zero")
    return _structured_inverse(S, weights, scale=[x ** a for x in S])


def inverse_gcd_oracle(S, a):
    return inverse_oracle(build_power_gcd_matrix(S, a))


def inverse_lcm_oracle(S, a):
    return inverse_oracle(build_lcm_matrix(S, a))
