"""Divisibility among power GCD and power LCM matrices over the integers.

For symmetric N and M, ``M = N A`` with integral A holds iff ``M = A' N``
with ``A' = A^T`` integral, so one right quotient ``M N^-1`` decides the
"left or right factor" question.

The quotient is also assembled a second way, from per-column kernels::

    (S^b)(S^a)^-1 [l][j] = sum over x_j | x_m of c_jm * kernel_gcd_gcd(l, m)
    [S^b](S^a)^-1 [l][j] = sum over x_j | x_m of c_jm * kernel_gcd_lcm(l, m)
    [S^b][S^a]^-1 [l][s] = sum over x_s | x_m of c_sm * kernel_lcm_lcm(l, m, s)

and the kernels themselves have closed forms (:func:`kernel_closed_form`)
that expose why they are integers.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from math import gcd, lcm
from typing import NamedTuple, Optional

from .arith import format_rational, inverse_power_fn, power_fn
from .errors import (
    AlphaZero,
    ConditionGViolated,
    DimensionMismatch,
    NotADivisor,
    NotDividing,
    NotGcdClosed,
    Singular,
)
from .linalg import ExactMatrix, right_quotient
from .matrices import _coeff_table, _weight_table, build_lcm_matrix, build_power_gcd_matrix
from .structure import (
    GcdSet,
    _condition_g,
    gtd_table,
    interval_holds_g,
    is_gcd_closed,
)

__all__ = [
    "ALL_KINDS",
    "PairKind",
    "DivisibilityReport",
    "Violation",
    "check_double_gtd_divisibility",
    "check_single_gtd_divisibility",
    "check_triple_gtd_divisibility",
    "divides",
    "kernel_case",
    "kernel_closed_form",
    "kernel_gcd_gcd",
    "kernel_gcd_lcm",
    "kernel_lcm_lcm",
    "quotient",
    "quotient_via_kernels",
    "theorem_hypotheses",
    "triple_gtd_ratios",
    "validate_theorems",
]


class PairKind(str, Enum):
    GCD_GCD = "gcd-gcd"
    GCD_LCM = "gcd-lcm"
    LCM_LCM = "lcm-lcm"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        return cls(text)


ALL_KINDS = tuple(PairKind)

DECIDED = "Decided"
SINGULAR_DIVISOR = "SingularDivisor"


def _closed(S):
    S = GcdSet(S)
    if not is_gcd_closed(S):
        raise NotGcdClosed(f"{list(S)} is not gcd-closed")
    return S


def _divides_int(d, n):
    return n == 0 if d == 0 else n % d == 0


def _is_int(q):
    return Fraction(q).denominator == 1


# -- kernels ---------------------------------------------------------------

def _check_lm(S, *idx):
    n = len(S)
    for k in idx:
        if not 0 <= k < n:
            raise IndexError(f"index {k} outside 0..{n - 1}")


def kernel_gcd_gcd(S, a, b, l, m):
    """``(1/w_m) * sum over x_r | x_m of c_rm * (x_l, x_r)^b``, w = weight for x^a."""
    S = _closed(S)
    _check_lm(S, l, m)
    return _kernel_gcd(S, a, b, l, m)


def _kernel_gcd(S, a, b, l, m):
    c = _coeff_table(S)
    xl = S[l]
    num = sum(c[r][m] * gcd(xl, S[r]) ** b for r in range(m + 1) if c[r][m])
    return Fraction(num) / _weight_table(S, power_fn(a))[m]


def kernel_gcd_lcm(S, a, b, l, m):
    """As :func:`kernel_gcd_gcd` with ``[x_l, x_r]^b`` in the sum."""
    S = _closed(S)
    _check_lm(S, l, m)
    return _kernel_lcm(S, a, b, l, m)


def _kernel_lcm(S, a, b, l, m):
    c = _coeff_table(S)
    xl = S[l]
    num = sum(c[r][m] * lcm(xl, S[r]) ** b for r in range(m + 1) if c[r][m])
    return Fraction(num) / _weight_table(S, power_fn(a))[m]


def kernel_lcm_lcm(S, a, b, l, m, s):
    """``sum over x_r | x_m of c_rm [x_l, x_r]^b / x_r^a``, over ``x_s^a w_m``.

    Here w_m is the weight for ``x**-a``; x_s must divide x_m.
    """
    S = _closed(S)
    _check_lm(S, l, m, s)
    if S[m] % S[s]:
        raise NotADivisor(f"{S[s]} does not divide {S[m]}")
    return _kernel_ll(S, a, b, l, m, s)


def _kernel_ll(S, a, b, l, m, s):
    w = _weight_table(S, inverse_power_fn(a))[m]
    if w == 0:
        raise AlphaZero(f"inverse-power weight of {S[m]} is zero")
    c = _coeff_table(S)
    xl = S[l]
    num = sum((Fraction(c[r][m] * lcm(xl, S[r]) ** b, S[r] ** a)
               for r in range(m + 1) if c[r][m]), Fraction(0))
    return num / (S[s] ** a * w)


# -- quotients -------------------------------------------------------------

def pair_matrices(S, a, b, kind):
    """``(divisor, dividend)`` for a pair kind."""
    kind = PairKind.parse(kind)
    if kind is PairKind.GCD_GCD:
        return build_power_gcd_matrix(S, a), build_power_gcd_matrix(S, b)
    if kind is PairKind.GCD_LCM:
        return build_power_gcd_matrix(S, a), build_lcm_matrix(S, b)
    return build_lcm_matrix(S, a), build_lcm_matrix(S, b)


def quotient(Mb, Ma):
    """Right quotient ``Mb @ Ma^-1``; raises :class:`Singular`."""
    if Mb.n != Ma.n:
        raise DimensionMismatch(f"{Mb.n}x{Mb.n} over {Ma.n}x{Ma.n}")
    return right_quotient(Mb, Ma)


def quotient_via_kernels(S, a, b, kind):
    S = _closed(S)
    kind = PairKind.parse(kind)
    n = len(S)
    c = _coeff_table(S)
    rows = []
    if kind is PairKind.LCM_LCM:
        if any(w == 0 for w in _weight_table(S, inverse_power_fn(a))):
            raise AlphaZero("an inverse-power weight is zero")
        for l in range(n):
            rows.append([sum((c[s][m] * _kernel_ll(S, a, b, l, m, s)
                              for m in range(s, n) if c[s][m]), Fraction(0))
                         for s in range(n)])
    else:
        kern = _kernel_gcd if kind is PairKind.GCD_GCD else _kernel_lcm
        for l in range(n):
            k_l = [kern(S, a, b, l, m) for m in range(n)]
            rows.append([sum((c[j][m] * k_l[m] for m in range(j, n) if c[j][m]),
                             Fraction(0))
                         for j in range(n)])
    return ExactMatrix(rows)


@dataclass
class DivisibilityReport:
    """Outcome of one divisibility question.

    ``witness`` is ``(row, col, value)`` with 1-based row and column, as in
    matrix notation; ``integral`` is None when the divisor is singular.
    """

    set: GcdSet
    a: int
    b: int
    pair_kind: PairKind
    status: str
    integral: Optional[bool]
    witness: Optional[tuple] = None
    quotient: Optional[ExactMatrix] = field(default=None, repr=False)
    side: str = "right"
    symmetric: bool = True

    def to_dict(self, include_quotient=False):
        d = {
            "set": list(self.set),
            "a": self.a,
            "b": self.b,
            "pair_kind": self.pair_kind.value,
            "integral": self.integral,
            "status": self.status,
            "witness": None,
            "side": self.side,
            "symmetric": self.symmetric,
        }
        if self.witness is not None:
            row, col, value = self.witness
            d["witness"] = {"row": row, "col": col, "value": format_rational(value)}
        if include_quotient and self.quotient is not None:
            d["quotient"] = self.quotient.to_json()
        return d


def divides(S, a, b, kind):
    """Does the a-th power matrix divide the b-th power matrix of this kind?

    No hypothesis on ``S`` is required.
    """
    S = GcdSet(S)
    kind = PairKind.parse(kind)
    Ma, Mb = pair_matrices(S, a, b, kind)
    symmetric = Ma.is_symmetric() and Mb.is_symmetric()
    try:
        Q = quotient(Mb, Ma)
    except Singular:
        return DivisibilityReport(S, a, b, kind, SINGULAR_DIVISOR, None,
                                  symmetric=symmetric)
    bad = Q.first_nonintegral()
    witness = None if bad is None else (bad[0] + 1, bad[1] + 1, bad[2])
    return DivisibilityReport(S, a, b, kind, DECIDED, bad is None, witness, Q,
                              symmetric=symmetric)


# -- closed forms for the kernels -------------------------------------------

class KernelCase(NamedTuple):
    """How ``(x_l, x_m)`` sits inside the divisor lattice below x_m.

    ``case`` is one of ``"min"`` (x_m is the minimum), ``"1gtd"``, ``"2gtd"``
    (fewer than three greatest-type divisors), or, for exactly three,
    ``"1"`` (divides the common gcd m4), ``"2"`` (divides exactly two of
    them), ``"3-1"`` / ``"3-2"`` (divides exactly one, properly / equal),
    ``"4"`` (x_m | x_l).  ``labels`` is the greatest-type divisors in the
    order the closed form uses: for ``"2"`` the two divided ones first, for
    ``"3-*"`` the divided one first.
    """

    case: str
    labels: tuple


def kernel_case(S, l, m):
    S = _closed(S)
    xl, xm = S[l], S[m]
    gx = gtd_table(S)[m]
    if len(gx) == 0:
        return KernelCase("min", ())
    if len(gx) == 1:
        return KernelCase("1gtd", gx)
    if len(gx) == 2:
        return KernelCase("2gtd", gx)
    if len(gx) > 3:
        return KernelCase("many", gx)
    g = gcd(xl, xm)
    if g == xm:
        return KernelCase("4", gx)
    hit = [y for y in gx if y % g == 0]
    miss = [y for y in gx if y % g]
    if len(hit) == 3:
        return KernelCase("1", gx)
    if len(hit) == 2:
        return KernelCase("2", tuple(hit + miss))
    if len(hit) == 1:
        return KernelCase("3-2" if g == hit[0] else "3-1", tuple(hit + miss))
    raise AssertionError("a proper divisor of x_m in S divides some gtd")


def _alt8(xm, m1, m2, m3, e):
    """x_m^e - m1^e - m2^e - m3^e + m12^e + m13^e + m23^e - m4^e (e may be <= 0)."""
    m12, m13, m23 = gcd(m1, m2), gcd(m1, m3), gcd(m2, m3)
    m4 = gcd(m12, m3)
    F = Fraction
    return (F(xm) ** e - F(m1) ** e - F(m2) ** e - F(m3) ** e
            + F(m12) ** e + F(m13) ** e + F(m23) ** e - F(m4) ** e)


def kernel_closed_form(S, a, b, l, m, kind, s=None):
    """Kernel value from the case analysis rather than the defining sum.

    Fewer than three greatest-type divisors use the two- and four-term
    quotients; exactly three need condition G and follow the divisibility
    diagram of ``(x_l, x_m)`` (see :class:`KernelCase`).  Returns a
    Fraction which, under a | b, is an integer in every case.
    """
    S = _closed(S)
    kind = PairKind.parse(kind)
    F = Fraction
    xl, xm = S[l], S[m]
    xs = None
    if kind is PairKind.LCM_LCM:
        if s is None:
            raise TypeError("lcm-lcm kernel needs s")
        xs = S[s]
        if xm % xs:
            raise NotADivisor(f"{xs} does not divide {xm}")
    kc = kernel_case(S, l, m)

    if kc.case == "min":
        if kind is PairKind.GCD_GCD:
            return F(gcd(xl, xm) ** b, xm ** a)
        if kind is PairKind.GCD_LCM:
            return F(lcm(xl, xm) ** b, xm ** a)
        return F(lcm(xl, xm) ** b, xs ** a)

    if kc.case == "1gtd":
        (y,) = kc.labels
        if kind is PairKind.GCD_GCD:
            return F(gcd(xl, xm) ** b - gcd(xl, y) ** b, xm ** a - y ** a)
        if kind is PairKind.GCD_LCM:
            return F(lcm(xl, xm) ** b - lcm(xl, y) ** b, xm ** a - y ** a)
        return F(y ** a * lcm(xl, xm) ** b - xm ** a * lcm(xl, y) ** b,
                 xs ** a * (y ** a - xm ** a))

    if kc.case == "2gtd":
        y1, y2 = kc.labels
        y3 = gcd(y1, y2)
        den = xm ** a - y1 ** a - y2 ** a + y3 ** a
        if kind is PairKind.GCD_GCD:
            op = gcd
        elif kind is PairKind.GCD_LCM:
            op = lcm
        else:
            num = (xm ** a * lcm(xl, y3) ** b + y3 ** a * lcm(xl, xm) ** b
                   - y2 ** a * lcm(xl, y1) ** b - y1 ** a * lcm(xl, y2) ** b)
            return F(num, xs ** a * den)
        return F(op(xl, xm) ** b - op(xl, y1) ** b - op(xl, y2) ** b + op(xl, y3) ** b,
                 den)

    if kc.case == "many":
        raise ValueError("no closed form beyond three greatest-type divisors")
    verdict = _condition_g(S)
    if not verdict.holds:
        raise ConditionGViolated(f"condition G fails at {verdict.witness}")

    m1, m2, m3 = kc.labels
    g = gcd(xl, xm)
    if kind is PairKind.GCD_GCD:
        if kc.case == "4":
            return _alt8(xm, m1, m2, m3, b) / _alt8(xm, m1, m2, m3, a)
        return F(0)
    if kind is PairKind.GCD_LCM:
        if kc.case == "1":
            return F(xl ** b, g ** b) * _alt8(xm, m1, m2, m3, b) / _alt8(xm, m1, m2, m3, a)
        return F(0)
    # lcm-lcm
    if kc.case == "4":
        return F(xl ** b, xs ** a)
    if kc.case == "1":
        return (F(xl ** b, g ** b) * _alt8(xm, m1, m2, m3, b - a)
                / (xs ** a * _alt8(xm, m1, m2, m3, -a)))
    if kc.case == "2":
        delta = xm // m1
        p, q = xm // delta, m2 // delta
        return (F(xm ** a, xs ** a) * F(m2 ** a, delta ** a) * F(xl ** b, g ** b)
                * F(p ** (b - a) - q ** (b - a), p ** a - q ** a)
                * F(delta ** (b - a) - 1, delta ** a - 1))
    # cases 3-1 and 3-2 share one expression
    return (m1 ** a * F(xm, xs) ** a * F(xl, g) ** b
            * F(xm ** (b - a) - m1 ** (b - a), m1 ** a - xm ** a))


# -- divisibility facts behind the integrality of the kernels ---------------

class Violation(NamedTuple):
    rule: str
    data: tuple

    def to_dict(self):
        return {"rule": self.rule, "data": [format_rational(v) if isinstance(v, Fraction)
                                            else v for v in self.data]}


def _prep(S, a, b):
    if b % a:
        raise NotDividing(f"{a} does not divide {b}")
    return _closed(S)


def check_single_gtd_divisibility(S, a, b):
    """For x with a single greatest-type divisor y, all z in S and r | x in S:

    * ``x^a - y^a`` divides ``(x,z)^b - (y,z)^b`` and ``[x,z]^b - [y,z]^b``;
    * ``r^a (y^a - x^a)`` divides ``y^a [z,x]^b - x^a [z,y]^b``.
    """
    S = _prep(S, a, b)
    bad = []
    for x, gx in zip(S, gtd_table(S)):
        if len(gx) != 1:
            continue
        (y,) = gx
        d = x ** a - y ** a
        for z in S:
            if not _divides_int(d, gcd(x, z) ** b - gcd(y, z) ** b):
                bad.append(Violation("single-gtd gcd", (x, y, z)))
            if not _divides_int(d, lcm(x, z) ** b - lcm(y, z) ** b):
                bad.append(Violation("single-gtd lcm", (x, y, z)))
            num = y ** a * lcm(z, x) ** b - x ** a * lcm(z, y) ** b
            for r in S:
                if x % r == 0 and not _divides_int(r ** a * (y ** a - x ** a), num):
                    bad.append(Violation("single-gtd weighted", (x, y, z, r)))
    return bad


def check_double_gtd_divisibility(S, a, b, skipped=None, scope="ambient"):
    """For x with G(x) = {y1, y2}, y3 = (y1, y2) and D = x^a + y3^a - y1^a - y2^a.

    For each z in S whose set ``{u in S : (x, z) | u | x}`` satisfies
    condition G:

    * D divides ``(z,x)^b + (z,y3)^b - (z,y1)^b - (z,y2)^b`` and the same
      with lcm;
    * ``r^a D`` divides ``x^a [z,y3]^b + y3^a [z,x]^b - y1^a [z,y2]^b
      - y2^a [z,y1]^b`` for every r | x in S.

    ``z`` values failing the hypothesis are appended to ``skipped`` if given.
    ``scope`` chooses how condition G is read on that set; see
    :func:`powergcd.structure.interval_holds_g`.
    """
    S = _prep(S, a, b)
    bad = []
    for x, gx in zip(S, gtd_table(S)):
        if len(gx) != 2:
            continue
        y1, y2 = gx
        y3 = gcd(y1, y2)
        D = x ** a + y3 ** a - y1 ** a - y2 ** a
        for z in S:
            g = gcd(x, z)
            U = [u for u in S if u % g == 0 and x % u == 0]
            if not interval_holds_g(S, U, scope, require_closed=False):
                if skipped is not None:
                    skipped.append((x, z))
                continue
            n1 = gcd(z, x) ** b + gcd(z, y3) ** b - gcd(z, y1) ** b - gcd(z, y2) ** b
            n2 = lcm(z, x) ** b + lcm(z, y3) ** b - lcm(z, y1) ** b - lcm(z, y2) ** b
            if not _divides_int(D, n1):
                bad.append(Violation("double-gtd gcd", (x, z)))
            if not _divides_int(D, n2):
                bad.append(Violation("double-gtd lcm", (x, z)))
            n3 = (x ** a * lcm(z, y3) ** b + y3 ** a * lcm(z, x) ** b
                  - y1 ** a * lcm(z, y2) ** b - y2 ** a * lcm(z, y1) ** b)
            for r in S:
                if x % r == 0 and not _divides_int(r ** a * D, n3):
                    bad.append(Violation("double-gtd weighted", (x, z, r)))
    return bad


def triple_gtd_ratios(S, a, b, xm, xt=None):
    """The two ratios for x_m with three greatest-type divisors.

    Returns ``alt(b) / alt(a)`` and, if ``xt`` is given,
    ``alt(b - a) / (xt^a alt(-a))``, where ``alt(e)`` is the eight-term
    alternating sum of e-th powers over x_m, its greatest-type divisors,
    their pairwise gcds and their common gcd.
    """
    S = GcdSet(S)
    gx = gtd_table(S)[S.index_of(xm)]
    if len(gx) != 3:
        raise ValueError(f"{xm} has {len(gx)} greatest-type divisors, not 3")
    m1, m2, m3 = gx
    first = _alt8(xm, m1, m2, m3, b) / _alt8(xm, m1, m2, m3, a)
    if xt is None:
        return first
    return first, _alt8(xm, m1, m2, m3, b - a) / (xt ** a * _alt8(xm, m1, m2, m3, -a))


def check_triple_gtd_divisibility(S, a, b):
    """For x_m with three greatest-type divisors, on a set with condition G.

    Checks that alt(a) divides alt(b), that ``alt(b-a) / (x_t^a alt(-a))`` is
    an integer for every x_t | x_m, and that both alternating sums and the
    second ratio match their product factorizations under every labeling::

        alt(a)  = (u^a - 1)(v^a - 1)(w^a - m4^a)
        alt(-a) = (u^a - 1)(v^a - 1)(m4^a - w^a) / (x_m^a m4^a)
        ratio   = -[(u^(b-a) - 1)/(u^a - 1)] [(v^(b-a) - 1)/(v^a - 1)]
                   [(w^(b-a) - m4^(b-a))/(w^a - m4^a)] (x_m/x_t)^a m4^a

    with u = x_m/m2, v = x_m/m1, w = m1 m2 / x_m.
    """
    S = _prep(S, a, b)
    verdict = _condition_g(S)
    if not verdict.holds:
        raise ConditionGViolated(f"condition G fails at {verdict.witness}")
    F = Fraction
    bad = []
    for xm, gx in zip(S, gtd_table(S)):
        if len(gx) != 3:
            continue
        m1, m2, m3 = gx
        alt_a = _alt8(xm, m1, m2, m3, a)
        alt_b = _alt8(xm, m1, m2, m3, b)
        alt_neg = _alt8(xm, m1, m2, m3, -a)
        alt_ba = _alt8(xm, m1, m2, m3, b - a)
        if not _is_int(alt_b / alt_a):
            bad.append(Violation("triple-gtd ratio", (xm, alt_b / alt_a)))
        for xt in S:
            if xm % xt:
                continue
            r = alt_ba / (xt ** a * alt_neg)
            if not _is_int(r):
                bad.append(Violation("triple-gtd weighted ratio", (xm, xt, r)))
        m4 = gcd(m1, m2, m3)
        for p1, p2, p3 in permutations(gx):
            u, v, w = F(xm, p2), F(xm, p1), F(p1 * p2, xm)
            if alt_a != (u ** a - 1) * (v ** a - 1) * (w ** a - m4 ** a):
                bad.append(Violation("triple-gtd factorization", (xm, (p1, p2, p3), a)))
            if alt_neg != (u ** a - 1) * (v ** a - 1) * (m4 ** a - w ** a) / (xm ** a * m4 ** a):
                bad.append(Violation("triple-gtd inverse factorization", (xm, (p1, p2, p3), a)))
            for xt in S:
                if xm % xt:
                    continue
                closed = (-(u ** (b - a) - 1) / (u ** a - 1)
                          * (v ** (b - a) - 1) / (v ** a - 1)
                          * (w ** (b - a) - m4 ** (b - a)) / (w ** a - m4 ** a)
                          * F(xm, xt) ** a * m4 ** a)
                if closed != alt_ba / (xt ** a * alt_neg):
                    bad.append(Violation("triple-gtd ratio closed form", (xm, (p1, p2, p3), xt)))
    return bad


# -- theorem validation ----------------------------------------------------

@dataclass
class TheoremCheck:
    set: GcdSet
    a: int
    b: int
    hypotheses_met: bool
    failed_hypotheses: list
    reports: dict

    @property
    def consistent(self):
        """False only if the hypotheses hold and some verdict is not integral."""
        if not self.hypotheses_met:
            return True
        return all(r.integral is True for r in self.reports.values())

    def to_dict(self):
        return {
            "set": list(self.set),
            "a": self.a,
            "b": self.b,
            "hypotheses_met": self.hypotheses_met,
            "failed_hypotheses": list(self.failed_hypotheses),
            "consistent": self.consistent,
            "verdicts": {k.value: r.to_dict() for k, r in self.reports.items()},
        }


def theorem_hypotheses(S, a, b):
    """Names of the failed hypotheses (empty list when all hold).

    The divisibility is known for a | b and a gcd-closed set with condition G
    and at most three greatest-type divisors per element.
    """
    S = GcdSet(S)
    failed = []
    if b % a:
        failed.append("a does not divide b")
    if not is_gcd_closed(S):
        failed.append("not gcd-closed")
        return failed
    if not _condition_g(S).holds:
        failed.append("condition G fails")
    if max(len(g) for g in gtd_table(S)) > 3:
        failed.append("max |G(x)| > 3")
    return failed


def validate_theorems(S, a, b, kinds=ALL_KINDS):
    S = GcdSet(S)
    failed = theorem_hypotheses(S, a, b)
    reports = {PairKind.parse(k): divides(S, a, b, k) for k in kinds}
    return TheoremCheck(S, a, b, not failed, failed, reports)
