"""Finite sets of positive integers and their divisibility structure.

A :class:`GcdSet` is an immutable, strictly increasing tuple.  The predicates
here decide gcd-closure, factor-closure, divisor chains, greatest-type
divisors and condition G; the two ``check_*`` scanners re-verify structural
facts the divisibility proofs lean on and should always come back empty.
"""
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import gcd, lcm
from typing import NamedTuple, Optional

from .arith import _divisors
from .errors import (
    ConditionGViolated,
    DuplicateElement,
    EmptySet,
    NotGcdClosed,
    NotInSet,
    NotPositive,
    ParseError,
)

log = logging.getLogger(__name__)


class GcdSet(tuple):
    """Sorted tuple of distinct positive integers.

    Construction sorts the input; repeats, non-positive values and the empty
    set are rejected.
    """

    __slots__ = ()

    def __new__(cls, elements):
        if isinstance(elements, GcdSet):
            return elements
        items = list(elements)
        if not items:
            raise EmptySet("a set needs at least one element")
        for x in items:
            if not isinstance(x, int) or isinstance(x, bool) or x < 1:
                raise NotPositive(f"elements must be positive integers, got {x!r}")
        items.sort()
        for u, v in zip(items, items[1:]):
            if u == v:
                raise DuplicateElement(f"duplicate element {u}")
        return super().__new__(cls, items)

    @property
    def n(self):
        return len(self)

    def index_of(self, x):
        try:
            return self.index(x)
        except ValueError:
            raise NotInSet(f"{x} is not in {list(self)}") from None

    def __repr__(self):
        return f"GcdSet({list(self)})"


def canonicalize(raw):
    return GcdSet(raw)


_SPLIT = re.compile(r"[\s,]+")


def parse_set(text):
    """Parse a comma/whitespace separated list of positive integers."""
    tokens = [t for t in _SPLIT.split(text.strip()) if t]
    if not tokens:
        raise ParseError("empty set literal", token="")
    values = []
    for tok in tokens:
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(f"bad set element {tok!r}", token=tok)
        values.append(int(tok))
    try:
        return GcdSet(values)
    except DuplicateElement as exc:
        raise ParseError(str(exc), token=str(exc).split()[-1]) from exc


def parse_set_file(text):
    """One set per line; blank lines and ``#`` comments are skipped."""
    sets = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            sets.append(parse_set(line))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", token=exc.token) from exc
    return sets


def _require_member(S, *xs):
    members = set(S)
    for x in xs:
        if x not in members:
            raise NotInSet(f"{x} is not in {list(S)}")


@lru_cache(maxsize=1 << 14)
def is_gcd_closed(S):
    members = set(S)
    return all(gcd(u, v) in members for u, v in combinations(S, 2))


def gcd_closure(S):
    """Smallest gcd-closed superset of ``S``."""
    current = set(S)
    frontier = list(current)
    while frontier:
        new = set()
        for u in frontier:
            for v in current:
                g = gcd(u, v)
                if g not in current:
                    new.add(g)
        current |= new
        frontier = list(new)
    return GcdSet(current)


def is_factor_closed(S):
    members = set(S)
    return all(d in members for x in S for d in _divisors(x))


def is_divisor_chain(S):
    return all(v % u == 0 for u, v in zip(S, S[1:]))


@lru_cache(maxsize=1 << 14)
def gtd_table(S):
    """Greatest-type divisors of every element, aligned with ``S``."""
    out = []
    for k, x in enumerate(S):
        below = [d for d in S[:k] if x % d == 0]
        out.append(tuple(d for d in below
                         if not any(e != d and e % d == 0 for e in below)))
    return tuple(out)


def greatest_type_divisors(S, x):
    S = GcdSet(S)
    return list(gtd_table(S)[S.index_of(x)])


def max_gtd(S):
    return max(len(g) for g in gtd_table(GcdSet(S)))


class GWitness(NamedTuple):
    x: int
    y1: int
    y2: int
    clause: str  # "lcm": [y1, y2] != x;  "gcd": (y1, y2) not a gtd of both


class GVerdict(NamedTuple):
    holds: bool
    witness: Optional[GWitness]


def _g_witnesses(S):
    table = gtd_table(S)
    pos = {x: k for k, x in enumerate(S)}
    for x, gx in zip(S, table):
        if len(gx) < 2:
            continue
        for y1, y2 in combinations(gx, 2):
            if lcm(y1, y2) != x:
                yield GWitness(x, y1, y2, "lcm")
                continue
            g = gcd(y1, y2)
            if g not in table[pos[y1]] or g not in table[pos[y2]]:
                yield GWitness(x, y1, y2, "gcd")


@lru_cache(maxsize=1 << 14)
def _condition_g(S):
    first = next(_g_witnesses(S), None)
    return GVerdict(first is None, first)


def condition_g(S):
    """Decide condition G on a gcd-closed set.

    Returns the verdict together with the lexicographically first failing
    triple ``(x, y1, y2)``.
    """
    S = GcdSet(S)
    if not is_gcd_closed(S):
        raise NotGcdClosed(f"{list(S)} is not gcd-closed")
    return _condition_g(S)


def condition_g_witnesses(S):
    """Every failing triple, in lexicographic order."""
    S = GcdSet(S)
    if not is_gcd_closed(S):
        raise NotGcdClosed(f"{list(S)} is not gcd-closed")
    return list(_g_witnesses(S))


def condition_g_within(S, U):
    """Condition G for the elements of ``U``, with gtds taken in ``S``.

    This is how the interval hypotheses of the divisibility lemmas are read
    by default: each u in U with two or more greatest-type divisors in S
    must have them pairwise satisfy the lcm and gcd clauses, again with
    greatest-type divisors computed in S.
    """
    table = dict(zip(S, gtd_table(S)))
    for u in U:
        for y1, y2 in combinations(table[u], 2):
            if lcm(y1, y2) != u:
                return False
            g = gcd(y1, y2)
            if g not in table[y1] or g not in table[y2]:
                return False
    return True


def interval_holds_g(S, U, scope="ambient", require_closed=True):
    """Whether the subset ``U`` of ``S`` satisfies condition G.

    ``scope="ambient"`` uses :func:`condition_g_within`.  ``scope="standalone"``
    treats U as a set of its own; if U is not gcd-closed the answer is None
    under ``require_closed`` (the caller skips it) and the definitional
    verdict otherwise.
    """
    if scope == "ambient":
        return condition_g_within(S, U)
    if scope != "standalone":
        raise ValueError(f"unknown scope {scope!r}")
    U = GcdSet(U)
    if require_closed and not is_gcd_closed(U):
        return None
    return _condition_g(U).holds


def interval_above(S, z, x):
    """Elements u of S with z | u | x and u != z, sorted (possibly empty)."""
    _require_member(S, z, x)
    return [u for u in S if u != z and u % z == 0 and x % u == 0]


@dataclass(frozen=True)
class StructureProfile:
    set: GcdSet
    gcd_closed: bool
    factor_closed: bool
    divisor_chain: bool
    gtd: dict = field(hash=False)
    max_gtd: int
    condition_G: bool
    violation_witness: Optional[GWitness]

    def to_dict(self):
        w = self.violation_witness
        return {
            "set": list(self.set),
            "gcd_closed": self.gcd_closed,
            "factor_closed": self.factor_closed,
            "divisor_chain": self.divisor_chain,
            "gtd": {str(x): list(g) for x, g in self.gtd.items()},
            "max_gtd": self.max_gtd,
            "condition_G": self.condition_G,
            "violation_witness": None if w is None else w._asdict(),
        }


def analyze(S):
    """Full structural profile of ``S``.

    Condition G is evaluated by its definition even when ``S`` is not
    gcd-closed; :func:`condition_g` is the strict entry point.
    """
    S = GcdSet(S)
    verdict = _condition_g(S)
    table = gtd_table(S)
    return StructureProfile(
        set=S,
        gcd_closed=is_gcd_closed(S),
        factor_closed=is_factor_closed(S),
        divisor_chain=is_divisor_chain(S),
        gtd={x: g for x, g in zip(S, table)},
        max_gtd=max(len(g) for g in table),
        condition_G=verdict.holds,
        violation_witness=verdict.witness,
    )


def closure_class(S):
    if is_factor_closed(S):
        return "factor-closed"
    if is_divisor_chain(S):
        return "divisor-chain"
    if is_gcd_closed(S):
        return "gcd-closed"
    return "not-gcd-closed"


def _require_closed(S):
    S = GcdSet(S)
    if not is_gcd_closed(S):
        raise NotGcdClosed(f"{list(S)} is not gcd-closed")
    return S


def check_interval_lcm_rule(S, scope="ambient", require_closed=True):
    """Scan for failures of ``[y, z] = x``.

    For x with two or more greatest-type divisors, y one of them, and z a
    proper divisor of x in S not dividing y: whenever the set
    ``{u in S : z | u | x, u != z}`` satisfies condition G, lcm(y, z) must be
    x.  See :func:`interval_holds_g` for ``scope`` and ``require_closed``;
    skipped intervals are logged at debug level.  Returns violating
    ``(x, y, z)`` triples.
    """
    S = _require_closed(S)
    table = gtd_table(S)
    bad = []
    for x, gx in zip(S, table):
        if len(gx) < 2:
            continue
        for y in gx:
            for z in S:
                if z == x or x % z or y % z == 0:
                    continue
                A = interval_above(S, z, x)
                holds = interval_holds_g(S, A, scope, require_closed)
                if holds is None:
                    log.debug("skip x=%d y=%d z=%d: interval %s not gcd-closed",
                              x, y, z, A)
                    continue
                if holds and lcm(y, z) != x:
                    bad.append((x, y, z))
    return bad


def check_triple_gtd_identities(S):
    """Re-derive the identities forced by three greatest-type divisors.

    For every x_m with G(x_m) = {m1, m2, m3}, under all six labelings, with
    m_ij = (m_i, m_j) and m4 = (m1, m2, m3), checks::

        m12 * x_m == m1 * m2
        m13 * m2  == m4 * x_m
        m23 * m1  == m4 * x_m
        m3 * m2   == m23 * x_m   and   m3 * m1 * m2 == m4 * x_m**2
        m4 != m_ij
        {m12, m13} in G(m1), {m12, m23} in G(m2), {m13, m23} in G(m3)

    and for every x_l whose gcd g with x_m divides m1 properly but divides
    neither m2 nor m3::

        (x_l, m3) == (x_l, m13)     [x_l, x_m] == [x_l, m2]
        [x_l, m1] == [x_l, m12]     [x_l, m3]  == [x_l, m23]
        [x_l, m13] == [x_l, m4]

    Requires a gcd-closed set satisfying condition G.  Returns a list of
    ``(x_m, labeling, x_l or None, description)`` tuples; empty means fine.
    """
    S = _require_closed(S)
    verdict = _condition_g(S)
    if not verdict.holds:
        raise ConditionGViolated(f"condition G fails at {verdict.witness}")
    table = gtd_table(S)
    pos = {x: k for k, x in enumerate(S)}
    bad = []
    for xm, gx in zip(S, table):
        if len(gx) != 3:
            continue
        for lab in permutations(gx):
            m1, m2, m3 = lab
            m12, m13, m23 = gcd(m1, m2), gcd(m1, m3), gcd(m2, m3)
            m4 = gcd(m12, m3)

            def fail(desc, xl=None):
                bad.append((xm, lab, xl, desc))

            if m12 * xm != m1 * m2:
                fail("m12 = m1 m2 / x_m")
            if m13 * m2 != m4 * xm:
                fail("m13 = m4 x_m / m2")
            if m23 * m1 != m4 * xm:
                fail("m23 = m4 x_m / m1")
            if m3 * m2 != m23 * xm or m3 * m1 * m2 != m4 * xm * xm:
                fail("m3 = m23 x_m / m2 = m4 (x_m/m1)(x_m/m2)")
            if m4 in (m12, m13, m23):
                fail("m4 equals some m_ij")
            for top, pair in ((m1, (m12, m13)), (m2, (m12, m23)), (m3, (m13, m23))):
                if not set(pair) <= set(table[pos[top]]):
                    fail(f"{pair} not greatest-type divisors of {top}")
            for xl in S:
                g = gcd(xl, xm)
                if not (m1 % g == 0 and g != m1 and m2 % g and m3 % g):
                    continue
                if gcd(xl, m3) != gcd(xl, m13):
                    fail("(x_l, m3) = (x_l, m13)", xl)
                if lcm(xl, xm) != lcm(xl, m2):
                    fail("[x_l, x_m] = [x_l, m2]", xl)
                if lcm(xl, m1) != lcm(xl, m12):
                    fail("[x_l, m1] = [x_l, m12]", xl)
                if lcm(xl, m3) != lcm(xl, m23):
                    fail("[x_l, m3] = [x_l, m23]", xl)
                if lcm(xl, m13) != lcm(xl, m4):
                    fail("[x_l, m13] = [x_l, m4]", xl)
    return bad
