from fractions import Fraction

import pytest

from powergcd.divisibility import (
    ALL_KINDS,
    PairKind,
    check_double_gtd_divisibility,
    check_single_gtd_divisibility,
    check_triple_gtd_divisibility,
    divides,
    kernel_case,
    kernel_closed_form,
    kernel_gcd_gcd,
    kernel_gcd_lcm,
    kernel_lcm_lcm,
    pair_matrices,
    quotient,
    quotient_via_kernels,
    theorem_hypotheses,
    triple_gtd_ratios,
    validate_theorems,
)
from powergcd.errors import (
    AlphaZero,
    ConditionGViolated,
    DimensionMismatch,
    NotADivisor,
    NotDividing,
    NotGcdClosed,
    Singular,
)
from powergcd.linalg import ExactMatrix
from powergcd.matrices import build_lcm_matrix, build_power_gcd_matrix
from powergcd.structure import GcdSet, _condition_g, is_divisor_chain, is_factor_closed, max_gtd

from conftest import LATTICE_MODULI, factor_closed_corpus, gcd_closed_corpus, lattice

D30 = lattice(30)
S6 = GcdSet([1, 2, 3, 6])


def idx(S, x):
    return S.index_of(x)


def test_kernel_examples():
    assert kernel_gcd_gcd(S6, 1, 2, idx(S6, 2), idx(S6, 6)) == 0
    assert kernel_gcd_gcd(S6, 1, 2, idx(S6, 6), idx(S6, 6)) == 12
    assert kernel_gcd_gcd(D30, 1, 2, 7, 7) == 72
    assert kernel_gcd_lcm(S6, 1, 2, idx(S6, 2), idx(S6, 6)) == 0
    assert kernel_gcd_lcm(S6, 1, 2, 0, 0) == 1
    assert kernel_lcm_lcm(S6, 1, 2, 3, 3, 0) == 36
    assert kernel_lcm_lcm(GcdSet([1]), 1, 1, 0, 0, 0) == 1
    assert kernel_lcm_lcm(D30, 1, 2, 7, 7, idx(D30, 5)) == 180


def test_kernel_matches_closed_form_on_divisors_of_30():
    v = kernel_gcd_lcm(D30, 1, 2, 0, 7)
    assert v.denominator == 1
    assert kernel_case(D30, 0, 7).case == "1"
    assert v == kernel_closed_form(D30, 1, 2, 0, 7, "gcd-lcm")
    assert kernel_closed_form(D30, 1, 2, 7, 7, "lcm-lcm", s=idx(D30, 5)) == 180


def test_kernel_errors():
    with pytest.raises(NotADivisor):
        kernel_lcm_lcm(S6, 1, 2, 0, idx(S6, 2), idx(S6, 3))
    with pytest.raises(NotGcdClosed):
        kernel_gcd_gcd([2, 3], 1, 2, 0, 0)


def test_quotient_examples():
    S = GcdSet([1, 2])
    assert quotient(build_power_gcd_matrix(S, 2), build_power_gcd_matrix(S, 1)) == ExactMatrix(
        [[1, 0], [-2, 3]])
    M = build_power_gcd_matrix(S6, 3)
    assert quotient(M, M) == ExactMatrix.identity(4)
    assert quotient(build_lcm_matrix(S, 2), build_lcm_matrix(S, 1)) == ExactMatrix(
        [[3, -1], [0, 2]])
    with pytest.raises(DimensionMismatch):
        quotient(ExactMatrix.identity(2), ExactMatrix.identity(3))
    with pytest.raises(Singular):
        quotient(ExactMatrix.identity(2), ExactMatrix([[1, 1], [1, 1]]))


def test_divides_examples():
    r = divides([1, 2], 1, 2, "gcd-gcd")
    assert r.integral and r.quotient == ExactMatrix([[1, 0], [-2, 3]])
    r = divides([1, 2], 2, 3, "gcd-gcd")
    assert r.integral is False and r.witness == (2, 1, Fraction(-4, 3))
    assert r.to_dict()["witness"] == {"row": 2, "col": 1, "value": "-4/3"}
    r = divides([1, 2], 1, 2, "gcd-lcm")
    assert r.integral and r.quotient == ExactMatrix([[-2, 3], [4, 0]])
    r = divides([1], 7, 7, "lcm-lcm")
    assert r.integral and r.quotient == ExactMatrix([[1]])


def test_report_schema():
    d = divides(S6, 1, 2, PairKind.LCM_LCM).to_dict(include_quotient=True)
    assert {"set", "a", "b", "pair_kind", "integral", "status", "witness", "quotient"} <= set(d)
    assert d["status"] == "Decided" and d["pair_kind"] == "lcm-lcm"
    assert all(isinstance(v, str) for row in d["quotient"] for v in row)


# a gcd-closed set whose lcm matrix is singular (max |G(x)| = 4 at 180)
SINGULAR_LCM = GcdSet([1, 2, 3, 4, 5, 6, 10, 45, 180])


def test_singular_divisor_gives_no_verdict():
    r = divides(SINGULAR_LCM, 1, 2, "lcm-lcm")
    assert r.status == "SingularDivisor"
    assert r.integral is None and r.witness is None
    assert r.to_dict()["witness"] is None
    assert divides(SINGULAR_LCM, 1, 2, "gcd-lcm").status == "Decided"
    for S in gcd_closed_corpus(12, 5):
        assert divides(S, 1, 2, "lcm-lcm").status == "Decided"


def test_quotient_via_kernels_examples():
    assert quotient_via_kernels(S6, 1, 2, "gcd-gcd") == divides(S6, 1, 2, "gcd-gcd").quotient
    assert quotient_via_kernels(D30, 1, 2, "lcm-lcm") == divides(D30, 1, 2, "lcm-lcm").quotient
    for a, b in [(1, 1), (2, 5), (3, 3)]:
        for kind in ALL_KINDS:
            assert quotient_via_kernels([7], a, b, kind) == divides([7], a, b, kind).quotient


def test_quotient_via_kernels_on_corpus():
    sets = gcd_closed_corpus(12, 5) + (D30, lattice(60))
    for S in sets:
        for a, b in [(1, 1), (1, 2), (1, 3), (2, 4)]:
            for kind in ALL_KINDS:
                assert quotient_via_kernels(S, a, b, kind) == divides(S, a, b, kind).quotient


def test_kernel_with_zero_weight_raises():
    S = SINGULAR_LCM
    with pytest.raises(AlphaZero):
        quotient_via_kernels(S, 1, 2, "lcm-lcm")
    with pytest.raises(AlphaZero):
        kernel_lcm_lcm(S, 1, 2, 0, len(S) - 1, 0)


@pytest.mark.parametrize("m", [30, 60, 120, 300, 900])
@pytest.mark.parametrize("a, b", [(1, 1), (1, 2), (2, 4), (1, 3)])
def test_closed_forms_match_definitions(m, a, b):
    S = lattice(m)
    n = len(S)
    for mm in range(n):
        for l in range(n):
            case = kernel_case(S, l, mm).case
            f = kernel_gcd_gcd(S, a, b, l, mm)
            g = kernel_gcd_lcm(S, a, b, l, mm)
            assert kernel_closed_form(S, a, b, l, mm, "gcd-gcd") == f, case
            assert kernel_closed_form(S, a, b, l, mm, "gcd-lcm") == g, case
            assert f.denominator == 1 and g.denominator == 1
            for s in range(mm + 1):
                if S[mm] % S[s] == 0:
                    h = kernel_lcm_lcm(S, a, b, l, mm, s)
                    assert kernel_closed_form(S, a, b, l, mm, "lcm-lcm", s) == h, case
                    assert h.denominator == 1


def test_every_case_is_reached():
    seen = set()
    for m in (900, 1800):
        S = lattice(m)
        for mm in range(len(S)):
            for l in range(len(S)):
                seen.add(kernel_case(S, l, mm).case)
    assert seen == {"min", "1gtd", "2gtd", "1", "2", "3-1", "3-2", "4"}


def test_closed_form_needs_condition_g():
    bad = GcdSet([1, 2, 3, 4, 5, 6, 10, 15, 24, 30])
    with pytest.raises(ConditionGViolated):
        kernel_closed_form(bad, 1, 2, 0, bad.index_of(30), "gcd-gcd")
    with pytest.raises(ValueError):
        S = lattice(210)
        kernel_closed_form(S, 1, 2, 0, len(S) - 1, "gcd-gcd")


def test_single_gtd_examples():
    assert check_single_gtd_divisibility([1, 2, 4], 1, 2) == []
    assert check_single_gtd_divisibility(S6, 1, 3) == []
    assert check_single_gtd_divisibility([1, 2], 2, 4) == []
    with pytest.raises(NotDividing):
        check_single_gtd_divisibility([1, 2], 2, 3)


def test_double_gtd_examples():
    assert check_double_gtd_divisibility(S6, 1, 2) == []
    assert check_double_gtd_divisibility([1, 2, 4], 1, 2) == []
    assert check_double_gtd_divisibility([1, 2, 3, 6, 12], 1, 3) == []


def test_double_gtd_standalone_reading_fails():
    S = GcdSet([1, 2, 3, 5, 12])
    skipped = []
    assert check_double_gtd_divisibility(S, 1, 2, skipped) == []
    assert skipped
    assert check_double_gtd_divisibility(S, 1, 2, scope="standalone") != []


def test_triple_gtd_examples():
    assert triple_gtd_ratios(D30, 1, 2, 30) == 72
    assert triple_gtd_ratios(D30, 1, 2, 30, 1) == (72, -30)
    assert check_triple_gtd_divisibility(D30, 1, 2) == []
    assert check_triple_gtd_divisibility([1, 2, 4], 1, 2) == []
    with pytest.raises(ValueError):
        triple_gtd_ratios(S6, 1, 2, 6)


@pytest.mark.parametrize("m", LATTICE_MODULI + (1800,))
@pytest.mark.parametrize("a, b", [(1, 2), (2, 4), (1, 3), (2, 6)])
def test_divisibility_facts_on_lattices(m, a, b):
    S = lattice(m)
    assert check_single_gtd_divisibility(S, a, b) == []
    assert check_double_gtd_divisibility(S, a, b) == []
    assert check_triple_gtd_divisibility(S, a, b) == []


def test_divisibility_facts_on_corpus():
    for S in gcd_closed_corpus(16, 6):
        assert check_single_gtd_divisibility(S, 1, 2) == []
        assert check_double_gtd_divisibility(S, 1, 2) == []
        if _condition_g(S).holds:
            assert check_triple_gtd_divisibility(S, 1, 2) == []


def test_validate_examples():
    t = validate_theorems(D30, 1, 2)
    assert t.hypotheses_met and t.consistent
    assert all(r.integral for r in t.reports.values())
    t = validate_theorems([1, 2, 3, 12], 1, 2)
    assert not t.hypotheses_met and "condition G" in " ".join(t.failed_hypotheses)
    t = validate_theorems([1, 2], 2, 3)
    assert not t.hypotheses_met
    assert t.reports[PairKind.GCD_GCD].integral is False
    assert theorem_hypotheses(lattice(210), 1, 2)


def test_theorems_hold_on_corpus():
    pairs = [(a, b) for a in range(1, 4) for b in range(a, 7) if b % a == 0]
    for S in gcd_closed_corpus(12, 5):
        if not _condition_g(S).holds or max_gtd(S) > 3:
            continue
        for a, b in pairs:
            for kind in ALL_KINDS:
                assert divides(S, a, b, kind).integral, (S, a, b, kind)


def test_factor_closed_and_chain_strata():
    chains = [S for S in gcd_closed_corpus(16, 5) if is_divisor_chain(S)]
    for S in list(factor_closed_corpus(12)) + chains:
        for a, b in [(1, 2), (2, 4), (1, 3), (3, 3)]:
            for kind in ALL_KINDS:
                assert divides(S, a, b, kind).integral


def test_right_and_left_quotients_are_transposes():
    from powergcd.linalg import solve
    for S in gcd_closed_corpus(10, 4):
        for kind in ALL_KINDS:
            Ma, Mb = pair_matrices(S, 1, 2, kind)
            right = quotient(Mb, Ma)      # right @ Ma == Mb
            left = solve(Ma, Mb)          # Ma @ left == Mb
            assert right @ Ma == Mb and Ma @ left == Mb
            assert left == right.transpose()
            assert left.is_integral() == right.is_integral()
