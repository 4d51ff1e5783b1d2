from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from mesharc.oracle import (CY, NOT_CY, OPEN, CYVerdict, OracleError, RFSType, cy_mfold, cy_t1, cy_t2_A,
                            cy_t2_D, cy_t2_E6, k_ns, parse_rfs_type, period_D4_t3, verdict)
from mesharc.quiver import build_dynkin


def D(name):
    return build_dynkin(name[0], int(name[1:]))


# brute-force searches, written without modular inverses

def brute_t1(delta, M, char):
    if gcd(delta.h_star, M) != 1:
        return None
    if delta.weakly_symmetric and (M % 2 == 0 or char == 2):
        return next(d for d in range(1, M + 1) if ((1 - d) * delta.h_star - 1) % M == 0)
    r = next(r for r in range(M) if (1 + r * delta.h) % M == 0)
    return 1 + 2 * r


def brute_k(n, s):
    return next(r for r in range(1, 10 ** 6)
                if (r * (n + 1) - 1) % s == 0 and ((r * (s + n + 1) - 1) // s) % 2 == 0)


def brute_t2D_odd(n, s):
    M = s * (2 * n - 3)
    return 2 * next(r for r in range(M) if (r * (2 * n - 2) - (n - 2)) % M == 0)


def brute_t2E6(s):
    return 2 * next(r for r in range(11 * s) if (12 * r - 5) % (11 * s) == 0)


@pytest.mark.parametrize("name,f,char,d", [
    ("D6", Fraction(1, 3), 2, 2), ("D6", Fraction(1, 3), 0, 5), ("A2", 1, 0, 3),
])
def test_t1_examples(name, f, char, d):
    v = cy_t1(D(name), f, char)
    assert v.status == CY and v.d == d


def test_t1_gcd_obstruction_for_five_thirds():
    v = cy_t1(D("D6"), Fraction(5, 3), 0)
    assert v.status == NOT_CY and v.clause == "t1-gcd-obstruction"
    assert v.witnesses["gcd(h*,M)"] == 5


@pytest.mark.parametrize("name,m,char,d", [("A2", 2, 0, 3), ("A2", 3, 0, None), ("A1", 1, 2, 1)])
def test_mfold_examples(name, m, char, d):
    v = cy_mfold(D(name), m, char)
    assert v.d == d
    assert v.status == (CY if d else NOT_CY)


def test_t2A_examples():
    assert cy_t2_A(1, 1).d == 2
    assert cy_t2_A(1, 2).status == NOT_CY
    assert cy_t2_A(2, 3).status == NOT_CY
    assert k_ns(1, 3) == 5
    assert k_ns(1, 1) == 1 and k_ns(3, 1) == 1
    assert cy_t2_A(1, 3).d == 14


def test_t2D_examples():
    assert cy_t2_D(4, 3).status == NOT_CY
    assert cy_t2_D(5, 2).period == 14
    assert cy_t2_D(5, 4, 2).period == 7
    v = cy_t2_D(6, 2)
    assert v.status == OPEN and v.d is None and v.period is None
    assert v.to_dict()["period"] == {"open_case": v.period_candidates}
    assert v.period_candidates[1] == 2 * v.period_candidates[0]


def test_t2D_even_s_odd_n_is_never_cy():
    for n in (5, 7, 9):
        for s in (2, 4, 6):
            v = cy_t2_D(n, s)
            assert v.status == NOT_CY
            assert v.necessary[0]["gcd(n-1,s)"] >= 2


def test_t2E6_examples():
    assert cy_t2_E6(1).d == 10
    assert cy_t2_E6(1).period is None
    assert cy_t2_E6(2, 2).period == 11
    assert cy_t2_E6(4).period == 44


def test_t3_examples():
    assert period_D4_t3(2, 2).period == 10
    assert period_D4_t3(2, 0).period == 10
    v = period_D4_t3(3, 0)
    assert v.status == NOT_CY and v.period is None
    assert v.to_dict()["period"] == {"open_case": [30, 90]}
    assert period_D4_t3(1).clause == "t3-period-undetermined-s1"


types = st.sampled_from(["A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "D7", "E6", "E7", "E8"])


@settings(max_examples=200, deadline=None)
@given(types, st.integers(1, 40), st.sampled_from([0, 2, 3, 5]))
def test_t1_matches_brute_force(name, M, char):
    delta = D(name)
    v = cy_mfold(delta, M, char)
    assert v.d == brute_t1(delta, M, char)
    f = Fraction(M, delta.m_delta)
    assert cy_t1(delta, f, char).d == v.d


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30))
def test_t2A_matches_brute_force(n, s):
    v = cy_t2_A(n, s)
    if (n - s) % 2 or gcd(n + 1, s) != 1:
        assert v.status == NOT_CY
    else:
        assert v.d == brute_k(n, s) * (2 * n + 1) - 1


@settings(max_examples=200, deadline=None)
@given(st.integers(4, 30), st.integers(1, 30).filter(lambda s: s % 2))
def test_t2D_odd_matches_brute_force(n, s):
    v = cy_t2_D(n, s)
    if gcd(n - 1, s) != 1:
        assert v.status == NOT_CY
    else:
        assert v.d == brute_t2D_odd(n, s)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 60))
def test_t2E6_matches_brute_force(s):
    v = cy_t2_E6(s)
    assert v.d == (brute_t2E6(s) if gcd(s, 6) == 1 else None)


@settings(max_examples=200, deadline=None)
@given(types, st.integers(1, 40), st.sampled_from([0, 2, 3]))
def test_cy_exponent_resubstitution(name, M, char):
    # a weakly symmetric d satisfies h*(1-d) ≡ 1; otherwise d = 1 + 2r with rh ≡ -1
    delta = D(name)
    v = cy_mfold(delta, M, char)
    if v.status != CY:
        return
    if v.clause.endswith("weakly-symmetric"):
        assert (delta.h_star * (1 - v.d) - 1) % M == 0
    else:
        assert v.d % 2 == 1 and (((v.d - 1) // 2) * delta.h + 1) % M == 0


@settings(max_examples=150, deadline=None)
@given(types, st.integers(1, 40), st.sampled_from([3, 5, 7]))
def test_odd_characteristics_agree_with_zero(name, M, char):
    assert cy_mfold(D(name), M, char).to_dict() == cy_mfold(D(name), M, 0).to_dict()


def test_char2_changes_only_the_listed_families():
    changed = set()
    for name in ("A1", "A2", "A3", "A4", "D4", "D5", "D6", "E6", "E7", "E8"):
        for M in range(1, 30):
            if cy_mfold(D(name), M, 2).d != cy_mfold(D(name), M, 0).d:
                changed.add(name)
                assert M % 2 == 1
    assert changed <= {"A1", "D4", "D6", "E7", "E8"}


def test_validation_errors():
    with pytest.raises(OracleError):
        RFSType(D("A3"), Fraction(1, 2), 1)
    with pytest.raises(OracleError):
        RFSType(D("A2"), Fraction(1), 2)
    with pytest.raises(OracleError):
        RFSType(D("A3"), Fraction(1), 3)
    with pytest.raises(OracleError):
        RFSType(D("D5"), Fraction(1, 2), 2)
    with pytest.raises(OracleError):
        k_ns(2, 1)
    with pytest.raises(OracleError):
        cy_mfold(D("A2"), 0)
    with pytest.raises(OracleError):
        CYVerdict(CY, "", d=1)
    with pytest.raises(OracleError):
        CYVerdict(CY, "x", d=0)


def test_verdict_dispatch_and_parsing():
    T = parse_rfs_type("A3", "2", 2, 0)
    assert verdict(T).to_dict() == cy_t2_A(1, 2).to_dict()
    assert verdict(parse_rfs_type("D4", "2", 3, 2)).period == 10
    assert verdict(parse_rfs_type("E6", "1", 2, 0)).d == 10
    assert verdict(parse_rfs_type("D6", "1/3", 1, 2)).d == 2
    assert verdict(parse_rfs_type("D5", "3", 2, 0)).to_dict() == cy_t2_D(5, 3).to_dict()


def test_verdict_rendering_has_no_floats():
    d = cy_t1(D("D6"), Fraction(1, 3)).to_dict()
    assert d["witnesses"]["f"] == "1/3"
