import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaring import decomp, intmat
from thetaring.decomp import CaseTag, Decomposition, Part
from thetaring.intmat import NotReducedError

CASE2 = ((2, 0, -1), (0, 2, 1), (-1, 1, 2))
CASE_B2 = ((2, 0, 1), (0, 2, 1), (1, 1, 2))
ALL_ONE_OFF = ((2, 1, 1), (1, 2, 1), (1, 1, 2))
ID2, ID3 = intmat.identity(2), intmat.identity(3)


def test_decompose2_examples():
    D = decomp.decompose2([[2, 1], [1, 3]])
    assert D.parts == (Part(1, (1, 0)), Part(2, (0, 1)), Part(1, (1, 1)))
    assert D.length == 4
    assert decomp.decompose2(ID2).parts == (Part(1, (1, 0)), Part(1, (0, 1)))
    assert decomp.decompose2([[1, 0], [0, 7]]).parts == (Part(1, (1, 0)), Part(7, (0, 1)))


def test_decompose2_needs_reduced_position():
    with pytest.raises(NotReducedError):
        decomp.decompose2([[2, -1], [-1, 3]])


def test_case_tags():
    assert decomp.classify_case(CASE2) == CaseTag.A2
    assert decomp.classify_case(ID3) == CaseTag.A1
    assert decomp.classify_case(CASE_B2) == CaseTag.B2


def test_decompose3_examples():
    r, names = decomp.coefficients3(CASE2)
    assert dict(zip(names, r)) == {"E1": 1, "E2": 1, "E3": 0, "E4": 0, "E5": 1, "E6-": 1}
    assert decomp.decompose3(CASE2).length == 4
    assert decomp.decompose3(ID3).labels == ("E1", "E2", "E3")
    D = decomp.decompose3(ALL_ONE_OFF)
    assert D.labels == ("E1", "E2", "E3", "E7") and D.length == 4


def test_decompose3_rejects_unreduced():
    with pytest.raises(NotReducedError):
        decomp.decompose3([[5, 4, 0], [4, 5, 0], [0, 0, 1]])


def test_certificates():
    assert decomp.certificate(CASE2)[0] == 4
    assert decomp.certificate(CASE_B2)[0] == 4
    for T in decomp.iter_reduced(3, 3):
        value, S2 = decomp.certificate(T)
        assert value == intmat.lambda_oracle(T)
        # the certificate matrices are positive definite
        assert intmat.is_positive_definite(S2)


def test_verify_examples():
    for T in (CASE2, ID3, ALL_ONE_OFF):
        assert decomp.verify_decomposition(T, decomp.decompose3(T))
    assert not decomp.verify_decomposition(ID2, Decomposition(ID2, (Part(1, (1, 0)),)))
    D = Decomposition(((2, 1), (1, 3)), (Part(1, (1, 0)), Part(2, (0, 1)), Part(1, (1, 1))))
    assert decomp.verify_decomposition(((2, 1), (1, 3)), D)


def test_verify_rejects_short_sum():
    # (1,1) and (1,-1) sum to 2E but the maximal length is 4
    T = ((2, 0), (0, 2))
    assert decomp.verify_decomposition(T, Decomposition(T, (Part(2, (1, 0)), Part(2, (0, 1)))))
    short = Decomposition(T, (Part(1, (1, 1)), Part(1, (1, -1))))
    assert short.total() == T
    assert not decomp.verify_decomposition(T, short)


def test_optimality_examples():
    E3 = Decomposition(((1, 1), (1, 1)), (Part(1, (1, 1)),))
    assert decomp.check_q_optimal_bounded(E3, 4, 1).verdict == "no_counterexample"
    twoE1 = Decomposition(((2, 0), (0, 0)), (Part(2, (1, 0)),))
    assert decomp.check_q_optimal_bounded(twoE1, 2, 1).verdict == "no_counterexample"
    # the replacement (1, 2) for one copy is longer than two parts
    assert intmat.lambda_value(((2, 2), (2, 4))) == 4
    v = decomp.check_q_optimal_bounded(decomp.decompose3(CASE2), 4, 1)
    assert v.verdict == "no_counterexample" and v.checked > 0


def test_optimality_rejects_bad_input():
    D = decomp.decompose3(ID3)
    with pytest.raises(ValueError):
        decomp.check_q_optimal_bounded(D, 3, 1)
    with pytest.raises(ValueError):
        decomp.check_q_optimal_bounded(D, 2, 0)


def test_irreducible_examples():
    E7 = ((1, 1, 1), (1, 1, 1), (1, 1, 1))
    assert decomp.irreducible(E7)
    assert not decomp.irreducible(((2, 0, 0), (0, 0, 0), (0, 0, 0)))
    assert not decomp.irreducible(((2, 1), (1, 1)))
    with pytest.raises(ValueError):
        decomp.irreducible(intmat.zero(2))


def test_json_round_trip():
    D = decomp.decompose3(CASE2)
    E = Decomposition.from_json(D.to_json())
    assert E.target == D.target and E.parts == D.parts


def test_enumeration_counts():
    assert len(list(decomp.iter_reduced(3, 4))) == 171
    assert len(list(decomp.iter_reduced(3, 4, strict=True))) == 160
    assert len(list(decomp.iter_reduced(2, 6))) == 43


def test_basis_sum_gains_a_part():
    B = decomp.basis_forms(3)
    S = intmat.add(B["E4"], B["E5"], B["E6"])
    assert S == intmat.add(B["E1"], B["E2"], B["E3"], B["E7"])
    assert intmat.lambda_value(S) > 3


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(list(decomp.iter_reduced(3, 4))), st.integers(1, 2))
def test_padding_keeps_decompositions_valid(T, extra):
    D = decomp.decompose3(T).padded(extra)
    P = intmat.pad(T, extra)
    assert D.total() == P
    assert decomp.verify_decomposition(P, D)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 6))
def test_decompose2_length_matches_oracle(a, c, b):
    if not (b <= a and b <= c and a * c > b * b):
        return
    T = ((a, b), (b, c))
    D = decomp.decompose2(T)
    assert D.length == intmat.lambda_oracle(T)
    assert all(p.mult > 0 for p in D.parts)


def test_every_case_occurs():
    tags = {decomp.classify_case(T) for T in decomp.iter_reduced(3, 4)}
    assert tags == set(CaseTag)
