import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaring import intmat
from thetaring.decomp import G3_BASIS
from thetaring.intmat import OracleBoundError, dyad

E6 = ((1, 0, 1), (0, 0, 0), (1, 0, 1))
E6M = ((1, 0, -1), (0, 0, 0), (-1, 0, 1))
E7 = ((1, 1, 1), (1, 1, 1), (1, 1, 1))
ID3 = intmat.identity(3)


# -- basic predicates ----------------------------------------------------------


def test_semipositive_examples():
    assert intmat.is_semipositive([[1, 1], [1, 1]])
    assert not intmat.is_semipositive([[1, 2], [2, 1]])
    assert intmat.is_semipositive([[2, 0, -1], [0, 2, 1], [-1, 1, 2]])


def test_rank_examples():
    assert intmat.rank(intmat.zero(3)) == 0
    assert intmat.rank(E7) == 1
    assert intmat.rank(ID3) == 3


def test_as_form_rejects_bad_input():
    with pytest.raises(ValueError):
        intmat.as_form([[1, 2], [3, 1]])
    with pytest.raises(ValueError):
        intmat.as_form([[1, 0.5], [0.5, 1]])
    with pytest.raises(ValueError):
        intmat.as_form([[1, 0]])


# -- lambda --------------------------------------------------------------------


def test_oracle_examples():
    assert intmat.lambda_oracle(intmat.zero(2)) == 0
    assert intmat.lambda_oracle(E7) == 1
    assert intmat.lambda_oracle([[2, 1], [1, 3]]) == 4


def test_oracle_bound():
    with pytest.raises(OracleBoundError):
        intmat.lambda_oracle([[20, 1], [1, 20]], max_entry=5)


def test_closed_examples():
    assert intmat.lambda_closed(intmat.identity(2)) == 2
    assert intmat.lambda_closed([[2, 0, -1], [0, 2, 1], [-1, 1, 2]]) == 4
    assert intmat.lambda_closed([[2, 0, 1], [0, 2, 1], [1, 1, 2]]) == 4


def test_lambda_examples():
    assert intmat.lambda_value([[0, 0], [0, 5]]) == 5
    assert intmat.lambda_value([[5, 4], [4, 5]]) == 6
    assert intmat.lambda_value(E6M) == 1


def test_lambda_method_tags():
    assert intmat.lambda_with_method([[2, 1], [1, 3]]) == (4, "closed")
    assert intmat.lambda_with_method(intmat.zero(3)) == (0, "zero")
    assert intmat.lambda_with_method(E7) == (1, "rank-one-block")
    assert intmat.lambda_with_method(intmat.identity(4))[1] == "oracle"


def test_basis_sum_longer_than_three():
    # E4 + E5 + E6 = E1 + E2 + E3 + E7 has no shorter decomposition
    S = intmat.add(G3_BASIS["E4"], G3_BASIS["E5"], G3_BASIS["E6"])
    assert intmat.lambda_value(S) == intmat.lambda_oracle(S) == 4


# -- reduction -----------------------------------------------------------------


def test_reduce_examples():
    R, U = intmat.minkowski_reduce([[2, 1], [1, 5]])
    assert R == ((2, 1), (1, 5)) and U == intmat.identity(2)
    R, U = intmat.minkowski_reduce([[5, 4], [4, 5]])
    assert R == ((2, 1), (1, 5))
    assert intmat.transform(((5, 4), (4, 5)), U) == R
    R, _ = intmat.minkowski_reduce([[3, 0, 0], [0, 2, 0], [0, 0, 1]])
    assert R == ((1, 0, 0), (0, 2, 0), (0, 0, 3))


def test_reduce_rejects_indefinite():
    with pytest.raises(ValueError):
        intmat.minkowski_reduce([[1, 2], [2, 1]])


def test_strict_list_is_not_a_fundamental_domain():
    # every form equivalent to this one breaks 2(t12 + t23 + |t13|) <= t11 + t22
    T = ((2, 1, 1), (1, 2, 1), (1, 1, 2))
    assert not intmat.is_reduced(T)
    assert intmat.is_reduced(T, strict=False)
    R, _ = intmat.minkowski_reduce(T)
    assert intmat.is_reduced(R, strict=False)


def _random_unimodular(rng, g, steps=6):
    U = np.eye(g, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(g, 2, replace=False)
        U[:, j] += int(rng.integers(-2, 3)) * U[:, i]
    if rng.integers(2):
        U[:, 0] *= -1
    return tuple(tuple(int(x) for x in r) for r in U)


def _pd_forms(g, spread):
    """``L L'`` for lower triangular ``L`` with diagonal in [1, 2] and entries in [-spread, spread]."""

    def build(vals):
        L = np.zeros((g, g), dtype=np.int64)
        it = iter(vals)
        for i in range(g):
            L[i, i] = 1 + next(it) % 2
            for j in range(i):
                L[i, j] = next(it)
        return intmat.as_form((L @ L.T).tolist())

    n = g * (g + 1) // 2
    return st.lists(st.integers(-spread, spread), min_size=n, max_size=n).map(build)


@settings(max_examples=60, deadline=None)
@given(_pd_forms(3, 2), st.integers(0, 2**32 - 1))
def test_reduction_is_canonical(T, seed):
    U = _random_unimodular(np.random.default_rng(seed), 3)
    R1, V1 = intmat.minkowski_reduce(T)
    R2, _ = intmat.minkowski_reduce(intmat.transform(T, U))
    assert R1 == R2
    assert abs(intmat.det(V1)) == 1
    assert intmat.transform(T, V1) == R1
    assert intmat.is_reduced(R1, strict=False)


@settings(max_examples=60, deadline=None)
@given(_pd_forms(3, 1), st.integers(0, 2**32 - 1))
def test_lambda_unimodular_invariance(T, seed):
    U = _random_unimodular(np.random.default_rng(seed), 3)
    S = intmat.transform(T, U)
    assert intmat.lambda_value(S) == intmat.lambda_value(T) == intmat.lambda_oracle(T)


@settings(max_examples=40, deadline=None)
@given(_pd_forms(2, 2))
def test_lambda_padding(T):
    assert intmat.lambda_value(intmat.pad(T)) == intmat.lambda_value(T)
    assert intmat.lambda_oracle(intmat.pad(T)) == intmat.lambda_oracle(T)


@settings(max_examples=40, deadline=None)
@given(_pd_forms(2, 1), _pd_forms(2, 1))
def test_lambda_superadditive(S, T):
    assert intmat.lambda_value(intmat.add(S, T)) >= intmat.lambda_value(S) + intmat.lambda_value(T)


# -- congruence subgroups ------------------------------------------------------


def test_congruence_examples():
    T = dyad((1, 0, 0))
    assert intmat.congruent_mod_q(T, T, 4)
    assert intmat.congruent_mod_q(dyad((1, 4, 0)), T, 4)
    assert not intmat.congruent_mod_q(dyad((1, 2, 0)), T, 4)


def test_orbit_examples():
    T = dyad((1, 0, 0))
    assert intmat.rank1_orbit_equiv(T, T, 4)
    assert intmat.rank1_orbit_equiv(dyad((1, 4, 0)), T, 4)
    assert intmat.rank1_orbit_equiv(dyad((1, 1, 1)), dyad((1, 1, -1)), 2)


def test_glq_search_examples():
    assert intmat.glq_equiv_bounded(E6, E6, 2, 1) == ID3
    U = intmat.glq_equiv_bounded(E6M, E6, 2, 2)
    assert U == ((1, 0, 0), (0, 1, 0), (0, 0, -1))
    assert intmat.transform(E6, U) == E6M
    assert intmat.glq_equiv_bounded(dyad((1, 2)), dyad((1, 0)), 4, 1) is None


@pytest.mark.parametrize("q", [2, 4])
def test_glq_witnesses_are_congruent_to_identity(q):
    for a in itertools.product(range(-2, 3), repeat=2):
        if math.gcd(*a) != 1:
            continue
        b = tuple(x + q for x in a)
        if math.gcd(*b) != 1:
            continue
        U = intmat.glq_equiv_bounded(dyad(b), dyad(a), q, 3)
        assert U is not None
        assert all((U[i][j] - (i == j)) % q == 0 for i in range(2) for j in range(2))
        assert intmat.transform(dyad(a), U) == dyad(b)


def _lower_block(T):
    return tuple(r[1:] for r in T[1:])


def _primitive_rank1_forms(g, r):
    out = []
    for a in itertools.product(range(-r, r + 1), repeat=g):
        if any(a) and math.gcd(*a) == 1 and intmat.primitive_column(a) == a:
            out.append(dyad(a))
    return out


@pytest.mark.parametrize("g", [2, 3])
def test_shifted_top_entry_forces_primitive_block(g):
    # lambda(T + e1 e1') = 2 leaves the lower block primitive or zero
    E = dyad((1,) + (0,) * (g - 1))
    seen = 0
    for T in _primitive_rank1_forms(g, 3):
        if intmat.lambda_value(intmat.add(T, E)) == 2:
            seen += 1
            B = _lower_block(T)
            assert not any(x for r in B for x in r) or intmat.is_primitive(B)
    assert seen > 0


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(lambda a: math.gcd(*a) == 1),
    st.lists(st.integers(-1, 1), min_size=9, max_size=9),
)
def test_level_two_rigidity(a, x):
    # U = E mod 2 and lambda(T + T[U]) = 2 force T[U] = T
    U = tuple(tuple((i == j) + 2 * x[3 * i + j] for j in range(3)) for i in range(3))
    if abs(intmat.det(U)) != 1:
        return
    T = dyad(a)
    S = intmat.transform(T, U)
    if intmat.lambda_value(intmat.add(T, S)) == 2:
        assert S == T
