import itertools
import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zerocycles.errors import InvalidInputError
from zerocycles.series import (
    COMPLEX_LINE,
    NAMED,
    PUNCTURED_LINE,
    PUNCTURED_TORUS,
    SPHERE2,
    TORUS,
    ManifoldData,
    TruncatedSeries,
    binomial_power,
    sym_power_series,
    sym_product_gf,
    sym_product_hd,
    sym_product_poincare,
    sym_product_poincare_stabilized,
)


def T(*coeffs, prec=None):
    return TruncatedSeries.from_list(list(coeffs), "t", prec)


def brute_sym_poincare(betti, d):
    """Count graded-symmetric monomials of length d in a basis of H^*(X)."""
    basis = [i for i, b in enumerate(betti) for _ in range(b)]
    out = Counter()
    for combo in itertools.combinations_with_replacement(range(len(basis)), d):
        counts = Counter(combo)
        if any(basis[k] % 2 and c > 1 for k, c in counts.items()):
            continue
        out[sum(basis[k] for k in combo)] += 1
    return dict(out)


# --- arithmetic -------------------------------------------------------------------------


def test_basic_arithmetic():
    a = T(1, 1, prec=5)
    assert (a * a).coefficient_list() == [1, 2, 1, 0, 0]
    assert (a.reciprocal()).coefficient_list() == [1, -1, 1, -1, 1]
    assert (a**-2).coefficient_list() == [1, -2, 3, -4, 5]
    assert a - a == 0
    assert a + 1 == T(2, 1, prec=5)


def test_precision_and_validation():
    with pytest.raises(InvalidInputError):
        TruncatedSeries(("t",), (0,))
    with pytest.raises(InvalidInputError):
        TruncatedSeries(("t", "t"), (3, 3))
    with pytest.raises(InvalidInputError):
        T(0, 1, prec=3).reciprocal()
    with pytest.raises(AttributeError):
        T(1).coeffs = {}
    with pytest.raises(InvalidInputError):
        T(1, prec=3) + TruncatedSeries.one(("x",), (3,))


def test_multivariate_and_specialize():
    s = TruncatedSeries(("x", "t"), (3, 4), {(1, 1): 2, (2, 3): -1, (0, 0): 1})
    assert s.coefficient_of("x", 1) == TruncatedSeries(("t",), (4,), {(1,): 2})
    assert s.specialize("t", -1) == TruncatedSeries(("x",), (3,), {(0,): 1, (1,): -2, (2,): 1})
    assert TruncatedSeries.from_json(s.to_json()) == s


def test_three_variables_allowed():
    s = TruncatedSeries(("x", "u", "v"), (2, 3, 3), {(1, 1, 2): 1})
    assert (s * s).coeffs == {}
    assert s.merge(("u", "v"), "t", 6) .coeffs == {(1, 3): 1}


def test_pretty():
    assert T(1, 2, 0, 1, prec=4).pretty() == "1 + 2t + t³ + …"
    assert T(1, -1, prec=3).pretty() == "1 - t + …"


def test_binomial_power():
    s = binomial_power(("t",), (6,), (2,), -1, -1)
    assert s.coefficient_list() == [1, 0, 1, 0, 1, 0]


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8), st.integers(1, 10))
def test_reciprocal_property(coeffs, prec):
    s = TruncatedSeries.from_list([1] + coeffs, "t", prec)
    assert s * s.reciprocal() == TruncatedSeries.one(("t",), (prec,))


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5), st.integers(-3, 3))
def test_power_homomorphism(coeffs, k):
    s = TruncatedSeries.from_list([1] + coeffs, "t", 7)
    assert s ** (k + 1) == s**k * s


# --- graded symmetric powers --------------------------------------------------------------


def test_sym_power_examples():
    even = sym_power_series({2: 1}, prec=(5, 10))
    assert even.coeffs == {(k, 2 * k): 1 for k in range(5)}
    odd = sym_power_series({1: 1}, prec=(5, 10))
    assert odd.coeffs == {(0, 0): 1, (1, 1): 1}
    circle = sym_power_series({0: 1, 1: 1}, prec=(4, 6))
    assert circle.coefficient_of("x", 2) == TruncatedSeries(("t",), (6,), {(0,): 1, (1,): 1})


@given(st.dictionaries(st.integers(0, 4), st.integers(0, 3), min_size=1, max_size=4))
def test_sym_power_low_terms(V):
    s = sym_power_series(V, prec=(3, 12))
    assert s.coefficient_of("x", 0) == TruncatedSeries.one(("t",), (12,))
    assert s.coefficient_of("x", 1) == TruncatedSeries(("t",), (12,), {(k,): v for k, v in V.items()})


def test_sym_product_examples():
    assert sym_product_poincare(PUNCTURED_LINE, 2).coeffs == {(0,): 1, (1,): 1}
    for d in range(5):
        assert sym_product_poincare(COMPLEX_LINE, d) == 1
    assert sym_product_poincare(SPHERE2, 3).coeffs == {(0,): 1, (2,): 1, (4,): 1, (6,): 1}


@pytest.mark.parametrize("name", sorted(NAMED))
@pytest.mark.parametrize("d", range(6))
def test_sym_product_against_monomial_count(name, d):
    X = NAMED[name]
    got = sym_product_poincare(X, d)
    assert {k[0]: v for k, v in got.coeffs.items()} == brute_sym_poincare(X.betti, d)


def test_stable_routes_agree():
    for X in NAMED.values():
        assert sym_product_poincare(X, math.inf, order=10) == sym_product_poincare_stabilized(X, 10)


def test_hd_examples():
    assert sym_product_hd(COMPLEX_LINE, 5) == 1
    s = sym_product_hd(PUNCTURED_LINE, 2)
    assert s.coeffs == {(0, 0): 1, (1, 1): 1}
    assert sym_product_hd(TORUS, 0) == 1


def test_hd_needs_hodge():
    with pytest.raises(InvalidInputError):
        sym_product_hd(ManifoldData(3, (1,)), 2)


@pytest.mark.parametrize("X", [SPHERE2, TORUS])
@pytest.mark.parametrize("d", range(5))
def test_projective_hd_specializes_to_poincare(X, d):
    hd = sym_product_hd(X, d, order=2 * d + 2)
    merged = hd.merge(("u", "v"), "t", 2 * d + 2)
    assert merged == TruncatedSeries(("t",), (2 * d + 2,), sym_product_poincare(X, d).coeffs)


@pytest.mark.parametrize("name", sorted(NAMED))
def test_euler_characteristic_generating_function(name):
    X = NAMED[name]
    gf = sym_product_gf(X, 8)
    chi = X.euler_characteristic
    assert gf.specialize("t", -1) == binomial_power(("x",), (9,), (1,), -1, -chi)


def test_manifold_validation():
    with pytest.raises(InvalidInputError):
        ManifoldData(2, (2,))
    with pytest.raises(InvalidInputError):
        ManifoldData(2, (1, 0, 0, 1))
    with pytest.raises(InvalidInputError):
        ManifoldData(2, (1, 1), {(0, 0, 0): 1})
    assert ManifoldData.from_json(PUNCTURED_TORUS.to_json()) == PUNCTURED_TORUS
