import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zerocycles.densities import (
    DensityParams,
    _compositions,
    agreement_order,
    assembled_euler_gf,
    coincidence_report,
    density_finite,
    e2_dims,
    e2_generating_function,
    euler_characteristic_finite,
    euler_gf,
    euler_ratio,
    factorizations,
    hd_limit,
    hd_ratio_finite,
    hd_Z_finite,
    limiting_density,
    limiting_poincare,
    poincare_Z_finite,
    stable_range,
)
from zerocycles.errors import InvalidInputError
from zerocycles.series import (
    COMPLEX_LINE,
    NAMED,
    PUNCTURED_LINE,
    SPHERE2,
    TORUS,
    ManifoldData,
    TruncatedSeries,
    euclidean,
    sym_product_poincare,
)


def first(s, k):
    return s.coefficient_list()[:k]


def total_degree(dims):
    out = {}
    for (p, q), c in dims.items():
        out[p + q] = out.get(p + q, 0) + c
    return out


even_spaces = st.builds(
    lambda r, tail: ManifoldData(2 * r, (1,) + tuple(tail[: 2 * r])),
    st.integers(1, 2),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
)
mn_pairs = st.sampled_from([(1, 2), (2, 1), (1, 3), (3, 1), (2, 2)])


def test_e2_examples():
    assert e2_dims(DensityParams(1, 2, euclidean(2)), [3]) == {(0, 0): 1, (0, 1): 1}
    assert total_degree(e2_dims(DensityParams(1, 2, PUNCTURED_LINE), [2])) == {0: 1, 1: 2, 2: 1}


def test_e2_small_degrees_only_symmetric_part():
    params = DensityParams(2, 2, TORUS)
    dims = e2_dims(params, [1, 5])
    assert all(q == 0 for _, q in dims)


def test_odd_dimension():
    params = DensityParams(1, 2, euclidean(3))
    with pytest.raises(InvalidInputError):
        e2_dims(params, [3])
    assert limiting_density(params, 8) == 1
    assert poincare_Z_finite(params, [3]) == 1


def test_degree_vector_checked():
    with pytest.raises(InvalidInputError):
        e2_dims(DensityParams(2, 1, TORUS), [3])
    with pytest.raises(InvalidInputError):
        e2_dims(DensityParams(1, 2, TORUS), [-1])


def test_finite_poincare_examples():
    assert poincare_Z_finite(DensityParams(1, 2, euclidean(2)), [3]).coeffs == {(0,): 1, (1,): 1}
    assert first(poincare_Z_finite(DensityParams(2, 1, PUNCTURED_LINE), [5, 5]), 4) == [1, 3, 4, 4]
    assert first(poincare_Z_finite(DensityParams(1, 2, PUNCTURED_LINE), [8]), 5) == [1, 2, 2, 2, 2]


def test_limiting_examples():
    assert first(limiting_density(DensityParams(1, 2, PUNCTURED_LINE), 13), 13) == [1] * 13
    assert first(limiting_density(DensityParams(2, 1, PUNCTURED_LINE), 13), 13) == [1] * 13
    assert first(limiting_poincare(DensityParams(1, 2, PUNCTURED_LINE), 13), 13) == [1] + [2] * 12
    assert first(limiting_poincare(DensityParams(2, 1, PUNCTURED_LINE), 13), 13) == [1, 3] + [4] * 11


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (1, 3), (2, 2)])
def test_limiting_density_euclidean(r, m, n):
    params = DensityParams(m, n, euclidean(2 * r))
    g = params.g
    assert limiting_density(params, 40).coeffs == {(0,): 1, (g,): 1}


def test_euler_examples():
    assert euler_gf(DensityParams(1, 2, COMPLEX_LINE), 8).coeffs == {(0,): 1, (1,): 1}
    assert euler_gf(DensityParams(2, 2, PUNCTURED_LINE), 8) == 1
    assert euler_ratio(DensityParams(1, 3, COMPLEX_LINE), 8).coeffs == {(0,): 1, (3,): -1}


def test_hd_examples():
    lim = hd_limit(DensityParams(1, 2, PUNCTURED_LINE), 8)
    assert lim.coeffs == {(k, k): 1 for k in range(8)}
    assert hd_limit(DensityParams(1, 3, COMPLEX_LINE), 8).coeffs == {(0, 0): 1, (2, 2): 1}
    assert hd_Z_finite(DensityParams(2, 1, PUNCTURED_LINE), [0, 0]) == 1


def test_hd_requires_hodge():
    with pytest.raises(InvalidInputError):
        hd_limit(DensityParams(1, 2, ManifoldData(2, (1, 1))), 5)


def test_finite_density_values():
    a = density_finite(DensityParams(1, 2, PUNCTURED_LINE), [10], 13)
    b = density_finite(DensityParams(2, 1, PUNCTURED_LINE), [10, 10], 13)
    assert first(a, 10) == [1] * 10
    assert first(b, 10) == [1] * 10


# --- properties ------------------------------------------------------------------


@given(even_spaces, mn_pairs, st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_e2_support(X, mn, d):
    m, n = mn
    params = DensityParams(m, n, X)
    d = d[:m]
    dims = e2_dims(params, d)
    jmax = min(d) // params.n
    for (p, q), c in dims.items():
        assert c > 0
        assert q % params.g == 0 and q // params.g <= jmax
        assert p + q <= X.N * sum(d)


@given(even_spaces, mn_pairs)
def test_e2_matches_closed_generating_function(X, mn):
    m, n = mn
    params = DensityParams(m, n, X)
    K = 5 if m < 3 else 4
    gf = e2_generating_function(params, K)
    for k in range(K + 1):
        acc = {}
        for d in _compositions(k, m):
            for deg, c in total_degree(e2_dims(params, d)).items():
                acc[deg] = acc.get(deg, 0) + c
        want = {e[0]: c for e, c in gf.coefficient_of("x", k).coeffs.items()}
        assert acc == want


@given(even_spaces, mn_pairs)
def test_limiting_poincare_factorizes(X, mn):
    params = DensityParams(*mn, X)
    order = 14
    stable = sym_product_poincare(X, math.inf, order=order)
    assert limiting_density(params, order) * stable**params.m == limiting_poincare(params, order)


@given(even_spaces, mn_pairs)
def test_hopf_assembled_euler(X, mn):
    params = DensityParams(*mn, X)
    assert assembled_euler_gf(params, 7) == euler_gf(params, 7)


@pytest.mark.parametrize("X", [COMPLEX_LINE, PUNCTURED_LINE, SPHERE2, TORUS])
def test_euler_characteristic_direct(X):
    params = DensityParams(1, 2, X)
    chi = X.euler_characteristic
    # chi(Z^2_2(X)) = chi(Sym^2 X) - chi(X)
    sym2 = math.comb(chi + 1, 2)
    assert euler_characteristic_finite(params, [2]) == sym2 - chi


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (1, 3)])
def test_finite_converges_to_limit(m, n):
    params = DensityParams(m, n, PUNCTURED_LINE)
    lim = limiting_poincare(params, 16)
    orders = []
    for k in range(2, 11):
        fin = TruncatedSeries(("t",), (16,), poincare_Z_finite(params, [k] * m).coeffs)
        orders.append(agreement_order(fin, lim))
    assert orders == sorted(orders)
    assert orders[-1] >= 10


def _hd_agreement(a, b):
    prec = min(a.prec[0], b.prec[0])
    for k in range(prec):
        for i in range(k + 1):
            if a.coeffs.get((i, k - i), 0) != b.coeffs.get((i, k - i), 0):
                return k
    return prec


def test_hd_ratio_converges():
    params = DensityParams(1, 2, PUNCTURED_LINE)
    lim = hd_limit(params, 10)
    orders = [_hd_agreement(hd_ratio_finite(params, [d], 10), lim) for d in range(1, 10)]
    assert orders == sorted(orders)
    # regression: total (u, v)-degree of agreement for d = 1..9
    assert orders == [2, 4, 6, 8, 10, 10, 10, 10, 10]


def test_stable_range():
    assert stable_range(DensityParams(1, 2, PUNCTURED_LINE), [8]) == 4
    assert stable_range(DensityParams(2, 1, PUNCTURED_LINE), [8, 6]) == 6
    assert stable_range(DensityParams(1, 2, euclidean(4)), [8]) == 8


def test_factorizations():
    assert factorizations(6) == [(1, 6), (2, 3), (3, 2), (6, 1)]
    assert factorizations(2) == [(1, 2), (2, 1)]


def test_coincidence_report():
    rep = coincidence_report(4, TORUS, [((1, 4, (9,)), (2, 2, (9, 9)))], order=10)
    assert rep.exact_agreement
    assert rep.to_json()["finite"][0]["agreement_order"] >= 5
    with pytest.raises(InvalidInputError):
        coincidence_report(1, TORUS)
