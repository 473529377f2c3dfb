"""E2-page dimensions, limiting densities, Euler characteristics and Hodge–Deligne limits.

For ``dim X = N = 2r`` and ``g = 2r(mn-1) - 1`` the E2 page in bidegree
``(p, q)`` vanishes unless ``q = j g`` with ``0 <= j <= min_i d_i / n``,
and then it is the degree-``p`` part of

    Sym^j_gr H^*(X)[g]  (x)  (x)_i Sym^{d_i - n j}_gr H^*(X).

Odd-dimensional ``X`` never reaches the E2 machinery: there the spaces of
0-cycles have the rational cohomology of the symmetric products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InvalidInputError
from .series import (
    DEFAULT_ORDER,
    DEFAULT_ORDER_2D,
    Generator,
    ManifoldData,
    TruncatedSeries,
    _betti_generators,
    _hodge_generators,
    binomial_power,
    signed_sym_product,
    sym_product_gf,
    sym_product_hd,
    sym_product_poincare,
)


@dataclass(frozen=True)
class DensityParams:
    m: int
    n: int
    X: ManifoldData

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidInputError("m and n must be positive")
        if self.m == 1 and self.n == 1:
            object.__setattr__(self, "n", 2)

    @property
    def mn(self) -> int:
        return self.m * self.n

    @property
    def even(self) -> bool:
        return self.X.N % 2 == 0

    @property
    def r(self) -> int:
        if not self.even:
            raise InvalidInputError(f"dim X = {self.X.N} is odd")
        return self.X.N // 2

    @property
    def g(self) -> int:
        return 2 * self.r * (self.mn - 1) - 1


def _check_d(params: DensityParams, d: Sequence[int]) -> tuple:
    d = tuple(int(x) for x in d)
    if len(d) != params.m:
        raise InvalidInputError(f"need {params.m} degrees, got {d}")
    if any(x < 0 for x in d):
        raise InvalidInputError("degrees must be non-negative")
    return d


def _shifted_generators(X: ManifoldData, g: int, track: bool, weight_shift: int = 0):
    """``H^i(X)`` with the parity of ``i + g`` and ``t``-weight ``i + weight_shift``."""
    gens = []
    for i, b in enumerate(X.betti):
        if b:
            exps = ((1,) if track else ()) + (i + weight_shift,)
            gens.append(Generator(exps, (i + g) % 2, b))
    return gens


def _poly_list(series: TruncatedSeries) -> list[int]:
    return series.coefficient_list()


def _mul_lists(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def e2_dims(params: DensityParams, d: Sequence[int]) -> dict:
    """``{(p, q): dim E_2^{p,q}}`` for ``Z^d_n(X)`` with ``dim X`` even."""
    if not params.even:
        raise InvalidInputError("E2 dimensions are only used for even-dimensional X; use sym_product_poincare")
    d = _check_d(params, d)
    X, n, g, r = params.X, params.n, params.g, params.r
    jmax = min(d) // n
    dmax = max(d) if d else 0
    sym = sym_product_gf(X, dmax)
    shifted = signed_sym_product(
        _shifted_generators(X, g, True), ("x", "t"), (jmax + 1, X.N * jmax + 1)
    )
    out = {}
    bound = 2 * r * sum(d)
    for j in range(jmax + 1):
        poly = _poly_list(shifted.coefficient_of("x", j))
        for di in d:
            poly = _mul_lists(poly, _poly_list(sym.coefficient_of("x", di - n * j)))
        q = j * g
        for p, c in enumerate(poly):
            if c and p + q <= bound:
                out[(p, q)] = c
    return dict(sorted(out.items()))


def poincare_Z_finite(params: DensityParams, d: Sequence[int], order: Optional[int] = None) -> TruncatedSeries:
    """Poincaré polynomial of ``Z^d_n(X)``, assuming the spectral sequence degenerates at E2.

    For odd-dimensional ``X`` this is the product of the symmetric products.
    """
    d = _check_d(params, d)
    if not params.even:
        top = params.X.N * sum(d) + 1
        order = top if order is None else order
        out = TruncatedSeries.one(("t",), (order,))
        for di in d:
            out = out * sym_product_poincare(params.X, di, order=max(order, params.X.N * di + 1)).truncate(order)
        return out
    dims = e2_dims(params, d)
    top = max((p + q for p, q in dims), default=0) + 1
    order = top if order is None else order
    coeffs: dict = {}
    for (p, q), c in dims.items():
        coeffs[(p + q,)] = coeffs.get((p + q,), 0) + c
    return TruncatedSeries(("t",), (order,), coeffs)


def sym_product_poincare_vector(X: ManifoldData, d: Sequence[int], order: int) -> TruncatedSeries:
    """``P_{Sym^{d_1} X x ... x Sym^{d_m} X}(t)`` truncated at ``order``."""
    out = TruncatedSeries.one(("t",), (order,))
    for di in d:
        out = out * TruncatedSeries(("t",), (order,), sym_product_poincare(X, di).coeffs)
    return out


def density_finite(params: DensityParams, d: Sequence[int], order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``P_{Z^d_n(X)}(t) / P_{Sym^d X}(t)`` truncated at ``order``."""
    d = _check_d(params, d)
    num = TruncatedSeries(("t",), (order,), poincare_Z_finite(params, d).coeffs)
    den = sym_product_poincare_vector(params.X, d, order)
    return num * den.reciprocal()


def limiting_density(params: DensityParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``prod_i (1 - (-t)^{i+g})^{-(-1)^{i+g} b_i}``; identically 1 for odd ``dim X``."""
    if not params.even:
        return TruncatedSeries.one(("t",), (order,))
    return signed_sym_product(
        _shifted_generators(params.X, params.g, False, weight_shift=params.g), ("t",), (order,)
    )


def limiting_poincare(params: DensityParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Limiting density times the ``m``-th power of the stable symmetric-product series."""
    stable = sym_product_poincare(params.X, math.inf, order=order)
    return limiting_density(params, order) * stable**params.m


# --- Euler characteristics ---------------------------------------------------


def euler_gf(params: DensityParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``(1 - x^{mn})^chi (1 - x)^{-m chi}`` in the variable ``x``."""
    chi = params.X.euler_characteristic
    vars, prec = ("x",), (order,)
    return binomial_power(vars, prec, (params.mn,), -1, chi) * binomial_power(vars, prec, (1,), -1, -params.m * chi)


def euler_ratio(params: DensityParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``(1 - x^{mn})^chi``."""
    return binomial_power(("x",), (order,), (params.mn,), -1, params.X.euler_characteristic)


def euler_characteristic_finite(params: DensityParams, d: Sequence[int]) -> int:
    """``chi(Z^d_n(X))`` as the alternating sum of E2 dimensions."""
    return sum((-1) ** (p + q) * c for (p, q), c in e2_dims(params, d).items())


def assembled_euler_gf(params: DensityParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum over d of chi(Z^d_n(X)) x^{|d|}``, assembled vector by vector."""
    coeffs: dict = {}
    for total in range(order):
        acc = 0
        for d in _compositions(total, params.m):
            acc += euler_characteristic_finite(params, d)
        coeffs[(total,)] = acc
    return TruncatedSeries(("x",), (order,), coeffs)


def _compositions(total: int, parts: int) -> Iterable[tuple]:
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def e2_generating_function(params: DensityParams, max_total: int) -> TruncatedSeries:
    """``sum over d of P(E_2(d)) x^{|d|}`` from the closed product, in ``(x, t)``.

    Every ``x_i`` is set to ``x``.  An independent check on :func:`e2_dims`.
    """
    X, g, m, n = params.X, params.g, params.m, params.n
    vars = ("x", "t")
    prec = (max_total + 1, X.N * max_total + 1)
    gens = []
    for i, b in enumerate(X.betti):
        if b:
            gens.append(Generator((m * n, i + g), (i + g) % 2, b))
    out = signed_sym_product(gens, vars, prec)
    colour = signed_sym_product(_betti_generators(X, True), vars, prec)
    return out * colour**m


# --- Hodge–Deligne ---------------------------------------------------------


def _require_hodge(params: DensityParams):
    if params.X.hodge is None:
        raise InvalidInputError(f"{params.X.name} has no Hodge data")
    if not params.even:
        raise InvalidInputError("Hodge–Deligne formulas need a complex variety (even real dimension)")


def hd_Z_finite(params: DensityParams, d: Sequence[int], order: Optional[int] = None) -> TruncatedSeries:
    """Hodge–Deligne polynomial of the E2 page of ``Z^d_n(X)`` in ``(u, v)``."""
    _require_hodge(params)
    d = _check_d(params, d)
    X, n, g, r = params.X, params.n, params.g, params.r
    w = r * (params.mn - 1)
    jmax = min(d) // n
    top = max((max(p, q) for p, q, _ in X.hodge), default=0)
    prec = (top + w) * max(jmax, 1) + top * sum(d) + 1 if order is None else order
    shifted = signed_sym_product(
        _hodge_generators(X.hodge, True, shift=(w, w), degree_shift=g), ("x", "u", "v"), (jmax + 1, prec, prec)
    )
    total = TruncatedSeries.zero(("u", "v"), (prec, prec))
    for j in range(jmax + 1):
        term = shifted.coefficient_of("x", j)
        for di in d:
            term = term * _hd_sym(X, di - n * j, prec)
        total = total + term
    return total


def _hd_sym(X: ManifoldData, k: int, prec: int) -> TruncatedSeries:
    s = sym_product_hd(X, k)
    return TruncatedSeries(("u", "v"), (prec, prec), s.coeffs)


def hd_ratio_finite(params: DensityParams, d: Sequence[int], order: int = DEFAULT_ORDER_2D) -> TruncatedSeries:
    """``HD(E_2(d)) / HD(Sym^d X)`` truncated at ``order`` in each variable."""
    num = TruncatedSeries(("u", "v"), (order, order), hd_Z_finite(params, d).coeffs)
    den = TruncatedSeries.one(("u", "v"), (order, order))
    for di in _check_d(params, d):
        den = den * TruncatedSeries(("u", "v"), (order, order), sym_product_hd(params.X, di).coeffs)
    return num * den.reciprocal()


def hd_limit(params: DensityParams, order: int = DEFAULT_ORDER_2D) -> TruncatedSeries:
    """Limit of ``HD(Z^d_n(X)) / HD(Sym^d X)``: the displayed product over ``h^{p,q,i}``."""
    _require_hodge(params)
    w = params.r * (params.mn - 1)
    gens = _hodge_generators(params.X.hodge, False, shift=(w, w), degree_shift=params.g)
    return signed_sym_product(gens, ("u", "v"), (order, order))


# --- coincidences ----------------------------------------------------------


def factorizations(product: int) -> list[tuple[int, int]]:
    """All ``(m, n)`` with ``m n = product`` (``(1, 1)`` excluded as degenerate)."""
    return [(m, product // m) for m in range(1, product + 1) if product % m == 0 and product >= 2]


def agreement_order(a: TruncatedSeries, b: TruncatedSeries) -> int:
    """Largest ``k`` such that ``a`` and ``b`` agree in every degree below ``k``."""
    prec = min(a.prec[0], b.prec[0])
    for k in range(prec):
        if a.coeffs.get((k,), 0) != b.coeffs.get((k,), 0):
            return k
    return prec


@dataclass
class CoincidenceReport:
    product: int
    X: str
    densities: dict
    exact_agreement: bool
    finite: list  # (label_a, label_b, agreement order)

    def to_json(self) -> dict:
        return {
            "product": self.product,
            "X": self.X,
            "densities": {f"{m},{n}": s.coefficient_list() for (m, n), s in self.densities.items()},
            "exact_agreement": self.exact_agreement,
            "finite": [{"a": a, "b": b, "agreement_order": k} for a, b, k in self.finite],
        }


def coincidence_report(
    product: int,
    X: ManifoldData,
    finite_pairs: Sequence[tuple[tuple[int, int, tuple], tuple[int, int, tuple]]] = (),
    order: int = DEFAULT_ORDER,
) -> CoincidenceReport:
    """Compare limiting densities across every factorization ``m n = product``.

    ``finite_pairs`` lists pairs of ``(m, n, d)`` whose finite-``d``
    density ratios are compared; the report records the order to which
    they agree.
    """
    if product < 2:
        raise InvalidInputError("the product mn must be at least 2")
    dens = {}
    for m, n in factorizations(product):
        dens[(m, n)] = limiting_density(DensityParams(m, n, X), order)
    values = list(dens.values())
    exact = all(v == values[0] for v in values)
    finite = []
    for (m1, n1, d1), (m2, n2, d2) in finite_pairs:
        a = density_finite(DensityParams(m1, n1, X), d1, order)
        b = density_finite(DensityParams(m2, n2, X), d2, order)
        finite.append((f"m={m1},n={n1},d={list(d1)}", f"m={m2},n={n2},d={list(d2)}", agreement_order(a, b)))
    return CoincidenceReport(product, X.name, dens, exact, finite)


def stable_range(params: DensityParams, d: Sequence[int]) -> int:
    """Degrees ``*`` covered by the stability statement: ``* <= d_i`` or ``* <= d_i / 2``."""
    d = _check_d(params, d)
    low = min(d)
    if params.even and params.r == 1 and params.m == 1 and params.n == 2:
        return low // 2
    return low
