"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines go straight to
the terminal, bypassing capture).
"""

import random
import time
from decimal import Decimal
from fractions import Fraction

import pytest

from zerocycles import homology, shellability
from zerocycles.arithmetic import nprime_density_integers, nprime_ratio_fq, zeta_inverse
from zerocycles.cli import interval_equivalence, size_vectors
from zerocycles.colored_partitions import ColoredSet, has_top
from zerocycles.degeneration import degeneration_holds, sphere_to_plane, torus
from zerocycles.densities import (
    DensityParams,
    assembled_euler_gf,
    coincidence_report,
    euler_gf,
    hd_limit,
    hd_ratio_finite,
    limiting_density,
    limiting_poincare,
    poincare_Z_finite,
    stable_range,
)
from zerocycles.gm import ArrangementSpec, expected_local_dims, invariant_dims, ordered_cohomology_dims
from zerocycles.series import NAMED, PUNCTURED_LINE, ManifoldData, TruncatedSeries

PAIRS = ((1, 2), (1, 3), (2, 1), (2, 2), (3, 1))
MAX_SIZE = 6


@pytest.fixture
def verdict(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}", flush=True)
        assert ok, f"criterion {k}: {detail}"

    return emit


def lattices():
    for m, n in PAIRS:
        for sizes in size_vectors(m, MAX_SIZE):
            D = ColoredSet(sizes)
            if len(D) >= 2 and has_top(D, n):
                yield m, n, D


@pytest.fixture(scope="module")
def labelled():
    return [(m, n, D, shellability.labelled_lattice(D, n)) for m, n, D in lattices()]


def test_criterion_1_shellability(verdict):
    t0 = time.perf_counter()
    failures = []
    count = 0
    for m, n, D in lattices():
        count += 1
        if not shellability.verify_el(D, n).passed:
            failures.append((m, n, D.sizes))
    D = ColoredSet((4,))
    lab = shellability.labelled_lattice(D, 2)
    P = lab.poset
    i, j = P.upper_covers[P.bottom][:2]
    bottom = P.elements[P.bottom]
    corrupted = lab.swapped((bottom, P.elements[i]), (bottom, P.elements[j]))
    corrupt_fails = not shellability.verify_el(D, 2, corrupted).passed
    seconds = time.perf_counter() - t0
    ok = not failures and corrupt_fails and seconds < 60
    verdict(
        1,
        ok,
        f"EL verified on {count - len(failures)}/{count} lattices with |D| <= {MAX_SIZE}; "
        f"corrupted labelling rejected: {corrupt_fails}; {seconds:.1f}s (< 60s)",
    )


def test_criterion_2_oracle_equivalence(verdict, labelled):
    bad = []
    torsion = []
    for m, n, D, lab in labelled:
        same, torsion_free = interval_equivalence(lab)
        if not same:
            bad.append((m, n, D.sizes))
        if not torsion_free:
            torsion.append((m, n, D.sizes))
    verdict(
        2,
        not bad and not torsion,
        f"falling-chain vs Smith-form homology on all intervals of {len(labelled)} lattices: "
        f"{len(bad)} mismatches, {len(torsion)} with torsion",
    )


def test_criterion_3_kunneth(verdict, labelled):
    checked = 0
    bad = []
    for m, n, D, lab in labelled:
        for I in lab.poset.elements:
            checked += 1
            if not homology.kunneth_rank_check(D, n, I):
                bad.append((m, n, D.sizes, I))
    verdict(3, not bad, f"Kunneth rank identity on {checked} lower intervals: {len(bad)} failures")


def _poly(ks):
    out = {0: 1}
    for k in ks:
        nxt = dict(out)
        for deg, c in out.items():
            nxt[deg + 1] = nxt.get(deg + 1, 0) + k * c
        out = nxt
    return out


def test_criterion_4_gm_local(verdict):
    t0 = time.perf_counter()
    notes = []
    ok = True
    for d in (2, 3, 4):
        got = ordered_cohomology_dims(ArrangementSpec(ColoredSet((d,)), 2, 2))
        want = _poly(range(1, d))
        ok &= got == want
        notes.append(f"d={d}:{'ok' if got == want else got}")
    cases = [((3,), 2, N) for N in (2, 3)] + [((4,), 2, N) for N in (2, 3)] + [((2, 2), 1, 2)]
    for sizes, n, N in cases:
        got = invariant_dims(ArrangementSpec(ColoredSet(sizes), n, N))
        want = expected_local_dims(len(sizes), n, N)
        ok &= got == want
        notes.append(f"{sizes},N={N}:{'ok' if got == want else got}")
    seconds = time.perf_counter() - t0
    ok &= seconds < 120
    verdict(4, ok, f"{'; '.join(notes)}; {seconds:.1f}s (< 120s)")


@pytest.mark.xfail(strict=True, reason="odd N with n = 1: the local value {0: 1} is false, see notes")
def test_criterion_4_odd_dimension_two_colors(verdict):
    # (2, 2) points in R^3 with no red point meeting a blue point; the
    # unordered complement has Betti numbers {0: 1, 2: 1, 4: 3, 6: 1}.
    got = invariant_dims(ArrangementSpec(ColoredSet((2, 2)), 1, 3))
    want = expected_local_dims(2, 1, 3)
    verdict("4 (d=(2,2) at N=3, expected to fail)", got == want, f"invariant_dims = {got}, local value {want}")


def test_criterion_5_headline_series(verdict):
    prec = 13
    one = limiting_poincare(DensityParams(1, 2, PUNCTURED_LINE), prec).coefficient_list()
    two = limiting_poincare(DensityParams(2, 1, PUNCTURED_LINE), prec).coefficient_list()
    dens = [limiting_density(DensityParams(m, n, PUNCTURED_LINE), prec).coefficient_list() for m, n in ((1, 2), (2, 1))]
    ok = one == [1] + [2] * 12
    ok &= two == [1, 3] + [4] * 11
    ok &= all(x == [1] * 13 for x in dens)
    verdict(5, ok, f"C*: P(m=1,n=2) = {one[:5]}..., P(m=2,n=1) = {two[:5]}..., density = 1+t+t^2+... through t^12")


def _random_space(rng):
    r = rng.choice((1, 2))
    return ManifoldData(2 * r, (1,) + tuple(rng.randint(0, 4) for _ in range(2 * r)), name=f"random{r}")


def test_criterion_6_coincidence(verdict):
    prec = 13
    ok = True
    for seed in range(10):
        X = _random_space(random.Random(seed))
        for product in (2, 3, 4, 6):
            ok &= coincidence_report(product, X, order=prec).exact_agreement
    rep = coincidence_report(2, PUNCTURED_LINE, [((1, 2, (10,)), (2, 1, (10, 10)))], order=prec)
    k = rep.finite[0][2]
    ok &= k >= 6
    verdict(
        6,
        ok,
        f"limiting densities equal across factorizations of mn in {{2,3,4,6}} for 10 random spaces; "
        f"C* finite (1,2),d=10 vs (2,1),d=(10,10) agree below t^{k} (need t^5)",
    )


def test_criterion_7_euler(verdict):
    prec = 11
    bad = []
    for name in ("C", "C*", "S2", "T2"):
        for m, n in ((1, 2), (2, 1), (2, 2)):
            params = DensityParams(m, n, NAMED[name])
            chi = params.X.euler_characteristic
            closed = (
                TruncatedSeries.from_list([1] + [0] * (m * n - 1) + [-1], "x", prec) ** chi
                * TruncatedSeries.from_list([1, -1], "x", prec).reciprocal() ** (m * chi)
            )
            a = assembled_euler_gf(params, prec)
            ok = a == euler_gf(params, prec) == closed
            if not ok:
                bad.append((name, m, n))
    verdict(7, not bad, f"assembled E2 Euler sums equal the closed form through x^10 on 12 cases; failures {bad}")


def _hd_agreement(a, b):
    prec = min(a.prec[0], b.prec[0])
    for k in range(prec):
        for i in range(k + 1):
            if a.coeffs.get((i, k - i), 0) != b.coeffs.get((i, k - i), 0):
                return k
    return prec


def test_criterion_8_hodge_deligne(verdict):
    prec = 13
    params = DensityParams(1, 2, PUNCTURED_LINE)
    lim = hd_limit(params, prec)
    want = {(k, k): 1 for k in range(7)}
    low = {e: c for e, c in lim.coeffs.items() if sum(e) <= 12}
    ok = low == want
    orders = [_hd_agreement(hd_ratio_finite(params, [d], prec), lim) for d in range(1, 10)]
    ok &= orders == sorted(orders) and orders[-1] == prec
    verdict(8, ok, f"HD limit = 1+uv+...+(uv)^6; finite ratios d=1..9 agree through total degree {orders}")


def test_criterion_9_degeneration(verdict):
    cases = [
        ("S2,C,mn=2", degeneration_holds(sphere_to_plane(), 2), True),
        ("T2,T2-*,mn=2", degeneration_holds(torus(), 2), False),
        ("T2,T2-*,mn=3", degeneration_holds(torus(), 3), True),
    ]
    ok = all(got == want for _, got, want in cases)
    verdict(9, ok, ", ".join(f"{name} -> {got}" for name, got, _ in cases))


def test_criterion_10_stability(verdict):
    bad = []
    checked = 0
    for m, n in ((1, 2), (2, 1), (1, 3), (2, 2)):
        params = DensityParams(m, n, PUNCTURED_LINE)
        vectors = [tuple(v) for v in size_vectors(m, 10 * m) if all(4 <= x <= 10 for x in v)]
        series = {d: poincare_Z_finite(params, d).coefficient_list() for d in vectors}
        for d in vectors:
            top = stable_range(params, d)
            for e in vectors:
                if all(x <= y for x, y in zip(d, e)):
                    checked += 1
                    a = (series[d] + [0] * (top + 1))[: top + 1]
                    b = (series[e] + [0] * (top + 1))[: top + 1]
                    if a != b:
                        bad.append((m, n, d, e))
    verdict(10, not bad, f"C*: {checked} comparisons of P(d) vs P(d') for d <= d' in 4..10 within the stable range; {len(bad)} failures")


def test_criterion_11_arithmetic(verdict):
    t0 = time.perf_counter()
    enc = zeta_inverse(2, "int")
    dens = nprime_density_integers(1, 2, 10**6)
    dist = enc.distance(Decimal(dens.numerator) / Decimal(dens.denominator))
    ratios = {d: nprime_ratio_fq(3, 1, 2, [d]) for d in range(2, 7)}
    seconds = time.perf_counter() - t0
    ok = dist <= Decimal("0.001") and all(r == Fraction(2, 3) for r in ratios.values()) and seconds < 30
    verdict(
        11,
        ok,
        f"squarefree density at 10^6 = {float(dens):.6f}, distance {float(dist):.2e} from zeta(2)^-1 in {enc}; "
        f"F_3[t] ratios {[str(r) for r in ratios.values()]}; {seconds:.1f}s (< 30s)",
    )
