"""Cohomology of colored n-equals arrangement complements.

The complement of the arrangement of diagonals ``X_I`` in ``(R^N)^D`` has

    H^i = sum over I of  H~_{N cd(I) - i - 2}(Delta(proper part of [0, I]))

and its ``S_D``-invariant part is obtained by averaging traces over the
group.  The trace of ``sigma`` on the summand for a fixed ``I`` is the
trace on the order-complex homology times the character of ``sigma`` on
the orientation line of the normal space of ``X_I``.

Everything here is generic over a finite intersection poset with a group
acting on it, so the same code also handles small complex hyperplane
arrangements (see :class:`ComplexArrangement`).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .colored_partitions import (
    ColoredSet,
    NEqualsPartition,
    SymmetryGroupElement,
    block_permutation,
    codim,
    conjugacy_classes,
    normalize_n,
)
from .errors import InvalidInputError, ResourceLimitError
from .homology import HomologyBasis, clean, lefschetz_number, reduced_homology
from .poset import BoundedPoset, partition_lattice
from .shellability import falling_counts, homology_from_counts, labelled_lattice

#: |D| above which invariant_dims refuses to run
INVARIANT_LIMIT = 6


@dataclass(frozen=True)
class ArrangementSpec:
    D: ColoredSet
    n: int
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise InvalidInputError(f"ambient factor dimension N must be >= 2, got {self.N}")
        object.__setattr__(self, "n", normalize_n(self.D, self.n))


# --- ordered complement ------------------------------------------------


def _gm_sum(pieces: Iterable[tuple[int, dict]]) -> dict:
    """Assemble ``(codimension, reduced homology)`` pieces into cohomology dims."""
    out: Counter = Counter()
    for cd, dims in pieces:
        for r, rank in dims.items():
            out[cd - r - 2] += rank
    return clean(out)


def ordered_cohomology_dims(spec: ArrangementSpec, method: str = "falling") -> dict:
    """Betti numbers of the ordered complement ``Z~^D_n(R^N)``.

    ``method="falling"`` reads interval homology off falling chains of the
    EL-labelling; ``method="oracle"`` builds every order complex.
    """
    D, n, N = spec.D, spec.n, spec.N
    if method == "falling":
        lab = labelled_lattice(D, n)
        P = lab.poset
        pieces = []
        for b, I in enumerate(P.elements):
            counts = falling_counts(lab, b)[P.bottom]
            pieces.append((N * codim(I), homology_from_counts(counts)))
        return _gm_sum(pieces)
    if method == "oracle":
        P = partition_lattice(D, n)
        return _gm_sum((N * codim(I), reduced_homology(P.down_set(I))) for I in P.elements)
    raise InvalidInputError(f"unknown method {method!r}")


# --- characters ----------------------------------------------------------


def block_permutation_character(sigma: SymmetryGroupElement, I: NEqualsPartition, N: int) -> int:
    """``sgn(permutation of the blocks of I induced by sigma) ** N``."""
    if sigma.act(I) != I:
        raise InvalidInputError(f"sigma does not fix {I}")
    from .colored_partitions import permutation_sign

    return permutation_sign(block_permutation(sigma, I)) ** N


def coor_character(sigma: SymmetryGroupElement, I: NEqualsPartition, N: int) -> int:
    """Character of ``sigma`` on the orientation line of the normal space of ``X_I``.

    ``sigma`` permutes the ``N``-dimensional factors of ``(R^N)^D`` with
    determinant ``sgn(sigma)^N`` and those of ``X_I = (R^N)^{blocks}`` with
    determinant given by the block permutation; the normal line carries
    the quotient of the two.
    """
    return sigma.sign**N * block_permutation_character(sigma, I, N)


# --- invariants ----------------------------------------------------------


def equivariant_gm_dims(
    P: BoundedPoset,
    codim_of: Callable,
    group: Sequence[tuple[object, int]],
    act: Callable,
    character: Callable,
) -> dict:
    """Dimensions of invariants of a group acting on a GM-type sum.

    ``P`` is the intersection poset with the ambient space at the bottom.
    ``group`` lists ``(g, weight)`` pairs (conjugacy class representatives
    with class sizes, or every element with weight 1); ``act(g, x)`` moves
    an element of ``P`` and ``character(g, x)`` is the sign on the
    orientation line of ``x``.
    """
    if P.bottom is None:
        raise InvalidInputError("intersection poset needs a least element")
    order = sum(w for _, w in group)
    bases: dict = {}
    totals: Counter = Counter()
    for g, weight in group:
        for xi, x in enumerate(P.elements):
            gx = act(g, x)
            if gx != x:
                continue
            if xi not in bases:
                bases[xi] = HomologyBasis(P.down_set(x))
            basis = bases[xi]
            sub = basis.poset
            perm = {i: sub.index[act(g, y)] for i, y in enumerate(sub.elements)}
            chi = character(g, x)
            cd = codim_of(x)
            for r, tr in basis.traces(perm).items():
                totals[cd - r - 2] += weight * chi * tr
    out = {}
    for deg, tot in totals.items():
        q = Fraction(tot, order)
        if q.denominator != 1:
            raise AssertionError(f"non-integral invariant dimension {q} in degree {deg}")
        out[deg] = int(q)
    return clean(out)


def _check_small(D: ColoredSet, limit):
    limit = INVARIANT_LIMIT if limit is None else limit
    if len(D) > limit:
        raise ResourceLimitError("invariant_dims limit |D|", len(D), limit)


def invariant_dims(spec: ArrangementSpec, limit: int | None = None, character: Callable | None = None) -> dict:
    """Betti numbers of the unordered complement ``Z^d_n(R^N)`` (rational, via transfer)."""
    _check_small(spec.D, limit)
    character = coor_character if character is None else character
    P = partition_lattice(spec.D, spec.n)
    return equivariant_gm_dims(
        P,
        lambda I: spec.N * codim(I),
        conjugacy_classes(spec.D),
        lambda g, I: g.act(I),
        lambda g, I: character(g, I, spec.N),
    )


def invariant_euler_characteristic(spec: ArrangementSpec, limit: int | None = None) -> Fraction:
    """Burnside average of Lefschetz numbers, computed from fixed chains only."""
    _check_small(spec.D, limit)
    P = partition_lattice(spec.D, spec.n)
    total = 0
    for g, weight in conjugacy_classes(spec.D):
        for I in P.elements:
            if g.act(I) != I:
                continue
            sub = P.down_set(I)
            perm = {i: sub.index[g.act(y)] for i, y in enumerate(sub.elements)}
            cd = spec.N * codim(I)
            # degree i = cd - r - 2 has sign (-1)^(cd + r)
            total += weight * coor_character(g, I, spec.N) * (-1) ** cd * lefschetz_number(sub, perm)
    return Fraction(total, spec.D.group_order())


# --- small complex arrangements --------------------------------------------


def _rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over Q, as a hashable tuple of rows."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return ()
    ncols = len(a[0])
    out = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return tuple(tuple(row) for row in a[:r])


class ComplexArrangement:
    """Central arrangement of complex subspaces of ``C^k`` cut out by linear forms.

    Each subspace is given by the rational rows of its defining equations.
    Flats are stored as row spaces in reduced echelon form; the ambient
    space is the empty row space.
    """

    def __init__(self, k: int, subspaces: Sequence[Sequence[Sequence]]):
        self.k = k
        gens = [_rref(s) for s in subspaces]
        flats = {(): None}
        frontier = [()]
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    h = _rref(list(f) + list(g))
                    if h not in flats:
                        flats[h] = None
                        nxt.append(h)
            frontier = nxt
        self.flats = list(flats)

        def leq(x, y):
            # x below y iff the subspace y sits inside x
            return _rref(list(x) + list(y)) == y

        self.poset = BoundedPoset.from_relation(self.flats, leq)

    def real_codim(self, flat) -> int:
        return 2 * len(flat)

    def permute(self, perm: Sequence[int], flat) -> tuple:
        """Image of a flat under the coordinate permutation ``z_i -> z_perm[i]``."""
        rows = []
        for row in flat:
            new = [Fraction(0)] * self.k
            for i, x in enumerate(row):
                new[perm[i]] = x
            rows.append(new)
        return _rref(rows)

    def cohomology_dims(self) -> dict:
        P = self.poset
        return _gm_sum((self.real_codim(x), reduced_homology(P.down_set(x))) for x in P.elements)

    def invariant_dims(self, perms: Sequence[Sequence[int]]) -> dict:
        """Invariants under a group of coordinate permutations (listed in full)."""
        # complex linear maps preserve orientation, so the character is trivial
        return equivariant_gm_dims(
            self.poset,
            self.real_codim,
            [(tuple(p), 1) for p in perms],
            lambda g, x: self.permute(g, x),
            lambda g, x: 1,
        )


def expected_local_dims(m: int, n: int, N: int) -> dict:
    """Betti numbers of the unordered complement in the range where every ``d_i >= n``."""
    if m == 1 and n == 1:
        n = 2
    if N % 2:
        return {0: 1}
    r = N // 2
    return {0: 1, 2 * r * (m * n - 1) - 1: 1}
