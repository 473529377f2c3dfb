"""Reduced homology of order complexes by direct linear algebra.

This is the brute-force side of every homology comparison in the package:
it never looks at edge labels, only at chains and boundary matrices.

Degrees follow the usual conventions for tiny posets: a two-element
poset has reduced homology of rank one in degree -1 (its proper part is
empty, so only the empty simplex survives), and a one-element poset has
rank one in degree -2.
"""

from __future__ import annotations

from collections import Counter

from ._linalg import rank_q, smith_divisors
from .colored_partitions import NEqualsPartition
from .errors import InvalidInputError
from .poset import BoundedPoset, OrderComplex, product_decomposition

GradedDims = dict  # degree -> rank


def clean(dims) -> dict:
    """Drop zero entries and sort by degree."""
    return {k: v for k, v in sorted(dims.items()) if v}


def boundary_rows(K: OrderComplex, k: int) -> list[dict]:
    """Sparse rows of the boundary map from k-simplices to (k-1)-simplices.

    ``k = 0`` maps every vertex onto the empty simplex (column 0).
    """
    if k == 0:
        return [{0: 1} for _ in K.simplices[0]] if K.simplices else []
    if k >= len(K.simplices):
        return []
    faces = {s: i for i, s in enumerate(K.simplices[k - 1])}
    rows = []
    for s in K.simplices[k]:
        row = {}
        for j in range(k + 1):
            row[faces[s[:j] + s[j + 1:]]] = -1 if j % 2 else 1
        rows.append(row)
    return rows


def _special_case(P: BoundedPoset):
    if not P.is_bounded:
        raise InvalidInputError("reduced homology is defined here for bounded posets only")
    if len(P) == 1:
        return {-2: 1}
    return None


def reduced_homology(P: BoundedPoset, limit: int | None = None) -> GradedDims:
    """Rational reduced homology ranks of the proper part of ``P``."""
    special = _special_case(P)
    if special is not None:
        return special
    K = P.order_complex(limit=limit)
    return complex_homology(K)


def complex_homology(K: OrderComplex) -> GradedDims:
    top = K.dimension
    ranks = {k: rank_q(boundary_rows(K, k)) for k in range(0, top + 1)}
    out = {}
    for k in range(-1, top + 1):
        dim = K.count(k) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if dim < 0:
            raise AssertionError("negative Betti number")
        out[k] = dim
    return clean(out)


def integral_homology(P: BoundedPoset, limit: int | None = None):
    """Free ranks and torsion coefficients of reduced integral homology.

    Returns ``(ranks, torsion)`` where ``torsion[k]`` lists the non-unit
    elementary divisors in degree ``k``.
    """
    special = _special_case(P)
    if special is not None:
        return special, {}
    K = P.order_complex(limit=limit)
    top = K.dimension
    divisors = {k: smith_divisors(boundary_rows(K, k)) for k in range(0, top + 1)}
    ranks = {}
    torsion = {}
    for k in range(-1, top + 1):
        rk_k = len(divisors.get(k, []))
        rk_up = len(divisors.get(k + 1, []))
        ranks[k] = K.count(k) - rk_k - rk_up
        tors = [d for d in divisors.get(k + 1, []) if d != 1]
        if tors:
            torsion[k] = tors
    return clean(ranks), torsion


def integral_torsion_check(P: BoundedPoset, limit: int | None = None) -> bool:
    """True iff the reduced integral homology of ``P`` is torsion-free."""
    _, torsion = integral_homology(P, limit=limit)
    return not torsion


def convolve(dims_list) -> GradedDims:
    """Degree-wise convolution of several rank tables (tensor product ranks)."""
    acc = Counter({0: 1})
    for dims in dims_list:
        nxt = Counter()
        for a, x in acc.items():
            for b, y in dims.items():
                nxt[a + b] += x * y
        acc = nxt
    return clean(acc)


def kunneth_prediction(factor_dims, shift_blocks: int) -> GradedDims:
    """Ranks predicted for a product of ``shift_blocks`` bounded posets."""
    conv = convolve(factor_dims)
    return {k + 2 * (shift_blocks - 1): v for k, v in conv.items()}


def kunneth_rank_check(D, n, I: NEqualsPartition, homology=reduced_homology) -> bool:
    """Compare homology of the down-set of ``I`` with the product of its block factors."""
    from .poset import partition_lattice

    lattice = partition_lattice(D, n)
    if I not in lattice:
        raise InvalidInputError(f"{I!r} is not an element of the lattice")
    lhs = homology(lattice.down_set(I))
    factors = product_decomposition(D, n, I)
    rhs = kunneth_prediction([homology(f) for f in factors], len(factors))
    return lhs == rhs


def euler_from_ranks(dims: GradedDims) -> int:
    return sum((-1) ** k * v for k, v in dims.items())


class HomologyBasis:
    """Explicit rational bases of reduced homology, for computing traces.

    In each degree the boundaries are put in echelon form first; cycles
    that stay independent of them are kept as homology representatives.
    Reducing the image of a representative against this echelon system
    reads off its homology coordinates.
    """

    def __init__(self, P: BoundedPoset, limit: int | None = None):
        from ._linalg import Echelon, kernel_basis

        self.poset = P
        self.point = _special_case(P) is not None
        self.reps: dict = {}
        self._echelon: dict = {}
        if self.point:
            return
        K = P.order_complex(limit=limit)
        self.complex = K
        self._simplex_index = [{s: i for i, s in enumerate(layer)} for layer in K.simplices]
        for k in range(-1, K.dimension + 1):
            ech = Echelon()
            for row in boundary_rows(K, k + 1):
                ech.add(row, None)
            if k == -1:
                cycles = [{0: 1}]
            else:
                cycles = kernel_basis(boundary_rows(K, k), K.count(k - 1))
            reps = []
            for z in cycles:
                rem, _ = ech.reduce(z)
                if rem:
                    tag = len(reps)
                    ech.rows[min(rem)] = (rem, tag)
                    reps.append(rem)
            if reps:
                self.reps[k] = reps
                self._echelon[k] = ech

    def dims(self) -> GradedDims:
        if self.point:
            return {-2: 1}
        return {k: len(v) for k, v in sorted(self.reps.items())}

    def traces(self, perm) -> dict:
        """Trace of an order automorphism on each homology group.

        ``perm`` maps element indices of the poset to element indices.
        Chains go to chains with no sign, since the order is preserved.
        """
        if self.point:
            return {-2: 1}
        out = {}
        for k, reps in self.reps.items():
            if k == -1:
                out[k] = len(reps)
                continue
            index = self._simplex_index[k]
            simplices = self.complex.simplices[k]
            ech = self._echelon[k]
            total = 0
            for tag, h in enumerate(reps):
                image = {}
                for s, c in h.items():
                    t = tuple(sorted(perm[v] for v in simplices[s]))
                    image[index[t]] = c
                _, coeffs = ech.reduce(image)
                total += coeffs.get(tag, 0)
            out[k] = total
        return out


def lefschetz_number(P: BoundedPoset, perm) -> int:
    """Alternating trace on reduced homology, from fixed simplices alone."""
    if _special_case(P) is not None:
        return 1  # single class in degree -2
    K = P.order_complex()
    total = -1  # the empty simplex, degree -1
    for k, layer in enumerate(K.simplices):
        fixed = sum(1 for s in layer if all(perm[v] == v for v in s))
        total += (-1) ** k * fixed
    return total
