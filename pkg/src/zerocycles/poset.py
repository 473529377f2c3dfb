"""Finite bounded posets, intervals, Hasse edges, chains and order complexes.

Elements are arbitrary hashable values.  Internally they are numbered in a
linear extension, and the order relation is kept as two bitsets per
element (its up-set and its down-set).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .colored_partitions import (
    ColoredSet,
    NEqualsPartition,
    enumerate_partitions,
    restrict_to_block,
)
from .errors import InvalidInputError, ResourceLimitError

#: Guard on the number of elements of a poset built by pairwise comparison.
ELEMENT_LIMIT = 20000


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BoundedPoset:
    """A finite poset given by its elements and order relation.

    ``bottom``/``top`` are the indices of the global minimum/maximum when
    they exist and ``None`` otherwise.
    """

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int]):
        # elements must already be in a linear extension; up[i] has bit j set iff i <= j
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise InvalidInputError("poset elements must be distinct")
        self.up = tuple(up)
        size = len(self.elements)
        down = [0] * size
        for i, mask in enumerate(self.up):
            for j in _bits(mask):
                down[j] |= 1 << i
        self.down = tuple(down)
        full = (1 << size) - 1
        self.bottom = next((i for i in range(size) if self.up[i] == full), None)
        self.top = next((i for i in range(size) if self.down[i] == full), None)
        self._covers = None

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], leq: Callable, limit: int | None = None):
        """Build from a list of elements and a comparison ``leq(x, y)``."""
        elements = list(elements)
        limit = ELEMENT_LIMIT if limit is None else limit
        if len(elements) > limit:
            raise ResourceLimitError("poset element limit", len(elements), limit)
        size = len(elements)
        rel = [[i == j or leq(elements[i], elements[j]) for j in range(size)] for i in range(size)]
        for i in range(size):
            for j in range(i + 1, size):
                if rel[i][j] and rel[j][i]:
                    raise InvalidInputError(f"{elements[i]!r} and {elements[j]!r} are equivalent")
        # linear extension: sort by number of elements below
        below = [sum(rel[j][i] for j in range(size)) for i in range(size)]
        order = sorted(range(size), key=lambda i: below[i])
        pos = {old: new for new, old in enumerate(order)}
        up = [0] * size
        for i in range(size):
            mask = 0
            for j in range(size):
                if rel[i][j]:
                    mask |= 1 << pos[j]
            up[pos[i]] = mask
        return cls([elements[i] for i in order], up)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def leq(self, x, y) -> bool:
        return bool(self.up[self.index[x]] >> self.index[y] & 1)

    def less(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    @property
    def is_bounded(self) -> bool:
        return self.bottom is not None and self.top is not None

    def bottom_element(self):
        if self.bottom is None:
            raise InvalidInputError("poset has no least element")
        return self.elements[self.bottom]

    def top_element(self):
        if self.top is None:
            raise InvalidInputError("poset has no greatest element")
        return self.elements[self.top]

    # --- Hasse diagram -------------------------------------------------

    def _compute_covers(self):
        size = len(self)
        upper = [[] for _ in range(size)]
        lower = [[] for _ in range(size)]
        for i in range(size):
            strict_up = self.up[i] & ~(1 << i)
            for j in _bits(strict_up):
                between = strict_up & self.down[j]
                if between == 1 << j:
                    upper[i].append(j)
                    lower[j].append(i)
        self._covers = (tuple(map(tuple, upper)), tuple(map(tuple, lower)))

    @property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        if self._covers is None:
            self._compute_covers()
        return self._covers[0]

    @property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        if self._covers is None:
            self._compute_covers()
        return self._covers[1]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs as index pairs ``(i, j)`` with ``i < j`` a cover."""
        return [(i, j) for i, ups in enumerate(self.upper_covers) for j in ups]

    def is_cover(self, x, y) -> bool:
        return self.index[y] in self.upper_covers[self.index[x]]

    # --- subposets -------------------------------------------------------

    def subposet(self, indices: Iterable[int]) -> "BoundedPoset":
        """Induced subposet on the given element indices."""
        keep = sorted(set(indices))
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for i in keep:
            mask = 0
            for j in _bits(self.up[i]):
                if j in pos:
                    mask |= 1 << pos[j]
            up.append(mask)
        return BoundedPoset([self.elements[i] for i in keep], up)

    def interval_indices(self, a: int, b: int) -> list[int]:
        return list(_bits(self.up[a] & self.down[b]))

    def interval(self, a, b) -> "BoundedPoset":
        """``[a, b]`` as a bounded poset."""
        ia, ib = self.index[a], self.index[b]
        if not self.up[ia] >> ib & 1:
            raise InvalidInputError(f"{a} is not below {b}")
        return self.subposet(self.interval_indices(ia, ib))

    def down_set(self, x) -> "BoundedPoset":
        """``P(<= x)``; bounded when ``P`` has a least element."""
        return self.subposet(_bits(self.down[self.index[x]]))

    def up_set(self, x) -> "BoundedPoset":
        return self.subposet(_bits(self.up[self.index[x]]))

    def proper_part(self) -> list[int]:
        """Indices of ``P`` minus its bottom and top."""
        return [i for i in range(len(self)) if i != self.bottom and i != self.top]

    # --- chains ----------------------------------------------------------

    def maximal_chains(self, limit: int | None = None) -> list[tuple]:
        """Maximal chains of a bounded poset, as tuples of elements from bottom to top."""
        if not self.is_bounded:
            raise InvalidInputError("maximal_chains needs a bounded poset")
        out = []
        top = self.top

        def rec(path):
            i = path[-1]
            if i == top:
                out.append(tuple(self.elements[k] for k in path))
                if limit is not None and len(out) > limit:
                    raise ResourceLimitError("maximal chain limit", len(out), limit)
                return
            for j in self.upper_covers[i]:
                path.append(j)
                rec(path)
                path.pop()

        rec([self.bottom])
        return out

    def order_complex(self, limit: int | None = None) -> "OrderComplex":
        """``Delta`` of the proper part of ``P``."""
        if not self.is_bounded:
            raise InvalidInputError("order_complex needs a bounded poset")
        return OrderComplex.from_poset(self, self.proper_part(), limit=limit)

    # --- export ----------------------------------------------------------

    def _name(self, x):
        return str(x)

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if hasattr(x, "to_json") else x

        return {
            "elements": [enc(x) for x in self.elements],
            "edges": [[i, j] for i, j in self.hasse_edges()],
        }

    def to_dot(self) -> str:
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for i, x in enumerate(self.elements):
            lines.append(f"  n{i} [label={json.dumps(self._name(x))}];")
        for i, j in self.hasse_edges():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"BoundedPoset({len(self)} elements)"


@dataclass
class OrderComplex:
    """Simplicial complex of chains.

    ``simplices[k]`` lists the ``k``-simplices, each a tuple of element
    indices of the underlying poset in increasing order.  The empty simplex
    is not stored.
    """

    poset: BoundedPoset
    vertices: tuple[int, ...]
    simplices: list[list[tuple[int, ...]]]

    #: default guard on the total number of simplices
    LIMIT = 400000

    @classmethod
    def from_poset(cls, P: BoundedPoset, vertices: Sequence[int], limit: int | None = None):
        limit = cls.LIMIT if limit is None else limit
        verts = sorted(vertices)
        vmask = 0
        for v in verts:
            vmask |= 1 << v
        by_dim: list[list[tuple[int, ...]]] = []
        count = 0
        layer = [(v,) for v in verts]
        while layer:
            by_dim.append(layer)
            count += len(layer)
            if count > limit:
                raise ResourceLimitError("order complex simplex limit", count, limit)
            nxt = []
            for s in layer:
                last = s[-1]
                for w in _bits(P.up[last] & vmask & ~(1 << last)):
                    nxt.append(s + (w,))
            layer = nxt
        return cls(P, tuple(verts), by_dim)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        if k == -1:
            return 1
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def euler_characteristic(self) -> int:
        """Reduced Euler characteristic, counting the empty simplex in degree -1."""
        return sum((-1) ** k * len(s) for k, s in enumerate(self.simplices)) - 1


# --- partition lattices ------------------------------------------------


def _refines_fast(I: NEqualsPartition, J: NEqualsPartition) -> bool:
    where = J.block_of
    for b in I.blocks:
        k = where[b[0]]
        for e in b[1:]:
            if where[e] != k:
                return False
    return True


def from_partitions(partitions: Iterable[NEqualsPartition], limit: int | None = None) -> BoundedPoset:
    """Refinement poset on a collection of partitions of one carrier."""
    parts = list(partitions)
    if parts:
        carrier, n = parts[0].carrier, parts[0].n
        if any(p.carrier != carrier or p.n != n for p in parts):
            raise InvalidInputError("partitions live on different carriers")
    # a refinement can only go up in codimension, which keeps the sort a linear extension
    parts.sort(key=lambda p: (len(p.carrier) - len(p), p.blocks))
    limit = ELEMENT_LIMIT if limit is None else limit
    if len(parts) > limit:
        raise ResourceLimitError("poset element limit", len(parts), limit)
    up = []
    for i, I in enumerate(parts):
        mask = 1 << i
        for j in range(i + 1, len(parts)):
            J = parts[j]
            if len(J) < len(I) and _refines_fast(I, J):
                mask |= 1 << j
        up.append(mask)
    return BoundedPoset(parts, up)


def partition_lattice(D: ColoredSet, n: int, limit: int | None = None) -> BoundedPoset:
    """The poset of all n-equals partitions of ``D``."""
    return from_partitions(enumerate_partitions(D, n, limit=limit))


def product_decomposition(D: ColoredSet, n: int, J: NEqualsPartition) -> list[BoundedPoset]:
    """One partition poset per block of ``J``, each block read as a colored set.

    Their product is isomorphic to the down-set of ``J``.
    """
    if J.carrier != D:
        raise InvalidInputError("J does not live on D")
    factors = []
    for block in J.blocks:
        sub, _ = restrict_to_block(J, block)
        factors.append(partition_lattice(sub, J.n))
    return factors
