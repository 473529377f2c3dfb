"""Colored sets and their n-equals partitions.

A colored set with sizes ``(d_1, ..., d_m)`` has elements ``(i, j)`` with
color ``1 <= i <= m`` and index ``1 <= j <= d_i``; each color class is
ordered by index.  Internally elements are the integers ``0 .. |D|-1``,
numbered color by color, so that the per-color order is the integer order.

A partition is *n-equals* when every block is a singleton or contains at
least ``n`` elements of every color.  These partitions, ordered by
refinement, form the lattice studied in :mod:`zerocycles.shellability`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInputError, NoTopElementError, ResourceLimitError

#: Default guard on ``|D|`` for anything that enumerates a whole lattice.
ENUMERATION_LIMIT = 10


@dataclass(frozen=True)
class ColoredSet:
    """A finite set split into ``m`` linearly ordered color classes."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise InvalidInputError("a colored set needs at least one color")
        if any(s < 0 for s in sizes):
            raise InvalidInputError(f"color sizes must be non-negative, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def m(self) -> int:
        return len(self.sizes)

    def __len__(self) -> int:
        return sum(self.sizes)

    @cached_property
    def _offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0,) + self.sizes[:-1]))

    @cached_property
    def colors(self) -> tuple[int, ...]:
        """Color (1-based) of each internal element."""
        return tuple(c + 1 for c, s in enumerate(self.sizes) for _ in range(s))

    @cached_property
    def indices(self) -> tuple[int, ...]:
        """Index within its color class (1-based) of each internal element."""
        return tuple(j + 1 for s in self.sizes for j in range(s))

    def element(self, color: int, index: int) -> int:
        """Internal id of the element ``(color, index)``."""
        if not 1 <= color <= self.m or not 1 <= index <= self.sizes[color - 1]:
            raise InvalidInputError(f"no element ({color}, {index}) in {self}")
        return self._offsets[color - 1] + index - 1

    def label(self, e: int) -> tuple[int, int]:
        return (self.colors[e], self.indices[e])

    def color_class(self, color: int) -> range:
        start = self._offsets[color - 1]
        return range(start, start + self.sizes[color - 1])

    def color_counts(self, block: Iterable[int]) -> tuple[int, ...]:
        counts = [0] * self.m
        for e in block:
            counts[self.colors[e] - 1] += 1
        return tuple(counts)

    def group_order(self) -> int:
        """``|S_D| = prod d_i!``."""
        return math.prod(math.factorial(s) for s in self.sizes)

    def to_json(self) -> dict:
        return {"m": self.m, "sizes": list(self.sizes)}

    @classmethod
    def from_json(cls, data: dict) -> "ColoredSet":
        sizes = tuple(data["sizes"])
        if "m" in data and data["m"] != len(sizes):
            raise InvalidInputError(f"m={data['m']} does not match sizes {list(sizes)}")
        return cls(sizes)

    def __str__(self):
        return f"D{self.sizes}"


def normalize_n(D: ColoredSet, n: int) -> int:
    """Return the effective ``n``; ``(m, n) = (1, 1)`` gives the same poset as ``(1, 2)``."""
    n = int(n)
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if D.m == 1 and n == 1:
        return 2
    return n


def _is_n_equals_block(D: ColoredSet, n: int, block: Sequence[int]) -> bool:
    if len(block) == 1:
        return True
    return all(c >= n for c in D.color_counts(block))


@dataclass(frozen=True)
class NEqualsPartition:
    """An n-equals partition of a colored set.

    Blocks are stored canonically: each block sorted, blocks sorted by their
    minimum element, so equality is structural.
    """

    carrier: ColoredSet
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = normalize_n(self.carrier, self.n)
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        seen = [b for block in blocks for b in block]
        if any(len(b) == 0 for b in blocks):
            raise InvalidInputError("partition blocks must be non-empty")
        if sorted(seen) != list(range(len(self.carrier))):
            raise InvalidInputError(f"blocks {blocks} do not partition {self.carrier}")
        for b in blocks:
            if not _is_n_equals_block(self.carrier, n, b):
                raise InvalidInputError(
                    f"block {self._fmt_block(b)} has fewer than {n} elements of some color"
                )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def _trusted(cls, carrier, n, blocks):
        # Skips validation; blocks must already be canonical.
        obj = object.__new__(cls)
        object.__setattr__(obj, "carrier", carrier)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    @classmethod
    def from_labels(cls, carrier: ColoredSet, n: int, blocks) -> "NEqualsPartition":
        """Build from blocks given as lists of ``(color, index)`` pairs.

        Elements not mentioned become singletons.
        """
        used = set()
        out = []
        for block in blocks:
            ids = [carrier.element(c, j) for c, j in block]
            used.update(ids)
            out.append(ids)
        out.extend([e] for e in range(len(carrier)) if e not in used)
        return cls(carrier, n, out)

    @classmethod
    def bottom(cls, carrier: ColoredSet, n: int) -> "NEqualsPartition":
        return cls(carrier, n, [(e,) for e in range(len(carrier))])

    @classmethod
    def top(cls, carrier: ColoredSet, n: int) -> "NEqualsPartition":
        if not has_top(carrier, n):
            raise NoTopElementError(f"the n-equals poset of {carrier} with n={n} has no top element")
        if len(carrier) == 0:
            return cls(carrier, n, ())
        return cls(carrier, n, [tuple(range(len(carrier)))])

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        """Block number of every element."""
        out = [0] * len(self.carrier)
        for k, block in enumerate(self.blocks):
            for e in block:
                out[e] = k
        return tuple(out)

    def __len__(self):
        """Number of blocks."""
        return len(self.blocks)

    @property
    def non_singletons(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.blocks if len(b) > 1)

    def to_json(self) -> list:
        return [[list(self.carrier.label(e)) for e in b] for b in self.blocks]

    def _fmt_block(self, block):
        if self.carrier.m == 1:
            return "(" + "".join(str(self.carrier.indices[e]) for e in block) + ")" if len(self.carrier) < 10 else str([self.carrier.indices[e] for e in block])
        return "(" + " ".join(f"{c}.{j}" for c, j in map(self.carrier.label, block)) + ")"

    def __str__(self):
        nonsing = self.non_singletons
        if not nonsing:
            return "0"
        return "".join(self._fmt_block(b) for b in nonsing)

    def __repr__(self):
        return f"NEqualsPartition({self.carrier}, n={self.n}, {self})"


def has_top(D: ColoredSet, n: int) -> bool:
    """Whether the single-block partition is n-equals (or ``|D| <= 1``)."""
    n = normalize_n(D, n)
    return len(D) <= 1 or all(d >= n for d in D.sizes)


def _check_limit(D: ColoredSet, limit):
    limit = ENUMERATION_LIMIT if limit is None else limit
    if len(D) > limit:
        raise ResourceLimitError("enumeration limit |D|", len(D), limit)


def _set_partitions(k: int) -> Iterator[list[list[int]]]:
    # restricted-growth enumeration; blocks come out canonical
    if k == 0:
        yield []
        return
    blocks: list[list[int]] = []

    def rec(e):
        if e == k:
            yield blocks
            return
        for b in blocks:
            b.append(e)
            yield from rec(e + 1)
            b.pop()
        blocks.append([e])
        yield from rec(e + 1)
        blocks.pop()

    yield from rec(0)


def enumerate_partitions(D: ColoredSet, n: int, limit: int | None = None) -> list[NEqualsPartition]:
    """Every n-equals partition of ``D`` exactly once, ordered by codimension."""
    _check_limit(D, limit)
    n = normalize_n(D, n)
    out = []
    for blocks in _set_partitions(len(D)):
        if all(_is_n_equals_block(D, n, b) for b in blocks):
            out.append(NEqualsPartition._trusted(D, n, tuple(tuple(b) for b in blocks)))
    out.sort(key=lambda p: (len(D) - len(p), p.blocks))
    return out


def _same_carrier(I: NEqualsPartition, J: NEqualsPartition):
    if I.carrier != J.carrier or I.n != J.n:
        raise InvalidInputError(f"partitions live on different carriers: {I!r} vs {J!r}")


def refines(I: NEqualsPartition, J: NEqualsPartition) -> bool:
    """True iff every block of ``I`` lies inside a block of ``J``."""
    _same_carrier(I, J)
    where = J.block_of
    return all(len({where[e] for e in b}) == 1 for b in I.blocks)


def join(I: NEqualsPartition, J: NEqualsPartition) -> NEqualsPartition:
    """Finest partition refined by both ``I`` and ``J``."""
    _same_carrier(I, J)
    parent = list(range(len(I.carrier)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in I.blocks + J.blocks:
        r = find(block[0])
        for e in block[1:]:
            s = find(e)
            if s != r:
                parent[s] = r
    groups: dict[int, list[int]] = {}
    for e in range(len(I.carrier)):
        groups.setdefault(find(e), []).append(e)
    return NEqualsPartition(I.carrier, I.n, list(groups.values()))


def codim(I: NEqualsPartition) -> int:
    """``|D|`` minus the number of blocks."""
    return len(I.carrier) - len(I)


def codim_in(I: NEqualsPartition, N: int) -> int:
    """Real codimension of the diagonal ``X_I`` in ``X^D`` for ``dim X = N``."""
    return N * codim(I)


def transverse(I: NEqualsPartition, J: NEqualsPartition) -> bool:
    return codim(I) + codim(J) == codim(join(I, J))


# --- symmetry ------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryGroupElement:
    """A color-preserving bijection of ``D``, one permutation per color.

    ``perms[c][j]`` is the image of the ``(j+1)``-th element of color ``c+1``
    (0-based positions within the color class).
    """

    carrier: ColoredSet
    perms: tuple[tuple[int, ...], ...]
    images: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perms = tuple(tuple(p) for p in self.perms)
        if len(perms) != self.carrier.m:
            raise InvalidInputError("need one permutation per color")
        for p, s in zip(perms, self.carrier.sizes):
            if sorted(p) != list(range(s)):
                raise InvalidInputError(f"{p} is not a permutation of {s} points")
        object.__setattr__(self, "perms", perms)
        offs = self.carrier._offsets
        images = tuple(offs[c] + p[j] for c, p in enumerate(perms) for j in range(len(p)))
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, D: ColoredSet):
        return cls(D, tuple(tuple(range(s)) for s in D.sizes))

    @classmethod
    def from_images(cls, D: ColoredSet, images: Sequence[int]):
        perms = []
        for c in range(D.m):
            cls_range = D.color_class(c + 1)
            perms.append(tuple(images[e] - cls_range.start for e in cls_range))
        return cls(D, tuple(perms))

    def __call__(self, e: int) -> int:
        return self.images[e]

    def __mul__(self, other: "SymmetryGroupElement") -> "SymmetryGroupElement":
        # (self * other)(e) = self(other(e))
        return SymmetryGroupElement.from_images(self.carrier, [self.images[other.images[e]] for e in range(len(self.carrier))])

    @cached_property
    def sign(self) -> int:
        return permutation_sign(self.images)

    def act(self, I: NEqualsPartition) -> NEqualsPartition:
        if I.carrier != self.carrier:
            raise InvalidInputError("group element and partition have different carriers")
        blocks = tuple(sorted(tuple(sorted(self.images[e] for e in b)) for b in I.blocks))
        return NEqualsPartition._trusted(I.carrier, I.n, blocks)


def permutation_sign(images: Sequence[int]) -> int:
    seen = [False] * len(images)
    sign = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        e = start
        while not seen[e]:
            seen[e] = True
            e = images[e]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetry_group(D: ColoredSet) -> Iterator[SymmetryGroupElement]:
    """All of ``S_D``; ``prod d_i!`` elements."""
    for perms in itertools.product(*(itertools.permutations(range(s)) for s in D.sizes)):
        yield SymmetryGroupElement(D, perms)


def _partitions_of_int(k: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions_of_int(k - first, first):
            yield (first,) + rest


def _centralizer_order(cycle_type: tuple[int, ...]) -> int:
    out = 1
    for length, mult in _multiplicities(cycle_type).items():
        out *= length**mult * math.factorial(mult)
    return out


def _multiplicities(items) -> dict:
    counts: dict = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    return counts


def conjugacy_classes(D: ColoredSet) -> list[tuple[SymmetryGroupElement, int]]:
    """One representative and the class size for every conjugacy class of ``S_D``."""
    per_color = []
    for s in D.sizes:
        options = []
        for ctype in _partitions_of_int(s):
            perm = []
            start = 0
            for length in ctype:
                perm.extend(start + (k + 1) % length for k in range(length))
                start += length
            options.append((tuple(perm), math.factorial(s) // _centralizer_order(ctype)))
        per_color.append(options)
    out = []
    for combo in itertools.product(*per_color):
        perms = tuple(p for p, _ in combo)
        size = math.prod(c for _, c in combo)
        out.append((SymmetryGroupElement(D, perms), size))
    return out


def stabilizer_order(I: NEqualsPartition) -> int:
    """Order of the setwise stabilizer of ``I`` in ``S_D``.

    Blocks with the same color-count vector can be permuted among
    themselves; inside a block each color class can be permuted freely.
    """
    D = I.carrier
    total = 1
    types = []
    for b in I.blocks:
        counts = D.color_counts(b)
        types.append(counts)
        total *= math.prod(math.factorial(c) for c in counts)
    for mult in _multiplicities(types).values():
        total *= math.factorial(mult)
    return total


def orbit(I: NEqualsPartition) -> set[NEqualsPartition]:
    """The ``S_D``-orbit of ``I``, generated by adjacent transpositions."""
    D = I.carrier
    gens = []
    for c in range(D.m):
        for j in range(D.sizes[c] - 1):
            perms = [list(range(s)) for s in D.sizes]
            perms[c][j], perms[c][j + 1] = perms[c][j + 1], perms[c][j]
            gens.append(SymmetryGroupElement(D, tuple(map(tuple, perms))))
    seen = {I}
    todo = [I]
    while todo:
        x = todo.pop()
        for g in gens:
            y = g.act(x)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def orbit_type(I: NEqualsPartition) -> tuple:
    """Invariant that determines the ``S_D``-orbit of ``I``: sorted block color counts."""
    return tuple(sorted(I.carrier.color_counts(b) for b in I.blocks))


def block_permutation(sigma: SymmetryGroupElement, I: NEqualsPartition) -> tuple[int, ...]:
    """Permutation induced by ``sigma`` on the blocks of ``I`` (requires ``sigma I = I``)."""
    where = I.block_of
    perm = []
    for b in I.blocks:
        targets = {where[sigma(e)] for e in b}
        if len(targets) != 1:
            raise InvalidInputError(f"{sigma} does not fix {I}")
        perm.append(targets.pop())
    if sorted(perm) != list(range(len(I.blocks))):
        raise InvalidInputError(f"{sigma} does not fix {I}")
    # block sizes must match for sigma to fix I
    if any(len(I.blocks[k]) != len(I.blocks[perm[k]]) for k in range(len(perm))):
        raise InvalidInputError(f"{sigma} does not fix {I}")
    return tuple(perm)


def restrict_to_block(I: NEqualsPartition, block: Sequence[int]) -> tuple[ColoredSet, list[int]]:
    """Re-read ``block`` as a colored set; returns it and the element map new -> old."""
    D = I.carrier
    counts = D.color_counts(block)
    ordered = sorted(block, key=lambda e: (D.colors[e], D.indices[e]))
    return ColoredSet(counts), ordered
