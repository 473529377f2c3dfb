"""EL-labelling of the colored n-equals partition lattice.

Every cover ``I < J`` merges blocks of ``I`` into exactly one new block of
``J`` in one of three ways:

* block creation: singletons only, exactly ``n`` of each color;
* singleton adding: one non-singleton block absorbs one singleton;
* block merging: two non-singleton blocks.

Labels live in a totally ordered set.  Barred labels ``Bar(a)``, for ``a``
of color 1, come first in the order of color 1.  Tuple labels
``(t_1, ..., t_m)`` follow, ordered lexicographically, where ``t_1`` may
carry a ``-eps`` flag that places it just below ``t_1``.

Verification runs one backward dynamic program per top element ``b``,
which handles every interval ``[a, b]`` at once: for each ``a`` it counts
rising chains, finds the lexicographically least label word with its
multiplicity, and tallies falling chains by length.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .colored_partitions import ColoredSet, NEqualsPartition, has_top
from .errors import InvalidInputError, NoTopElementError
from .homology import clean
from .poset import BoundedPoset, partition_lattice


@dataclass(frozen=True, order=False)
class LambdaLabel:
    """A label; compare with ``<`` etc. through :attr:`key`.

    ``kind`` is ``"bar"`` or ``"tuple"``.  For a bar, ``entries = (a,)``.
    For a tuple, ``entries`` are internal element ids ``(t_1, ..., t_m)``
    and ``minus_eps`` flags ``t_1 - eps``.
    """

    kind: str
    entries: tuple
    minus_eps: bool = False

    @property
    def key(self) -> tuple:
        if self.kind == "bar":
            return (0, self.entries[0])
        t = self.entries
        return (1, t[0], 0 if self.minus_eps else 1) + tuple(t[1:])

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def render(self, D: ColoredSet) -> str:
        def name(e):
            c, j = D.label(e)
            return str(j) if D.m == 1 else f"{c}.{j}"

        if self.kind == "bar":
            return "bar(" + name(self.entries[0]) + ")"
        parts = [name(e) for e in self.entries]
        if self.minus_eps:
            parts[0] += "-eps"
        return "(" + ", ".join(parts) + ")"


def Bar(a: int) -> LambdaLabel:
    return LambdaLabel("bar", (a,))


def Tuple(*entries: int, minus_eps: bool = False) -> LambdaLabel:
    return LambdaLabel("tuple", tuple(entries), minus_eps)


@dataclass(frozen=True)
class EdgeKind:
    """How a cover ``I < J`` arises.

    ``kind`` is one of ``"BlockCreation"``, ``"SingletonAdd"``,
    ``"BlockMerge"``.  ``blocks`` are the blocks of ``I`` that get merged
    (the receiving block first for a singleton add) and ``element`` is the
    added singleton, if any.
    """

    kind: str
    blocks: tuple
    element: Optional[int] = None


def classify_edge(I: NEqualsPartition, J: NEqualsPartition) -> EdgeKind:
    if I.carrier != J.carrier or I.n != J.n:
        raise InvalidInputError("partitions live on different carriers")
    D, n = I.carrier, I.n
    old = set(I.blocks)
    new = [b for b in J.blocks if b not in old]
    if len(new) != 1:
        raise InvalidInputError(f"{I} < {J} is not a Hasse edge")
    target = set(new[0])
    parts = [b for b in I.blocks if b[0] in target]
    if sum(len(b) for b in parts) != len(target) or any(not target.issuperset(b) for b in parts):
        raise InvalidInputError(f"{I} does not refine {J}")
    if len(I.blocks) - len(parts) + 1 != len(J.blocks):
        raise InvalidInputError(f"{I} does not refine {J}")
    big = [b for b in parts if len(b) > 1]
    small = [b for b in parts if len(b) == 1]
    if not big:
        if all(c == n for c in D.color_counts(new[0])):
            return EdgeKind("BlockCreation", tuple(parts))
    elif len(big) == 1 and len(small) == 1:
        return EdgeKind("SingletonAdd", (big[0], small[0]), small[0][0])
    elif len(big) == 2 and not small:
        return EdgeKind("BlockMerge", tuple(big))
    raise InvalidInputError(f"{I} < {J} is not a Hasse edge")


def _color_max(D: ColoredSet, block, color: int) -> int:
    return max(e for e in block if D.colors[e] == color)


def _global_max(D: ColoredSet, color: int) -> int:
    r = D.color_class(color)
    if not len(r):
        raise InvalidInputError(f"color {color} is empty")
    return r[-1]


def label_for(D: ColoredSet, edge: EdgeKind) -> LambdaLabel:
    """Label of an edge of the given kind (depends only on the moved blocks)."""
    m = D.m
    if edge.kind == "BlockCreation":
        block = [b[0] for b in edge.blocks]
        return Tuple(*(_color_max(D, block, i) for i in range(1, m + 1)))
    if edge.kind == "SingletonAdd":
        B, a = edge.blocks[0], edge.element
        i = D.colors[a]
        if i == 1:
            delta = a < _color_max(D, B, 1)
            rest = [_global_max(D, k) for k in range(2, m + 1)]
            return Tuple(a, *rest, minus_eps=delta)
        head = [_color_max(D, B, k) for k in range(1, i)]
        rest = [_global_max(D, k) for k in range(i + 1, m + 1)]
        return Tuple(*head, a, *rest)
    if edge.kind == "BlockMerge":
        B, C = edge.blocks
        return Bar(max(_color_max(D, B, 1), _color_max(D, C, 1)))
    raise InvalidInputError(f"unknown edge kind {edge.kind}")


def edge_label(I: NEqualsPartition, J: NEqualsPartition) -> LambdaLabel:
    return label_for(I.carrier, classify_edge(I, J))


# --- labelled lattices -------------------------------------------------


class Labelling:
    """Edge labels of a poset, keyed by index pairs of its Hasse edges."""

    def __init__(self, poset: BoundedPoset, labels: dict):
        self.poset = poset
        self.labels = dict(labels)

    @classmethod
    def standard(cls, poset: BoundedPoset) -> "Labelling":
        """The n-equals labelling on a poset of partitions."""
        labels = {}
        cache = {}
        for i, j in poset.hasse_edges():
            I, J = poset.elements[i], poset.elements[j]
            edge = classify_edge(I, J)
            key = (edge.kind, edge.blocks)
            if key not in cache:
                cache[key] = label_for(I.carrier, edge)
            labels[(i, j)] = cache[key]
        return cls(poset, labels)

    def label(self, i: int, j: int) -> LambdaLabel:
        return self.labels[(i, j)]

    def swapped(self, e1, e2) -> "Labelling":
        """Copy with the labels of two edges exchanged; edges given as element pairs."""
        idx = self.poset.index
        k1 = (idx[e1[0]], idx[e1[1]])
        k2 = (idx[e2[0]], idx[e2[1]])
        labels = dict(self.labels)
        labels[k1], labels[k2] = labels[k2], labels[k1]
        return Labelling(self.poset, labels)

    def chain_labels(self, chain) -> list[LambdaLabel]:
        idx = self.poset.index
        ids = [idx[x] for x in chain]
        return [self.labels[(a, b)] for a, b in zip(ids, ids[1:])]


@lru_cache(maxsize=64)
def labelled_lattice(D: ColoredSet, n: int) -> Labelling:
    return Labelling.standard(partition_lattice(D, n))


def _is_rising(word) -> bool:
    return all(a.key < b.key for a, b in zip(word, word[1:]))


def _is_falling(word) -> bool:
    return all(a.key >= b.key for a, b in zip(word, word[1:]))


def _chains_with_labels(P: BoundedPoset, labelling: Optional[Labelling]):
    for chain in P.maximal_chains():
        if labelling is None:
            word = [edge_label(x, y) for x, y in zip(chain, chain[1:])]
        else:
            word = labelling.chain_labels(chain)
        yield chain, word


def rising_chains(P: BoundedPoset, labelling: Optional[Labelling] = None) -> list[tuple]:
    """Maximal chains of the bounded poset ``P`` with strictly increasing labels.

    ``P`` is an interval of a partition lattice; ``labelling`` may be a
    labelling of the ambient lattice (for instance a corrupted one).
    """
    return [c for c, w in _chains_with_labels(P, labelling) if _is_rising(w)]


def falling_chains(P: BoundedPoset, labelling: Optional[Labelling] = None) -> list[tuple]:
    """Maximal chains of ``P`` with weakly decreasing labels."""
    return [c for c, w in _chains_with_labels(P, labelling) if _is_falling(w)]


# --- dynamic programme over all intervals --------------------------------


@dataclass
class IntervalData:
    """What the backward pass knows about ``[a, b]``."""

    rising: int
    lex_min: tuple  # label keys of the lexicographically least chain
    lex_min_count: int
    falling: dict  # chain length -> count


def _backward_pass(labelling: Labelling, b: int, want_falling: bool = True):
    """Per-``a`` data for every interval ``[a, b]`` with fixed top ``b``."""
    P = labelling.poset
    labels = labelling.labels
    down = P.down[b]
    order = [i for i in range(b, -1, -1) if down >> i & 1]
    END = None
    rise: dict = {}
    word: dict = {}
    mult: dict = {}
    fall: dict = {}
    out = {}
    for x in order:
        if x == b:
            rise[x] = {END: 1}
            word[x] = ()
            mult[x] = 1
            fall[x] = {END: Counter({0: 1})}
        else:
            r: Counter = Counter()
            best = None
            bestcount = 0
            f: dict = {}
            for y in P.upper_covers[x]:
                if not down >> y & 1:
                    continue
                lab = labels[(x, y)]
                key = lab.key
                cnt = 0
                for first, c in rise[y].items():
                    if first is END or key < first:
                        cnt += c
                if cnt:
                    r[key] += cnt
                cand = (key,) + word[y]
                if best is None or cand < best:
                    best, bestcount = cand, mult[y]
                elif cand == best:
                    bestcount += mult[y]
                if want_falling:
                    acc = f.setdefault(key, Counter())
                    for first, lengths in fall[y].items():
                        if first is END or key >= first:
                            for length, c in lengths.items():
                                acc[length + 1] += c
            rise[x] = dict(r)
            word[x] = best
            mult[x] = bestcount
            fall[x] = {k: v for k, v in f.items() if v}
        falling = Counter()
        if want_falling:
            for lengths in fall[x].values():
                falling.update(lengths)
        out[x] = IntervalData(sum(rise[x].values()), word[x], mult[x], dict(falling))
    return out


@dataclass
class ELReport:
    """Result of :func:`verify_el`.

    ``counterexample`` is ``None`` on success, else a dict describing the
    first failing interval.
    """

    passed: bool
    intervals_checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "fail", "intervals_checked": self.intervals_checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _describe_failure(labelling: Labelling, a: int, b: int, data: IntervalData) -> dict:
    P = labelling.poset
    sub = P.subposet(P.interval_indices(a, b))
    chains = sub.maximal_chains(limit=10000)
    D = P.elements[a].carrier if hasattr(P.elements[a], "carrier") else None

    def show(chain):
        word = labelling.chain_labels(chain)
        return {
            "chain": [str(x) for x in chain],
            "labels": [w.render(D) if D is not None else repr(w) for w in word],
        }

    rising = [c for c in chains if _is_rising(labelling.chain_labels(c))]
    if data.rising != 1:
        reason = f"{data.rising} rising chains"
    elif data.lex_min_count != 1:
        reason = f"{data.lex_min_count} chains share the least label word"
    else:
        reason = "the least label word is not rising"
    least = min(chains, key=lambda c: tuple(w.key for w in labelling.chain_labels(c)))
    return {
        "interval": [str(P.elements[a]), str(P.elements[b])],
        "reason": reason,
        "rising_chains": [show(c) for c in rising],
        "lex_first_chain": show(least),
    }


def verify_labelling(labelling: Labelling) -> ELReport:
    """Check the EL conditions on every interval of a labelled poset."""
    P = labelling.poset
    checked = 0
    for b in range(len(P)):
        data = _backward_pass(labelling, b, want_falling=False)
        for a in sorted(data):
            d = data[a]
            checked += 1
            ok = d.rising == 1 and d.lex_min_count == 1 and all(
                x < y for x, y in zip(d.lex_min, d.lex_min[1:])
            )
            if not ok:
                return ELReport(False, checked, _describe_failure(labelling, a, b, d))
    return ELReport(True, checked)


def verify_el(D: ColoredSet, n: int, labelling: Optional[Labelling] = None) -> ELReport:
    """Check that the standard labelling of the n-equals lattice of ``D`` is an EL-labelling."""
    if not has_top(D, n):
        raise NoTopElementError(f"the n-equals poset of {D} with n={n} has no top element")
    if labelling is None:
        labelling = labelled_lattice(D, n)
    return verify_labelling(labelling)


def falling_counts(labelling: Labelling, b: int) -> dict:
    """``{a: {length: #falling chains of [a, b]}}`` for every ``a <= b``."""
    return {a: d.falling for a, d in _backward_pass(labelling, b).items()}


def homology_from_counts(falling_by_length: dict) -> dict:
    """Falling chains of length ``r + 2`` give rank in degree ``r``."""
    return clean({length - 2: c for length, c in falling_by_length.items()})


def homology_via_falling_chains(P: BoundedPoset, labelling: Optional[Labelling] = None) -> dict:
    """Reduced homology ranks of the proper part of ``P`` read off falling chains.

    ``P`` is a bounded interval of a partition lattice.  ``labelling`` may
    label ``P`` itself or any poset containing it as an interval; by
    default the standard labels are computed on ``P``.
    """
    if not P.is_bounded:
        raise InvalidInputError("need a bounded poset")
    if labelling is None:
        labelling = Labelling.standard(P)
    big = labelling.poset
    a, b = big.index[P.bottom_element()], big.index[P.top_element()]
    return homology_from_counts(falling_counts(labelling, b)[a])
