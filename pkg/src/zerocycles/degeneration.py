"""A sufficient criterion for the Leray spectral sequence to degenerate at E2.

Input is the rational cohomology ring of a compact oriented ``Z`` (graded
basis, structure constants, a trace on the top degree) together with the
restriction map to ``H^*(X)`` for an open ``X`` inside ``Z``.  The element

    kappa = sum T(e_{i_1} ... e_{i_k}) e^_{i_1} (x) ... (x) e^_{i_k},   k = mn,

built from the Poincaré dual basis ``e^``, is restricted factorwise to
``H^*(X)^{(x) k}``.  If it dies there, all differentials vanish.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvalidInputError


@dataclass
class RingData:
    """Cohomology ring of ``Z`` with a restriction to ``X``.

    ``products`` maps ``(a, b)`` to ``{c: coeff}`` for ``e_a e_b``; pairs
    not listed follow from graded commutativity, from the unit, or are
    zero.  ``restriction[a]`` is ``{k: coeff}`` over ``target`` (a list of
    ``(name, degree)``).
    """

    names: list
    degrees: list
    products: dict
    trace: dict
    target: list = field(default_factory=list)
    restriction: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.names) != len(self.degrees) or len(set(self.names)) != len(self.names):
            raise InvalidInputError("basis names must be distinct, one degree each")
        units = [i for i, d in enumerate(self.degrees) if d == 0]
        if len(units) != 1:
            raise InvalidInputError("need exactly one degree-0 basis element (Z connected)")
        self.unit = units[0]
        self.top = max(self.degrees)
        for a, deg in self.trace.items():
            if self.degrees[a] != self.top:
                raise InvalidInputError("the trace lives on the top degree")
        for (a, b), out in self.products.items():
            for c in out:
                if self.degrees[c] != self.degrees[a] + self.degrees[b]:
                    raise InvalidInputError(f"product {self.names[a]}*{self.names[b]} is not homogeneous")
        for (a, b), out in self.products.items():
            if (b, a) in self.products and a != b:
                sign = (-1) ** (self.degrees[a] * self.degrees[b])
                other = self.products[(b, a)]
                if {c: sign * v for c, v in out.items() if v} != {c: v for c, v in other.items() if v}:
                    raise InvalidInputError(
                        f"{self.names[a]}*{self.names[b]} violates graded commutativity"
                    )
        for a, image in self.restriction.items():
            for k in image:
                if self.target[k][1] != self.degrees[a]:
                    raise InvalidInputError("restriction must preserve degree")
        if self.restriction:
            unit_image = {k: v for k, v in self.restriction.get(self.unit, {}).items() if v}
            if len(unit_image) != 1 or list(unit_image.values())[0] != 1 or self.target[next(iter(unit_image))][1] != 0:
                raise InvalidInputError("restriction must send 1 to 1")

    @property
    def size(self) -> int:
        return len(self.names)

    def basis_product(self, a: int, b: int) -> dict:
        if (a, b) in self.products:
            return dict(self.products[(a, b)])
        if (b, a) in self.products:
            sign = (-1) ** (self.degrees[a] * self.degrees[b])
            return {c: sign * v for c, v in self.products[(b, a)].items()}
        if a == self.unit:
            return {b: 1}
        if b == self.unit:
            return {a: 1}
        return {}

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, w in y.items():
                for c, v in self.basis_product(a, b).items():
                    out[c] = out.get(c, 0) + u * w * v
        return {c: v for c, v in out.items() if v}

    def T(self, x: Mapping):
        return sum(v * self.trace.get(a, 0) for a, v in x.items())

    # --- json --------------------------------------------------------------

    @classmethod
    def from_json(cls, data) -> "RingData":
        names = [b["name"] for b in data["basis"]]
        degrees = [int(b["degree"]) for b in data["basis"]]
        idx = {nm: i for i, nm in enumerate(names)}
        try:
            products: dict = {}
            for a, b, c, coeff in data.get("products", []):
                products.setdefault((idx[a], idx[b]), {})
                key = idx[c]
                products[(idx[a], idx[b])][key] = products[(idx[a], idx[b])].get(key, 0) + Fraction(coeff)
            trace = {idx[nm]: Fraction(v) for nm, v in data["trace"].items()}
            target = []
            restriction: dict = {}
            if "restriction" in data:
                res = data["restriction"]
                for t in res["target_basis"]:
                    target.append((t["name"], int(t["degree"])) if isinstance(t, dict) else tuple(t))
                matrix = res["matrix"]
                if len(matrix) != len(names):
                    raise InvalidInputError("restriction matrix needs one row per basis element")
                for a, row in enumerate(matrix):
                    if len(row) != len(target):
                        raise InvalidInputError("restriction matrix row has the wrong length")
                    restriction[a] = {k: Fraction(v) for k, v in enumerate(row) if v}
        except KeyError as exc:
            raise InvalidInputError(f"unknown basis element {exc}") from None
        return cls(names, degrees, products, trace, target, restriction)

    def to_json(self) -> dict:
        def num(v):
            v = Fraction(v)
            return v.numerator if v.denominator == 1 else str(v)

        out = {
            "basis": [{"name": nm, "degree": d} for nm, d in zip(self.names, self.degrees)],
            "products": [
                [self.names[a], self.names[b], self.names[c], num(v)]
                for (a, b), res in sorted(self.products.items())
                for c, v in sorted(res.items())
            ],
            "trace": {self.names[a]: num(v) for a, v in self.trace.items()},
        }
        if self.target:
            out["restriction"] = {
                "target_basis": [{"name": nm, "degree": d} for nm, d in self.target],
                "matrix": [
                    [num(self.restriction.get(a, {}).get(k, 0)) for k in range(len(self.target))]
                    for a in range(self.size)
                ],
            }
        return out


def _invert(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    size = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(matrix)]
    for c in range(size):
        piv = next((r for r in range(c, size) if a[r][c] != 0), None)
        if piv is None:
            raise InvalidInputError("the trace pairing is degenerate; Z must be compact and orientable")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(size):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[size:] for row in a]


def pairing_matrix(ring: RingData) -> list[list]:
    return [[ring.T(ring.basis_product(a, b)) for b in range(ring.size)] for a in range(ring.size)]


def dual_basis(ring: RingData) -> list[dict]:
    """``dual[b]`` expresses ``e^_b`` in the basis, with ``T(e_a e^_b) = delta_ab``."""
    inv = _invert(pairing_matrix(ring))
    return [{c: inv[c][b] for c in range(ring.size) if inv[c][b] != 0} for b in range(ring.size)]


def kappa_element(ring: RingData, mn: int) -> dict:
    """The element kappa as ``{(c_1, ..., c_k): coeff}`` over basis indices."""
    if mn < 2:
        raise InvalidInputError("mn must be at least 2")
    dual = dual_basis(ring)
    out: dict = {}
    target = ring.top

    def rec(prefix, prod, deg):
        if len(prefix) == mn:
            t = ring.T(prod)
            if t:
                for combo in itertools.product(*(dual[i].items() for i in prefix)):
                    key = tuple(c for c, _ in combo)
                    coeff = t
                    for _, v in combo:
                        coeff *= v
                    out[key] = out.get(key, 0) + coeff
            return
        for i in range(ring.size):
            nd = deg + ring.degrees[i]
            if nd > target:
                continue
            # products are evaluated left to right
            nxt = ring.multiply(prod, {i: 1})
            if nxt:
                rec(prefix + (i,), nxt, nd)

    rec((), {ring.unit: 1}, 0)
    return {k: v for k, v in out.items() if v}


def restrict_tensor(ring: RingData, tensor: Mapping) -> dict:
    """Apply the restriction map in every tensor factor."""
    if not ring.target:
        raise InvalidInputError("ring has no restriction map")
    out: dict = {}
    for key, coeff in tensor.items():
        images = [ring.restriction.get(c, {}) for c in key]
        if any(not im for im in images):
            continue
        for combo in itertools.product(*(im.items() for im in images)):
            k = tuple(t for t, _ in combo)
            v = coeff
            for _, w in combo:
                v *= w
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def degeneration_holds(ring: RingData, mn: int) -> bool:
    """True iff kappa restricts to zero in ``H^*(X)^{(x) mn}``."""
    return not restrict_tensor(ring, kappa_element(ring, mn))


def render_tensor(ring: RingData, tensor: Mapping, names=None) -> str:
    names = ring.names if names is None else names
    terms = []
    for key, v in sorted(tensor.items()):
        body = " ⊗ ".join(names[c] for c in key)
        terms.append(f"{v}*({body})" if v != 1 else f"({body})")
    return " + ".join(terms) if terms else "0"


# --- worked examples ---------------------------------------------------------


def point_ring() -> RingData:
    return RingData(["1"], [0], {}, {0: Fraction(1)}, [("1", 0)], {0: {0: Fraction(1)}})


def sphere_to_plane() -> RingData:
    """``Z = S^2`` with ``X = C`` (the sphere minus a point)."""
    return RingData(["1", "w"], [0, 2], {}, {1: Fraction(1)}, [("1", 0)], {0: {0: Fraction(1)}})


def torus(restrict_to_punctured: bool = True) -> RingData:
    """``Z = T^2`` with ``X = T^2`` minus a point: ``ab`` dies, ``a, b`` survive."""
    names = ["1", "a", "b", "ab"]
    degrees = [0, 1, 1, 2]
    products = {(1, 2): {3: Fraction(1)}, (1, 1): {}, (2, 2): {}}
    trace = {3: Fraction(1)}
    if restrict_to_punctured:
        target = [("1", 0), ("a", 1), ("b", 1)]
        res = {0: {0: Fraction(1)}, 1: {1: Fraction(1)}, 2: {2: Fraction(1)}}
    else:
        target = [(nm, d) for nm, d in zip(names, degrees)]
        res = {i: {i: Fraction(1)} for i in range(4)}
    return RingData(names, degrees, products, trace, target, res)


BUILTIN_RINGS = {
    "point": point_ring,
    "S2:C": sphere_to_plane,
    "T2:T2-pt": torus,
}


def load_ring(path: str) -> RingData:
    with open(path) as fh:
        return RingData.from_json(json.load(fh))
