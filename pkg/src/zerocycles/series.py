"""Truncated power series with integer coefficients, and symmetric powers.

A :class:`TruncatedSeries` has named variables and a precision per
variable: only monomials whose exponent in every variable is below its
precision are kept.  Everything is exact integer arithmetic.

The graded symmetric algebra on a graded vector space is handled by
:func:`signed_sym_product`: an even generator of weight ``w`` contributes
``(1 - x w)^-1`` and an odd one ``(1 + x w)``, where ``x`` counts the
number of factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidInputError

DEFAULT_ORDER = 24
DEFAULT_ORDER_2D = 12

_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class TruncatedSeries:
    """Immutable truncated multivariate series."""

    __slots__ = ("vars", "prec", "coeffs")

    def __init__(self, vars: Sequence[str], prec: Sequence[int], coeffs: Optional[Mapping] = None):
        vars = tuple(vars)
        prec = tuple(int(p) for p in prec)
        if len(vars) != len(prec):
            raise InvalidInputError("one precision per variable")
        if len(set(vars)) != len(vars):
            raise InvalidInputError(f"repeated variable in {vars}")
        if any(p < 1 for p in prec):
            raise InvalidInputError(f"precisions must be positive, got {prec}")
        clean = {}
        for e, c in (coeffs or {}).items():
            e = (e,) if isinstance(e, int) else tuple(e)
            if len(e) != len(vars):
                raise InvalidInputError(f"exponent {e} does not match variables {vars}")
            if any(x < 0 for x in e):
                raise InvalidInputError(f"negative exponent {e}")
            if c and all(x < p for x, p in zip(e, prec)):
                clean[e] = clean.get(e, 0) + int(c)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "coeffs", {e: c for e, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # --- constructors --------------------------------------------------

    @classmethod
    def one(cls, vars, prec):
        return cls(vars, prec, {(0,) * len(tuple(vars)): 1})

    @classmethod
    def zero(cls, vars, prec):
        return cls(vars, prec, {})

    @classmethod
    def monomial(cls, vars, prec, exps, coeff=1):
        return cls(vars, prec, {tuple(exps): coeff})

    @classmethod
    def from_list(cls, coeffs: Sequence[int], var: str = "t", prec: Optional[int] = None):
        """One-variable series from a coefficient list."""
        prec = len(coeffs) if prec is None else prec
        return cls((var,), (prec,), {(i,): c for i, c in enumerate(coeffs)})

    # --- basics ----------------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.vars)

    def __getitem__(self, exps) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(exps)
        if any(e >= p for e, p in zip(exps, self.prec)):
            raise IndexError(f"coefficient {exps} lies beyond the truncation {self.prec}")
        return self.coeffs.get(exps, 0)

    def coefficient(self, *exps) -> int:
        return self[exps]

    def coefficient_list(self) -> list[int]:
        """Dense coefficient list of a one-variable series."""
        if self.arity != 1:
            raise InvalidInputError("coefficient_list needs a one-variable series")
        return [self.coeffs.get((i,), 0) for i in range(self.prec[0])]

    def constant_term(self) -> int:
        return self.coeffs.get((0,) * self.arity, 0)

    def _check_compatible(self, other):
        if self.vars != other.vars:
            raise InvalidInputError(f"variables differ: {self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            return other
        if isinstance(other, int):
            return TruncatedSeries.one(self.vars, self.prec) * other if other else TruncatedSeries.zero(self.vars, self.prec)
        return NotImplemented

    def truncate(self, prec) -> "TruncatedSeries":
        prec = (prec,) * self.arity if isinstance(prec, int) else tuple(prec)
        prec = tuple(min(a, b) for a, b in zip(prec, self.prec))
        return TruncatedSeries(self.vars, prec, self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.vars == other.vars and self.prec == other.prec and self.coeffs == other.coeffs

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality at the common (smaller) precision."""
        self._check_compatible(other)
        prec = tuple(min(a, b) for a, b in zip(self.prec, other.prec))
        return self.truncate(prec).coeffs == other.truncate(prec).coeffs

    def __hash__(self):
        return hash((self.vars, self.prec, frozenset(self.coeffs.items())))

    # --- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        prec = tuple(min(a, b) for a, b in zip(self.prec, other.prec))
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.vars, prec, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.vars, self.prec, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(self.vars, self.prec, {e: c * other for e, c in self.coeffs.items()})
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        prec = tuple(min(a, b) for a, b in zip(self.prec, other.prec))
        out: dict = {}
        items = list(other.coeffs.items())
        for e1, c1 in self.coeffs.items():
            for e2, c2 in items:
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(x < p for x, p in zip(e, prec)):
                    out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(self.vars, prec, out)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """Inverse of a series whose constant term is +1 or -1."""
        c0 = self.constant_term()
        if c0 not in (1, -1):
            raise InvalidInputError(f"constant term {c0} is not a unit in Z")
        result = TruncatedSeries.one(self.vars, self.prec) * c0
        # Newton iteration doubles the number of correct total degrees each step
        total = sum(p - 1 for p in self.prec)
        correct = 1
        while correct <= total:
            result = result * (2 - self * result)
            correct *= 2
        return result

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.one(self.vars, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- variable handling -----------------------------------------------

    def _var_index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise InvalidInputError(f"no variable {var!r} in {self.vars}") from None

    def coefficient_of(self, var: str, k: int) -> "TruncatedSeries":
        """Coefficient of ``var**k``, a series in the other variables."""
        i = self._var_index(var)
        if k >= self.prec[i]:
            raise InvalidInputError(f"{var}^{k} lies beyond the truncation {self.prec[i]}")
        vars = self.vars[:i] + self.vars[i + 1:]
        prec = self.prec[:i] + self.prec[i + 1:]
        out = {e[:i] + e[i + 1:]: c for e, c in self.coeffs.items() if e[i] == k}
        if not vars:
            raise InvalidInputError("cannot drop the last variable; use specialize")
        return TruncatedSeries(vars, prec, out)

    def specialize(self, var: str, value: int):
        """Substitute an integer for ``var``.

        Only meaningful when the series is a polynomial in ``var`` below
        its truncation; the caller is responsible for that.  Returns an int
        when no variables remain.
        """
        i = self._var_index(var)
        vars = self.vars[:i] + self.vars[i + 1:]
        prec = self.prec[:i] + self.prec[i + 1:]
        out: dict = {}
        for e, c in self.coeffs.items():
            key = e[:i] + e[i + 1:]
            out[key] = out.get(key, 0) + c * value ** e[i]
        if not vars:
            return out.get((), 0)
        return TruncatedSeries(vars, prec, out)

    def merge(self, vars_to_merge: Sequence[str], new: str, prec: int) -> "TruncatedSeries":
        """Set several variables equal to one new variable (e.g. ``u = v = t``)."""
        idx = [self._var_index(v) for v in vars_to_merge]
        keep = [i for i in range(self.arity) if i not in idx]
        vars = tuple(self.vars[i] for i in keep) + (new,)
        precs = tuple(self.prec[i] for i in keep) + (prec,)
        out: dict = {}
        for e, c in self.coeffs.items():
            key = tuple(e[i] for i in keep) + (sum(e[i] for i in idx),)
            out[key] = out.get(key, 0) + c
        return TruncatedSeries(vars, precs, out)

    def rename(self, mapping: Mapping[str, str]) -> "TruncatedSeries":
        return TruncatedSeries([mapping.get(v, v) for v in self.vars], self.prec, self.coeffs)

    # --- output ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "prec": list(self.prec),
            "coeffs": {",".join(map(str, e)): c for e, c in sorted(self.coeffs.items())},
        }

    @classmethod
    def from_json(cls, data) -> "TruncatedSeries":
        coeffs = {tuple(int(x) for x in k.split(",")): v for k, v in data["coeffs"].items()}
        return cls(data["vars"], data["prec"], coeffs)

    def pretty(self, max_terms: Optional[int] = None) -> str:
        terms = []
        for e, c in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "".join(
                v + (str(x).translate(_SUPERSCRIPT) if x > 1 else "") for v, x in zip(self.vars, e) if x
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0 + …"
        if max_terms is not None and len(terms) > max_terms:
            terms = terms[:max_terms]
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out + " + …"

    def __str__(self):
        return self.pretty()

    def __repr__(self):
        return f"TruncatedSeries({self.vars}, prec={self.prec}, {self.pretty(12)})"


# --- products of binomial factors -------------------------------------------


def binomial_power(vars, prec, exps: Sequence[int], sign: int, power: int) -> TruncatedSeries:
    """``(1 + sign * m) ** power`` for a monomial ``m`` with the given exponents."""
    exps = tuple(exps)
    if not any(exps):
        raise InvalidInputError("monomial must be non-constant")
    out = {}
    k = 0
    coeff = 1  # binom(power, k) * sign^k
    while True:
        e = tuple(k * x for x in exps)
        if any(a >= p for a, p in zip(e, prec)):
            break
        if coeff == 0:
            break
        out[e] = coeff
        coeff = coeff * (power - k) * sign // (k + 1)
        k += 1
    return TruncatedSeries(vars, prec, out)


@dataclass(frozen=True)
class Generator:
    """A basis vector of a graded space: its weight monomial, parity and count."""

    exps: tuple
    parity: int
    mult: int


def signed_sym_product(generators: Iterable[Generator], vars, prec) -> TruncatedSeries:
    """``prod (1 - w)^-mult`` over even generators times ``prod (1 + w)^mult`` over odd ones."""
    result = TruncatedSeries.one(vars, prec)
    for g in generators:
        if g.mult == 0:
            continue
        if g.parity % 2 == 0:
            result = result * binomial_power(vars, prec, g.exps, -1, -g.mult)
        else:
            result = result * binomial_power(vars, prec, g.exps, 1, g.mult)
    return result


def sym_power_series(V: Mapping, track: str = "x", prec: Optional[Sequence[int]] = None) -> TruncatedSeries:
    """``sum_k P_{Sym^k_gr V} x^k`` for a graded or bigraded dimension table.

    Graded input (keys are ints) gives a series in ``(x, t)``; bigraded
    input (keys are ``(p, q)``) gives one in ``(x, u, v)`` with parity
    ``p + q``.
    """
    if not V:
        raise InvalidInputError("empty dimension table")
    keys = list(V)
    bigraded = isinstance(keys[0], tuple)
    if bigraded:
        vars = (track, "u", "v")
        default = (DEFAULT_ORDER_2D,) * 3
    else:
        vars = (track, "t")
        default = (DEFAULT_ORDER,) * 2
    prec = default if prec is None else tuple(prec)
    gens = []
    for key, dim in V.items():
        if dim < 0:
            raise InvalidInputError("dimensions must be non-negative")
        degs = key if bigraded else (key,)
        if any(d < 0 for d in degs):
            raise InvalidInputError("degrees must be non-negative")
        gens.append(Generator((1,) + tuple(degs), sum(degs) % 2, dim))
    return signed_sym_product(gens, vars, prec)


# --- manifold input ------------------------------------------------------


@dataclass(frozen=True)
class ManifoldData:
    """Rational Betti numbers (and optionally mixed Hodge numbers) of ``X``.

    ``hodge`` maps ``(p, q, i)`` to ``h^{p,q,i}``: the dimension of the
    ``(p, q)`` Hodge piece of ``H^i``.
    """

    N: int
    betti: tuple
    hodge: Optional[dict] = None
    name: str = "X"
    connected: bool = True
    orientable: bool = True

    def __post_init__(self):
        betti = tuple(int(b) for b in self.betti)
        while len(betti) > 1 and betti[-1] == 0:
            betti = betti[:-1]
        object.__setattr__(self, "betti", betti)
        if self.N < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.N}")
        if not betti or betti[0] != 1:
            raise InvalidInputError("X must be connected: b_0 = 1")
        if any(b < 0 for b in betti):
            raise InvalidInputError("Betti numbers must be non-negative")
        if len(betti) > self.N + 1:
            raise InvalidInputError(f"b_i must vanish above the dimension {self.N}")
        if self.hodge is not None:
            hodge = {tuple(k): int(v) for k, v in dict(self.hodge).items() if v}
            sums: dict = {}
            for (p, q, i), h in hodge.items():
                if min(p, q, i) < 0 or h < 0:
                    raise InvalidInputError("Hodge data must be non-negative")
                sums[i] = sums.get(i, 0) + h
            for i in set(sums) | set(range(len(betti))):
                if sums.get(i, 0) != (betti[i] if i < len(betti) else 0):
                    raise InvalidInputError(f"Hodge numbers in degree {i} do not sum to b_{i}")
            object.__setattr__(self, "hodge", hodge)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def betti_dims(self) -> dict:
        return {i: b for i, b in enumerate(self.betti) if b}

    def to_json(self) -> dict:
        out = {"name": self.name, "dim": self.N, "betti": list(self.betti)}
        if self.hodge is not None:
            out["hodge"] = [[p, q, i, h] for (p, q, i), h in sorted(self.hodge.items())]
        return out

    @classmethod
    def from_json(cls, data) -> "ManifoldData":
        hodge = None
        if data.get("hodge") is not None:
            hodge = {(p, q, i): h for p, q, i, h in data["hodge"]}
        return cls(int(data["dim"]), tuple(data["betti"]), hodge, data.get("name", "X"))


def euclidean(N: int) -> ManifoldData:
    return ManifoldData(N, (1,), {(0, 0, 0): 1} if N % 2 == 0 else None, name=f"R^{N}")


COMPLEX_LINE = ManifoldData(2, (1,), {(0, 0, 0): 1}, name="C")
PUNCTURED_LINE = ManifoldData(2, (1, 1), {(0, 0, 0): 1, (1, 1, 1): 1}, name="C^x")
SPHERE2 = ManifoldData(2, (1, 0, 1), {(0, 0, 0): 1, (1, 1, 2): 1}, name="S^2")
TORUS = ManifoldData(2, (1, 2, 1), {(0, 0, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1, (1, 1, 2): 1}, name="T^2")
PUNCTURED_TORUS = ManifoldData(2, (1, 2), {(0, 0, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1}, name="T^2-pt")

NAMED = {
    "C": COMPLEX_LINE,
    "C*": PUNCTURED_LINE,
    "S2": SPHERE2,
    "T2": TORUS,
    "T2-pt": PUNCTURED_TORUS,
}


# --- symmetric products ----------------------------------------------------


def _betti_generators(X: ManifoldData, track: bool, skip_unit: bool = False):
    gens = []
    for i, b in enumerate(X.betti):
        if skip_unit and i == 0:
            b -= 1
        if b:
            exps = ((1,) if track else ()) + (i,)
            gens.append(Generator(exps, i % 2, b))
    return gens


def sym_product_gf(X: ManifoldData, max_d: int, order: Optional[int] = None) -> TruncatedSeries:
    """``sum_d P_{Sym^d X}(t) x^d`` up to ``x^max_d``.

    With ``order`` unset the ``t``-precision is large enough to hold each
    ``P_{Sym^d X}`` exactly.
    """
    tprec = X.N * max_d + 1 if order is None else order
    return signed_sym_product(_betti_generators(X, True), ("x", "t"), (max_d + 1, tprec))


def sym_product_poincare(X: ManifoldData, d, order: Optional[int] = None) -> TruncatedSeries:
    """Poincaré series of ``Sym^d X``; ``d = math.inf`` gives the stable series."""
    if d == math.inf or d is None:
        order = DEFAULT_ORDER if order is None else order
        gens = [Generator(g.exps, g.parity, g.mult) for g in _betti_generators(X, False, skip_unit=True)]
        return signed_sym_product(gens, ("t",), (order,))
    d = int(d)
    if d < 0:
        raise InvalidInputError("d must be non-negative")
    gf = sym_product_gf(X, d, order)
    return gf.coefficient_of("x", d)


def sym_product_poincare_stabilized(X: ManifoldData, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Stable series read off the ``x``-tracked series at ``d = order``."""
    return sym_product_gf(X, order, order).coefficient_of("x", order)


def _hodge_generators(hodge: Mapping, track: bool, shift=(0, 0), degree_shift: int = 0, skip_unit: bool = False):
    gens = []
    for (p, q, i), h in sorted(hodge.items()):
        if skip_unit and (p, q, i) == (0, 0, 0):
            h -= 1
        if not h:
            continue
        exps = ((1,) if track else ()) + (p + shift[0], q + shift[1])
        gens.append(Generator(exps, (i + degree_shift) % 2, h))
    return gens


def sym_product_hd(X: ManifoldData, d, order: Optional[int] = None) -> TruncatedSeries:
    """Hodge–Deligne polynomial of ``Sym^d X`` in ``(u, v)``; ``d = math.inf`` is the stable series."""
    if X.hodge is None:
        raise InvalidInputError(f"{X.name} has no Hodge data")
    if d == math.inf or d is None:
        order = DEFAULT_ORDER_2D if order is None else order
        gens = _hodge_generators(X.hodge, False, skip_unit=True)
        if any(not any(g.exps) for g in gens):
            raise InvalidInputError("stable series needs all non-unit classes of positive weight")
        return signed_sym_product(gens, ("u", "v"), (order, order))
    d = int(d)
    top = max((max(p, q) for p, q, _ in X.hodge), default=0)
    prec = top * d + 1 if order is None else order
    gf = signed_sym_product(_hodge_generators(X.hodge, True), ("x", "u", "v"), (d + 1, prec, prec))
    return gf.coefficient_of("x", d)
