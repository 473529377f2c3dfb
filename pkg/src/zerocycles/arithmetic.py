"""Relatively n-prime tuples over Z and over F_q[t], against zeta values.

Over Z the count of m-tuples in ``[1, B]^m`` whose gcd is n-th-power-free
is ``sum_k mu(k) floor(B / k^n)^m``, which needs the Möbius function only
up to ``B^(1/n)``.  Over ``F_q[t]`` everything is counted by brute force
over monic tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InvalidInputError, ResourceLimitError

#: largest number of monic tuples nprime_ratio_fq will enumerate
FQ_BUDGET = 2_000_000
#: largest bound accepted by nprime_density_integers
INTEGER_BOUND_LIMIT = 10**8


def mobius_table(limit: int) -> list[int]:
    """``mu(0..limit)`` by a linear sieve (``mu[0]`` is unused)."""
    mu = [1] * (limit + 1)
    if limit >= 0:
        mu[0] = 0
    is_comp = bytearray(limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def _iroot(x: int, n: int) -> int:
    r = int(round(x ** (1.0 / n)))
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def nprime_count_integers(m: int, n: int, bound: int) -> int:
    """Number of m-tuples in ``[1, bound]^m`` with no ``b > 1`` such that ``b^n`` divides all entries."""
    if m < 1 or n < 1:
        raise InvalidInputError("m and n must be positive")
    if bound < 1:
        raise InvalidInputError("bound must be at least 1")
    if bound > INTEGER_BOUND_LIMIT:
        raise ResourceLimitError("integer bound", bound, INTEGER_BOUND_LIMIT)
    top = _iroot(bound, n)
    mu = mobius_table(top)
    total = 0
    for k in range(1, top + 1):
        if mu[k]:
            total += mu[k] * (bound // k**n) ** m
    return total


def nprime_density_integers(m: int, n: int, bound: int) -> Fraction:
    return Fraction(nprime_count_integers(m, n, bound), bound**m)


# --- zeta values -------------------------------------------------------------


@dataclass(frozen=True)
class Enclosure:
    lo: Decimal
    hi: Decimal

    def __contains__(self, x) -> bool:
        return self.lo <= Decimal(x) <= self.hi

    @property
    def width(self) -> Decimal:
        return self.hi - self.lo

    def distance(self, x) -> Decimal:
        """Distance from ``x`` to the nearest point of the enclosure."""
        x = Decimal(x)
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return Decimal(0)

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def zeta_inverse(s: int, mode: str = "int", q: int | None = None, truncation: int = 10_000, digits: int = 40):
    """``zeta(s)^-1`` for Z (certified enclosure) or for ``F_q[t]`` (exact ``1 - q^(1-s)``).

    For Z the partial sum ``S_K`` of ``k^-s`` is bracketed by the integral
    tail bounds ``(K+1)^(1-s)/(s-1) <= zeta(s) - S_K <= K^(1-s)/(s-1)``,
    with outward rounding throughout.
    """
    if s < 2:
        raise InvalidInputError("s must be an integer >= 2")
    if mode == "q":
        if q is None or not is_prime(q):
            raise InvalidInputError("q must be a prime")
        return 1 - Fraction(1, q ** (s - 1))
    if mode != "int":
        raise InvalidInputError(f"unknown mode {mode!r}")
    K = truncation
    if K < 1:
        raise InvalidInputError("truncation must be positive")
    down = Context(prec=digits, rounding=ROUND_FLOOR)
    up = Context(prec=digits, rounding=ROUND_CEILING)
    lo = Decimal(0)
    hi = Decimal(0)
    for k in range(1, K + 1):
        kk = Decimal(k**s)
        lo = down.add(lo, down.divide(1, kk))
        hi = up.add(hi, up.divide(1, kk))
    lo = down.add(lo, down.divide(1, Decimal((s - 1) * (K + 1) ** (s - 1))))
    hi = up.add(hi, up.divide(1, Decimal((s - 1) * K ** (s - 1))))
    return Enclosure(down.divide(1, hi), up.divide(1, lo))


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


# --- polynomials over F_q ------------------------------------------------------


class FqPoly:
    """Polynomial over the prime field ``F_q``; coefficients stored low to high."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs: Sequence[int]):
        c = [x % q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.q = q
        self.coeffs = tuple(c)

    @classmethod
    def monic(cls, q: int, lower: Sequence[int]) -> "FqPoly":
        return cls(q, list(lower) + [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __eq__(self, other):
        return isinstance(other, FqPoly) and (self.q, self.coeffs) == (other.q, other.coeffs)

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __repr__(self):
        return f"FqPoly({self.q}, {list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            coef = str(c) if (c != 1 or k == 0) else ""
            terms.append(coef + mono)
        return " + ".join(terms)

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        if self.is_zero() or other.is_zero():
            return FqPoly(self.q, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.q, out)

    def divmod(self, other: "FqPoly") -> tuple["FqPoly", "FqPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        rem = list(self.coeffs)
        dq = other.degree
        inv = pow(other.coeffs[-1], q - 2, q)
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv % q
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] = (rem[k - dq + j] - c * b) % q
        return FqPoly(q, quot), FqPoly(q, rem[:dq])

    def __floordiv__(self, other):
        quot, rem = self.divmod(other)
        if not rem.is_zero():
            raise ValueError("inexact polynomial division")
        return quot

    def make_monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        inv = pow(self.coeffs[-1], self.q - 2, self.q)
        return FqPoly(self.q, [c * inv for c in self.coeffs])

    def derivative(self) -> "FqPoly":
        return FqPoly(self.q, [k * c for k, c in enumerate(self.coeffs)][1:])

    def pth_root(self) -> "FqPoly":
        """Inverse of Frobenius for a polynomial in ``t^q`` (coefficients are fixed by it)."""
        q = self.q
        if any(c for k, c in enumerate(self.coeffs) if k % q):
            raise ValueError("not a q-th power")
        return FqPoly(q, self.coeffs[::q])


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.make_monic()


def squarefree_decomposition(f: FqPoly) -> dict[int, FqPoly]:
    """``{i: P_i}`` with ``f = prod P_i^i`` (f monic), P_i squarefree and pairwise coprime."""
    if f.is_zero():
        raise InvalidInputError("zero polynomial has no squarefree decomposition")
    q = f.q
    out: dict[int, FqPoly] = {}
    c = poly_gcd(f, f.derivative())
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out[i] = z
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        for mult, fac in squarefree_decomposition(c.pth_root()).items():
            key = mult * q
            out[key] = out[key] * fac if key in out else fac
    return out


def is_n_power_free(f: FqPoly, n: int) -> bool:
    """True iff no non-constant ``b`` has ``b^n`` dividing ``f``."""
    if n == 1:
        return f.degree <= 0
    return all(i < n for i in squarefree_decomposition(f.make_monic()))


def monic_polynomials(q: int, d: int):
    for lower in itertools.product(range(q), repeat=d):
        yield FqPoly.monic(q, lower)


def nprime_count_fq(q: int, n: int, degrees: Sequence[int], budget: int | None = None) -> tuple[int, int]:
    """``(relatively n-prime tuples, all tuples)`` of monic polynomials with the given degrees."""
    if not is_prime(q):
        raise InvalidInputError(f"q must be prime, got {q}")
    if n < 1 or not degrees or any(d < 0 for d in degrees):
        raise InvalidInputError("need n >= 1 and non-negative degrees")
    budget = FQ_BUDGET if budget is None else budget
    total = q ** sum(degrees)
    if total > budget:
        raise ResourceLimitError("F_q enumeration budget", total, budget)

    @lru_cache(maxsize=None)
    def free(g: FqPoly) -> bool:
        return is_n_power_free(g, n)

    lists = [list(monic_polynomials(q, d)) for d in degrees]
    good = 0
    for combo in itertools.product(*lists):
        g = combo[0]
        for f in combo[1:]:
            if g.degree <= 0:
                break
            g = poly_gcd(g, f)
        if g.degree <= 0 or free(g):
            good += 1
    return good, total


def nprime_ratio_fq(q: int, m: int, n: int, degrees: Sequence[int], budget: int | None = None) -> Fraction:
    if len(degrees) != m:
        raise InvalidInputError(f"expected {m} degrees, got {len(degrees)}")
    good, total = nprime_count_fq(q, n, degrees, budget)
    return Fraction(good, total)


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
