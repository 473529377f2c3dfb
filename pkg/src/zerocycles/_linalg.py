"""Exact sparse linear algebra for boundary matrices.

Matrices are lists of sparse rows ``{column: value}``.  Values stay Python
ints as long as possible and become Fractions only when a non-unit pivot
forces a division.
"""

from __future__ import annotations

from fractions import Fraction


def _copy_rows(rows):
    return [dict(r) for r in rows if r]


def _column_index(rows):
    cols: dict = {}
    for i, row in enumerate(rows):
        for c in row:
            cols.setdefault(c, set()).add(i)
    return cols


def _pivot_out(rows, cols, p, c):
    """Clear column ``c`` from every row but ``p``, then drop row ``p``."""
    prow = rows[p]
    pv = prow[c]
    for i in list(cols[c]):
        if i == p:
            continue
        row = rows[i]
        v = row[c]
        if pv == 1:
            f = v
        elif pv == -1:
            f = -v
        else:
            f = Fraction(v) / pv
            if f.denominator == 1:
                f = f.numerator
        for cc, w in prow.items():
            new = row.get(cc, 0) - f * w
            if new:
                if isinstance(new, Fraction) and new.denominator == 1:
                    new = new.numerator
                if cc not in row:
                    cols.setdefault(cc, set()).add(i)
                row[cc] = new
            else:
                if cc in row:
                    del row[cc]
                    cols[cc].discard(i)
    for cc in prow:
        cols[cc].discard(p)
    rows[p] = None


def _sweep(rows, cols, unit_only):
    """One pass over columns by increasing length; returns number of pivots."""
    done = 0
    for c in sorted(cols, key=lambda c: len(cols[c])):
        holders = cols.get(c)
        if not holders:
            continue
        best = None
        for i in holders:
            v = rows[i][c]
            unit = v == 1 or v == -1
            if unit_only and not unit:
                continue
            key = (not unit, len(rows[i]))
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            continue
        _pivot_out(rows, cols, best[1], c)
        done += 1
    return done


def rank_q(rows) -> int:
    """Rank over the rationals."""
    rows = _copy_rows(rows)
    cols = _column_index(rows)
    rank = 0
    while True:
        got = _sweep(rows, cols, unit_only=False)
        if not got:
            return rank
        rank += got


def _dense_snf_divisors(mat: list[list[int]]) -> list[int]:
    """Nonzero elementary divisors of a small dense integer matrix."""
    a = [list(r) for r in mat]
    divisors = []
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    t = 0
    while t < min(nrows, ncols):
        # smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, nrows) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, ncols) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors


def smith_divisors(rows) -> list[int]:
    """Nonzero elementary divisors over the integers.

    Unit pivots are eliminated sparsely (each is a unimodular step with
    divisor 1); any stuck remainder goes through a dense Smith reduction.
    """
    rows = _copy_rows(rows)
    cols = _column_index(rows)
    ones = 0
    while True:
        got = _sweep(rows, cols, unit_only=True)
        if not got:
            break
        ones += got
    rest = [r for r in rows if r]
    if not rest:
        return [1] * ones
    used = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][pos[c]] = v
    return [1] * ones + sorted(_dense_snf_divisors(dense))


class Echelon:
    """Row space in echelon form over the rationals, pivot = smallest column.

    Each stored vector carries a tag; :meth:`reduce` expresses a vector in
    terms of the stored ones.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> (vector, tag)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        """Return ``(remainder, coefficients by tag)``."""
        v = dict(vec)
        rem: dict = {}
        coeffs: dict = {}
        while v:
            c = min(v)
            if c not in self.rows:
                rem[c] = v.pop(c)
                continue
            row, tag = self.rows[c]
            f = Fraction(v[c]) / row[c]
            if f.denominator == 1:
                f = f.numerator
            coeffs[tag] = coeffs.get(tag, 0) + f
            for cc, w in row.items():
                new = v.get(cc, 0) - f * w
                if new:
                    v[cc] = new
                elif cc in v:
                    del v[cc]
        return rem, coeffs

    def add(self, vec, tag) -> bool:
        """Insert ``vec`` if independent; returns whether it was new."""
        rem, _ = self.reduce(vec)
        if not rem:
            return False
        self.rows[min(rem)] = (rem, tag)
        return True


def kernel_basis(rows, ncols) -> list[dict]:
    """Basis of ``{x : x M = 0}`` where ``M`` has the given sparse rows.

    Rows of the boundary matrix are indexed by simplices, so this is the
    cycle space.
    """
    # Gaussian elimination tracking row combinations
    work = []
    for i, r in enumerate(rows):
        work.append((dict(r), {i: 1}))
    pivots: dict = {}  # column -> (row, combo)
    out = []
    for row, combo in work:
        while row:
            c = min(row)
            if c not in pivots:
                break
            prow, pcombo = pivots[c]
            f = Fraction(row[c]) / prow[c]
            if f.denominator == 1:
                f = f.numerator
            for cc, w in prow.items():
                new = row.get(cc, 0) - f * w
                if new:
                    row[cc] = new
                elif cc in row:
                    del row[cc]
            for k, w in pcombo.items():
                new = combo.get(k, 0) - f * w
                if new:
                    combo[k] = new
                elif k in combo:
                    del combo[k]
        if row:
            pivots[min(row)] = (row, combo)
        else:
            out.append(combo)
    return out
