"""
Exact linear algebra on sparse integer/rational matrices.

Matrices are dicts {row: {col: value}}.  Rank uses fraction-free elimination
with gcd normalization, so intermediate entries stay integral and no
floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

SparseRow = dict[int, int]
SparseMatrix = dict[int, SparseRow]


def _normalize_row(row: SparseRow) -> SparseRow:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    lead = row[min(row)]
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _integral(row: Mapping[int, object]) -> SparseRow:
    vals = {c: Fraction(v) for c, v in row.items() if v}
    if not vals:
        return {}
    den = 1
    for v in vals.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return {c: int(v * den) for c, v in vals.items()}


def rank(rows: Iterable[Mapping[int, object]], ncols: int | None = None) -> int:
    """Rank over Q of the matrix whose rows are given as sparse dicts."""
    pivots: dict[int, SparseRow] = {}
    for raw in rows:
        row = _integral(raw)
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _normalize_row(row)
                break
            a, b = p[c], row[c]
            # row <- a*row - b*p, which clears column c
            new = {k: a * v for k, v in row.items()}
            for k, v in p.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _normalize_row(new) if new else new
        if ncols is not None and len(pivots) == ncols:
            break
    return len(pivots)


def transpose(M: SparseMatrix) -> SparseMatrix:
    T: SparseMatrix = {}
    for r, row in M.items():
        for c, v in row.items():
            T.setdefault(c, {})[r] = v
    return T


def matmul(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    """A @ B for sparse dict matrices (A rows index B rows via A's columns)."""
    out: SparseMatrix = {}
    for r, row in A.items():
        acc: dict[int, int] = {}
        for k, a in row.items():
            brow = B.get(k)
            if not brow:
                continue
            for c, b in brow.items():
                acc[c] = acc.get(c, 0) + a * b
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            out[r] = acc
    return out


def is_zero(M: SparseMatrix) -> bool:
    return all(not any(row.values()) for row in M.values())


def abelian_invariants(relations: Iterable[Mapping[int, int]], ngens: int) -> tuple[int, list[int]]:
    """Invariants of Z^ngens / <relations> as (free rank, torsion coefficients).

    Integer row and column operations reduce the relation matrix to diagonal
    form; the nonzero diagonal entries are then made into a divisibility
    chain.  Torsion coefficients equal to 1 are dropped.
    """
    M = [[int(r.get(j, 0)) for j in range(ngens)] for r in relations]
    M = [row for row in M if any(row)]
    diag: list[int] = []
    rows, cols = len(M), ngens
    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = M[i][j]
                if v and (best is None or abs(v) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            p = M[t][t]
            for i in range(t + 1, rows):
                q = M[i][t] // p
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = M[t][j] // p
                if q:
                    for row in M:
                        row[j] -= q * row[t]
                if M[t][j]:
                    done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t, rows) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t, cols) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    M[t], M[i] = M[i], M[t]
                if j != t:
                    for row in M:
                        row[t], row[j] = row[j], row[t]
        diag.append(abs(M[t][t]))
        t += 1
    # divisibility chain via gcd/lcm exchange
    changed = True
    while changed:
        changed = False
        for a in range(len(diag)):
            for b in range(a + 1, len(diag)):
                x, y = diag[a], diag[b]
                g = gcd(x, y)
                if g != x:
                    diag[a], diag[b] = g, x * y // g
                    changed = True
    free = ngens - len(diag)
    return free, [d for d in diag if d != 1]


def format_abelian(free: int, torsion: list[int]) -> str:
    parts = ["Z"] * (1 if free == 1 else 0)
    if free > 1:
        parts = [f"Z^{free}"]
    parts += [f"Z/{d}" for d in torsion]
    return " + ".join(parts) if parts else "0"
