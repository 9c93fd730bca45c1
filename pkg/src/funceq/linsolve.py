"""Exact linear algebra over K: fraction-free (Bareiss) elimination and back-substitution."""

from __future__ import annotations

from dataclasses import dataclass

from .tower import FieldElement, Tower


@dataclass
class Echelon:
    rows: list          # augmented rows after elimination
    pivots: list        # (row, column) pairs
    consistent: bool
    ncols: int


def bareiss(matrix, rhs, tower: Tower) -> Echelon:
    """Row-echelon form of [matrix | rhs].

    Pivot columns are taken in column order; within a column the first
    nonzero row wins. Divisions by the previous pivot are exact.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    zero = tower.zero()
    M = [list(row) + [rhs[i] if rhs is not None else zero] for i, row in enumerate(matrix)]
    prev = tower.one()
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if not M[i][c].is_zero()), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row = M[i]
            if a.is_zero():
                if not (p == prev):
                    q = p / prev
                    for j in range(c + 1, ncols + 1):
                        if not row[j].is_zero():
                            row[j] = row[j] * q
                continue
            for j in range(c + 1, ncols + 1):
                row[j] = (p * row[j] - a * M[r][j]) / prev
            row[c] = zero
        prev = p
        pivots.append((r, c))
        r += 1
    consistent = all(M[i][ncols].is_zero() for i in range(r, nrows))
    return Echelon(M, pivots, consistent, ncols)


def back_substitute(ech: Echelon, free_values: dict, tower: Tower, use_rhs=True):
    x = [None] * ech.ncols
    pivot_cols = {c for _, c in ech.pivots}
    for c in range(ech.ncols):
        if c not in pivot_cols:
            x[c] = free_values.get(c, tower.zero())
    for r, c in reversed(ech.pivots):
        row = ech.rows[r]
        s = row[ech.ncols] if use_rhs else tower.zero()
        for j in range(c + 1, ech.ncols):
            if not row[j].is_zero() and not x[j].is_zero():
                s = s - row[j] * x[j]
        x[c] = s / row[c]
    return x


def solve_linear(matrix, rhs, tower: Tower):
    """Return (particular or None, kernel basis, pivot columns).

    The particular solution sets every free column to zero. Kernel vectors
    set one free column to 1 and the others to 0.
    """
    ncols = len(matrix[0]) if matrix else 0
    ech = bareiss(matrix, rhs, tower)
    particular = back_substitute(ech, {}, tower) if ech.consistent else None
    pivot_cols = [c for _, c in ech.pivots]
    kernel = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        kernel.append(back_substitute(ech, {f: tower.one()}, tower, use_rhs=False))
    return particular, kernel, pivot_cols


def mat_vec(matrix, vec, tower: Tower):
    out = []
    for row in matrix:
        acc = tower.zero()
        for a, x in zip(row, vec):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out
