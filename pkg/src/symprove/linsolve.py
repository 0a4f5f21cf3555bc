"""Fraction-free Gauss-Jordan elimination over QQ[params].

Used as an oracle for the first reduction stage: it never touches the
Groebner code nor the rational-function field, only :class:`Polynomial`
arithmetic over QQ with exact division.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .ring import Polynomial

__all__ = ["LinearSolution", "solve_linear_system", "connected_components"]


@dataclass
class LinearSolution:
    """``x[v] = numerators[v] / determinant`` for every unknown ``v``."""

    numerators: dict[Hashable, Polynomial]
    determinant: Polynomial


def connected_components(rows: Sequence[Mapping[Hashable, Polynomial]]) -> list[list[int]]:
    """Group row indices that share unknowns (union-find)."""
    parent: dict[Hashable, Hashable] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        keys = list(row)
        for k in keys[1:]:
            ra, rb = find(keys[0]), find(k)
            if ra != rb:
                parent[ra] = rb
        if keys:
            find(keys[0])
    groups: dict[Hashable, list[int]] = {}
    for idx, row in enumerate(rows):
        if not row:
            continue
        groups.setdefault(find(next(iter(row))), []).append(idx)
    return list(groups.values())


def _weight(p: Polynomial) -> tuple[int, int, int]:
    return (0 if p.is_constant() else 1, len(p), p.total_degree())


def solve_linear_system(
    rows: Sequence[Mapping[Hashable, Polynomial]],
    rhs: Sequence[Polynomial],
) -> LinearSolution:
    """Solve a square system with a nonzero determinant.

    Pivots are chosen with the fewest terms (constants first).  After step
    ``k`` every entry is a ``k x k`` minor, so each division by the previous
    pivot is exact; the last pivot is the determinant up to sign, and the
    right-hand side holds the Cramer numerators.
    """
    unknowns = sorted({v for row in rows for v in row}, key=str)
    n = len(rows)
    if len(unknowns) != n:
        raise ValueError(f"system is not square: {n} equations, {len(unknowns)} unknowns")
    A = [dict(row) for row in rows]
    b = list(rhs)
    some = b[0]
    zero = Polynomial.zero(some.order, some.field)
    pivoted_rows: dict[int, Hashable] = {}
    free_cols = set(unknowns)
    prev = Polynomial.constant(some.order, some.field, 1)
    for _ in range(n):
        best = None
        for r in range(n):
            if r in pivoted_rows:
                continue
            for c, v in A[r].items():
                if c in free_cols and v:
                    w = _weight(v)
                    if best is None or w < best[0]:
                        best = (w, r, c)
        if best is None:
            raise ZeroDivisionError("singular linear system")
        _, r, c = best
        p = A[r][c]
        prow = A[r]
        for i in range(n):
            if i == r:
                continue
            row = A[i]
            f = row.get(c)
            if not f:
                if p != prev:
                    for k in row:
                        row[k] = (row[k] * p).divexact(prev)
                    b[i] = (b[i] * p).divexact(prev)
                continue
            new = {}
            for k in set(row) | set(prow):
                v = (row.get(k, zero) * p - prow.get(k, zero) * f).divexact(prev)
                if v:
                    new[k] = v
            A[i] = new
            b[i] = (b[i] * p - b[r] * f).divexact(prev)
        pivoted_rows[r] = c
        free_cols.discard(c)
        prev = p
    det = prev
    return LinearSolution({c: b[r] for r, c in pivoted_rows.items()}, det)
