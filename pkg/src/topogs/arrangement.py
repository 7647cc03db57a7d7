"""Dimensions of the subspaces ``R^lambda`` of the indifference arrangement.

A coloring assigns a voter to each pair of alternatives.  ``R^lambda`` is
the subspace of ``W^N`` where, for each pair, the assigned voter is
indifferent between the two alternatives.  Its dimension is computed two
ways: by counting connected components per voter with a union-find, and by
the closed form ``(n-1)N - C(n,2) + sum_k h_1(Gamma_k)`` with the cycle rank
``h_1`` taken from integral homology of each color class graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Sequence

from topogs.complexes import SimplicialComplex
from topogs.homology import betti_numbers
from topogs.pipeline import pairs


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.components -= 1
        return True


def _check(coloring: Sequence[int], n: int, N: int) -> None:
    if len(coloring) != comb(n, 2):
        raise ValueError(f"coloring needs {comb(n, 2)} entries, got {len(coloring)}")
    if any(not 0 <= c < N for c in coloring):
        raise ValueError(f"colors must lie in 0..{N - 1}")


def color_classes(coloring: Sequence[int], n: int, N: int) -> list[list[tuple[int, int]]]:
    classes: list[list[tuple[int, int]]] = [[] for _ in range(N)]
    for (i, j), c in zip(pairs(n), coloring):
        classes[c].append((i, j))
    return classes


def dimension_by_components(coloring: Sequence[int], n: int, N: int) -> int:
    """Sum over voters of (components of that voter's graph - 1)."""
    _check(coloring, n, N)
    total = 0
    for edges in color_classes(coloring, n, N):
        uf = UnionFind(n)
        for i, j in edges:
            uf.union(i, j)
        total += uf.components - 1
    return total


def cycle_rank(n: int, edges: Sequence[tuple[int, int]]) -> int:
    """``h_1`` of the graph on ``n`` vertices, as a 1-dimensional complex."""
    cx = SimplicialComplex(n, [(v,) for v in range(n)] + [tuple(e) for e in edges])
    betti = betti_numbers(cx)
    return betti[1] if len(betti) > 1 else 0


def dimension_by_formula(coloring: Sequence[int], n: int, N: int) -> int:
    _check(coloring, n, N)
    h1 = sum(cycle_rank(n, edges) for edges in color_classes(coloring, n, N))
    return (n - 1) * N - comb(n, 2) + h1


def coloring_dimension(coloring: Sequence[int], n: int, N: int) -> int:
    a = dimension_by_components(coloring, n, N)
    b = dimension_by_formula(coloring, n, N)
    if a != b:
        raise ArithmeticError(f"dimension mismatch for {tuple(coloring)}: {a} vs {b}")
    return a


@dataclass
class ArrangementSurvey:
    n: int
    N: int
    colorings: int
    mismatches: list[tuple[int, ...]]
    max_dimension: int
    maximizers: list[tuple[int, ...]]
    expected_max: int

    @property
    def constant_colorings(self) -> list[tuple[int, ...]]:
        return [(k,) * comb(self.n, 2) for k in range(self.N)]

    @property
    def passed(self) -> bool:
        return (not self.mismatches and self.max_dimension == self.expected_max
                and sorted(self.maximizers) == self.constant_colorings)

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "colorings": self.colorings,
                "mismatches": [list(c) for c in self.mismatches],
                "max_dimension": self.max_dimension, "expected_max": self.expected_max,
                "maximizers": [list(c) for c in self.maximizers], "pass": self.passed}


def arrangement_survey(n: int, N: int, max_colorings: int = 200_000) -> ArrangementSurvey:
    """Both dimension computations for every coloring, plus the maximizers."""
    total = N ** comb(n, 2)
    if total > max_colorings:
        raise ValueError(f"{total} colorings exceed the budget of {max_colorings}")
    mismatches, dims = [], {}
    for col in product(range(N), repeat=comb(n, 2)):
        a = dimension_by_components(col, n, N)
        b = dimension_by_formula(col, n, N)
        if a != b:
            mismatches.append(col)
        dims[col] = a
    best = max(dims.values())
    maximizers = sorted(c for c, d in dims.items() if d == best)
    return ArrangementSurvey(n, N, total, mismatches, best, maximizers, (N - 1) * (n - 1))
