"""Exhaustive search for monotonic unanimous social choice functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topogs import _backend
from topogs.choice import SocialChoiceFunction, profile_space


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class EnumerationResult:
    n: int
    N: int
    functions: list[SocialChoiceFunction]
    nodes: int


def unanimity_preassignment(n: int, N: int) -> np.ndarray:
    """``forced[r]`` is the common top at unanimous profiles, -1 elsewhere."""
    tops = profile_space(n, N).tops()
    unanimous = (tops == tops[:, :1]).all(axis=1)
    return np.where(unanimous, tops[:, 0], -1).astype(np.int32)


def enumerate_monotonic_unanimous(n: int, N: int, max_nodes: int = 50_000_000) -> EnumerationResult:
    """All monotonic unanimous tables, by backtracking in profile-rank order.

    Raises :class:`BudgetExceeded` (discarding partial results) when the
    search visits more than ``max_nodes`` nodes.
    """
    sp = profile_space(n, N)
    k = _backend.kernels
    lists = k.improvement_lists(sp.profile_orders, sp.improves, n)
    sols, nodes, complete = k.monotone_completions(
        n, unanimity_preassignment(n, N), *lists, max_nodes)
    if not complete:
        raise BudgetExceeded(f"search at (n={n}, N={N}) exceeded {max_nodes} nodes")
    fns = [SocialChoiceFunction.from_table(s.tolist(), n, N) for s in sols]
    return EnumerationResult(n, N, fns, int(nodes))
