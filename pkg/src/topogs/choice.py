"""Finite social choice: linear orders, profiles, social choice functions.

Alternatives are the integers ``0..n-1``.  A linear order is stored best to
worst; a profile is a tuple of ``N`` orders.  Profiles are enumerated in a
canonical order: each order is ranked by its Lehmer code (lexicographic rank
among permutations) and a profile is the base-``n!`` number whose most
significant digit belongs to voter 0.

The axiom checkers scan the whole profile space and are meant for desk-scale
instances only.  The scans themselves live in :mod:`topogs._backend`.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import permutations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from topogs import _backend


class ChoiceError(ValueError):
    """Invalid order, profile, rule specification or table."""


@dataclass(frozen=True)
class LinearOrder:
    ranking: tuple[int, ...]

    def __post_init__(self):
        ranking = tuple(int(a) for a in self.ranking)
        if sorted(ranking) != list(range(len(ranking))):
            raise ChoiceError(f"not a permutation of 0..n-1: {self.ranking!r}")
        object.__setattr__(self, "ranking", ranking)

    @property
    def n(self) -> int:
        return len(self.ranking)

    @cached_property
    def positions(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for k, a in enumerate(self.ranking):
            pos[a] = k
        return tuple(pos)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ranking)

    def __repr__(self) -> str:
        return f"LinearOrder({list(self.ranking)})"


@dataclass(frozen=True)
class Profile:
    orders: tuple[LinearOrder, ...]

    def __post_init__(self):
        orders = tuple(o if isinstance(o, LinearOrder) else LinearOrder(tuple(o))
                       for o in self.orders)
        if not orders:
            raise ChoiceError("a profile needs at least one voter")
        if len({o.n for o in orders}) != 1:
            raise ChoiceError("orders in a profile must rank the same alternatives")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def of(cls, *rankings: Sequence[int]) -> "Profile":
        return cls(tuple(LinearOrder(tuple(r)) for r in rankings))

    @property
    def n(self) -> int:
        return self.orders[0].n

    @property
    def N(self) -> int:
        return len(self.orders)

    def replace(self, voter: int, order: LinearOrder) -> "Profile":
        orders = list(self.orders)
        orders[voter] = order
        return Profile(tuple(orders))

    def tops(self) -> tuple[int, ...]:
        return tuple(o.ranking[0] for o in self.orders)

    def as_lists(self) -> list[list[int]]:
        return [list(o.ranking) for o in self.orders]


@dataclass(frozen=True)
class ManipulationWitness:
    profile: Profile
    voter: int
    misreport: LinearOrder


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of an exhaustive axiom scan; truthy iff the axiom holds."""

    axiom: str
    holds: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds


# -- order primitives --------------------------------------------------------

def top(o: LinearOrder) -> int:
    return o.ranking[0]


def prefers(o: LinearOrder, a: int, b: int) -> bool:
    """True iff ``a`` is ranked strictly above ``b`` in ``o``."""
    if a == b:
        raise ChoiceError("prefers() needs two distinct alternatives")
    pos = o.positions
    return pos[a] < pos[b]


def is_improvement_for(o: LinearOrder, o2: LinearOrder, a: int) -> bool:
    """True iff every alternative beaten by ``a`` in ``o`` is still beaten in ``o2``."""
    p, p2 = o.positions, o2.positions
    return all(p2[a] < p2[b] for b in range(o.n) if p[a] < p[b])


def push_to_top(o: LinearOrder, a: int) -> LinearOrder:
    return LinearOrder((a,) + tuple(b for b in o.ranking if b != a))


def order_rank(o: LinearOrder) -> int:
    """Lehmer-code rank, equal to the lexicographic rank among permutations."""
    n = o.n
    rank = 0
    rest = list(range(n))
    for k, a in enumerate(o.ranking):
        idx = rest.index(a)
        rank += idx * math.factorial(n - 1 - k)
        rest.pop(idx)
    return rank


def order_of_rank(r: int, n: int) -> LinearOrder:
    if not 0 <= r < math.factorial(n):
        raise ChoiceError(f"order rank {r} out of range for n={n}")
    rest = list(range(n))
    ranking = []
    for k in range(n - 1, -1, -1):
        idx, r = divmod(r, math.factorial(k))
        ranking.append(rest.pop(idx))
    return LinearOrder(tuple(ranking))


# -- profile space ------------------------------------------------------------

class ProfileSpace:
    """Canonical enumeration of ``P^N`` plus the lookup tables the kernels need.

    ``profile_orders[r, l]`` is the order rank held by voter ``l`` in the
    profile of rank ``r``; ``positions[o, a]`` is the position of ``a`` in the
    order of rank ``o``; ``improves[o, o2, a]`` is 1 iff ``o2`` is an
    ``a``-improvement of ``o``.
    """

    def __init__(self, n: int, N: int):
        if n < 1 or N < 1:
            raise ChoiceError(f"need n >= 1 and N >= 1, got n={n}, N={N}")
        self.n = n
        self.N = N
        self.orders = tuple(LinearOrder(p) for p in permutations(range(n)))
        self.n_orders = len(self.orders)
        self.size = self.n_orders ** N

        self.positions = np.array([o.positions for o in self.orders], dtype=np.int32)
        digits = np.arange(self.size, dtype=np.int64)
        cols = []
        for _ in range(N):
            digits, d = np.divmod(digits, self.n_orders)
            cols.append(d)
        self.profile_orders = np.ascontiguousarray(
            np.stack(cols[::-1], axis=1).astype(np.int32))

        pos = self.positions
        # beats[o, a, b]: a above b in order o
        beats = pos[:, :, None] < pos[:, None, :]
        # o2 improves a over o iff beats[o, a] implies beats[o2, a]
        lost = beats[:, None, :, :] & ~beats[None, :, :, :]
        self.improves = np.ascontiguousarray((~lost.any(axis=3)).astype(np.uint8))

    def rank(self, p: Profile) -> int:
        if p.n != self.n or p.N != self.N:
            raise ChoiceError(f"profile shape ({p.n},{p.N}) != ({self.n},{self.N})")
        r = 0
        for o in p.orders:
            r = r * self.n_orders + order_rank(o)
        return r

    def profile(self, r: int) -> Profile:
        if not 0 <= r < self.size:
            raise ChoiceError(f"profile rank {r} out of range [0, {self.size})")
        return Profile(tuple(self.orders[o] for o in self.profile_orders[r]))

    def __iter__(self) -> Iterator[Profile]:
        return (self.profile(r) for r in range(self.size))

    def tops(self) -> np.ndarray:
        """``tops[r, l]`` = top alternative of voter ``l`` at profile ``r``."""
        first = np.array([o.ranking[0] for o in self.orders], dtype=np.int32)
        return first[self.profile_orders]


@lru_cache(maxsize=16)
def profile_space(n: int, N: int) -> ProfileSpace:
    return ProfileSpace(n, N)


def rank_of_profile(p: Profile) -> int:
    return profile_space(p.n, p.N).rank(p)


def profile_of_rank(r: int, n: int, N: int) -> Profile:
    return profile_space(n, N).profile(r)


# -- social choice functions -------------------------------------------------

RULE_KINDS = ("table", "dictatorship", "constant", "plurality_lex", "borda_lex")


@dataclass(frozen=True, eq=False)
class SocialChoiceFunction:
    """A total map from profiles to alternatives.

    Named rules carry ``kind`` and ``arg``; ``kind == "table"`` carries the
    dense table indexed by profile rank.  :attr:`values` gives the dense
    table for every kind.
    """

    n: int
    N: int
    kind: str
    arg: int | None = None
    table: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ChoiceError(f"unknown rule kind {self.kind!r}")
        if self.kind == "table":
            if self.table is None:
                raise ChoiceError("table rule without a table")
            table = tuple(int(x) for x in self.table)
            size = math.factorial(self.n) ** self.N
            if len(table) != size:
                raise ChoiceError(f"table has {len(table)} entries, expected {size}")
            if any(not 0 <= x < self.n for x in table):
                raise ChoiceError("table entry outside 0..n-1")
            object.__setattr__(self, "table", table)
        elif self.table is not None:
            raise ChoiceError("only table rules carry a table")
        if self.kind == "dictatorship" and not (self.arg is not None and 0 <= self.arg < self.N):
            raise ChoiceError(f"dictator index {self.arg} outside 0..{self.N - 1}")
        if self.kind == "constant" and not (self.arg is not None and 0 <= self.arg < self.n):
            raise ChoiceError(f"constant alternative {self.arg} outside 0..{self.n - 1}")

    @classmethod
    def dictatorship(cls, l: int, n: int, N: int) -> "SocialChoiceFunction":
        return cls(n, N, "dictatorship", l)

    @classmethod
    def constant(cls, a: int, n: int, N: int) -> "SocialChoiceFunction":
        return cls(n, N, "constant", a)

    @classmethod
    def plurality_lex(cls, n: int, N: int) -> "SocialChoiceFunction":
        return cls(n, N, "plurality_lex")

    @classmethod
    def borda_lex(cls, n: int, N: int) -> "SocialChoiceFunction":
        return cls(n, N, "borda_lex")

    @classmethod
    def from_table(cls, table: Sequence[int], n: int, N: int) -> "SocialChoiceFunction":
        return cls(n, N, "table", None, tuple(table))

    @classmethod
    def from_rule(cls, spec: str, n: int, N: int) -> "SocialChoiceFunction":
        """Parse ``NAME[:ARG]``, e.g. ``dictatorship:1`` or ``plurality_lex``."""
        name, _, arg = spec.partition(":")
        if name not in RULE_KINDS or name == "table":
            raise ChoiceError(f"unknown rule {name!r}")
        if name in ("dictatorship", "constant"):
            if not arg.lstrip("-").isdigit():
                raise ChoiceError(f"rule {name} needs an integer argument")
            return cls(n, N, name, int(arg))
        if arg:
            raise ChoiceError(f"rule {name} takes no argument")
        return cls(n, N, name)

    @property
    def name(self) -> str:
        return self.kind if self.arg is None else f"{self.kind}:{self.arg}"

    @property
    def space(self) -> ProfileSpace:
        return profile_space(self.n, self.N)

    @cached_property
    def values(self) -> np.ndarray:
        if self.kind == "table":
            out = np.array(self.table, dtype=np.int32)
        else:
            sp = self.space
            out = np.array([self._named(sp.profile(r)) for r in range(sp.size)], dtype=np.int32)
        out.setflags(write=False)
        return out

    def _named(self, p: Profile) -> int:
        n = self.n
        if self.kind == "dictatorship":
            return p.orders[self.arg].ranking[0]
        if self.kind == "constant":
            return self.arg
        scores = [0] * n
        for o in p.orders:
            if self.kind == "plurality_lex":
                scores[o.ranking[0]] += 1
            else:
                for k, a in enumerate(o.ranking):
                    scores[a] += n - 1 - k
        best = max(scores)
        return scores.index(best)  # ties -> smallest index

    def __call__(self, p: Profile) -> int:
        if self.kind == "table":
            return self.table[self.space.rank(p)]
        return self._named(p)

    def to_table(self) -> "SocialChoiceFunction":
        return SocialChoiceFunction.from_table(self.values.tolist(), self.n, self.N)


def random_table(n: int, N: int, seed: int) -> SocialChoiceFunction:
    rng = random.Random(seed)
    size = math.factorial(n) ** N
    return SocialChoiceFunction.from_table([rng.randrange(n) for _ in range(size)], n, N)


# -- axiom checkers -------------------------------------------------------------

def check_monotonic(f: SocialChoiceFunction) -> AxiomCheck:
    """Witness, if any, is ``(p, p2)`` with ``p2`` a coordinatewise
    ``f(p)``-improvement of ``p`` and ``f(p2) != f(p)``; smallest by rank."""
    sp = f.space
    p, q = _backend.kernels.monotonic_violation(f.values, sp.profile_orders, sp.improves)
    if p < 0:
        return AxiomCheck("monotonic", True)
    return AxiomCheck("monotonic", False, (sp.profile(p), sp.profile(q)))


def check_unanimous(f: SocialChoiceFunction) -> AxiomCheck:
    sp = f.space
    tops = sp.tops()
    values = f.values
    for r in range(sp.size):
        first = tops[r, 0]
        if (tops[r] == first).all() and values[r] != first:
            return AxiomCheck("unanimous", False, sp.profile(r))
    return AxiomCheck("unanimous", True)


def check_strategy_proof(f: SocialChoiceFunction) -> AxiomCheck:
    sp = f.space
    p, voter, mis = _backend.kernels.manipulation_witness(
        f.values, sp.profile_orders, sp.positions)
    if p < 0:
        return AxiomCheck("strategy_proof", True)
    w = ManipulationWitness(sp.profile(p), int(voter), sp.orders[mis])
    return AxiomCheck("strategy_proof", False, w)


def check_surjective(f: SocialChoiceFunction) -> AxiomCheck:
    missing = sorted(set(range(f.n)) - set(np.unique(f.values).tolist()))
    return AxiomCheck("surjective", not missing, missing or None)


def dictator_of(f: SocialChoiceFunction) -> int | None:
    tops = f.space.tops()
    for l in range(f.N):
        if np.array_equal(tops[:, l], f.values):
            return l
    return None


def is_valid_manipulation(f: SocialChoiceFunction, w: ManipulationWitness) -> bool:
    truth = w.profile.orders[w.voter]
    honest = f(w.profile)
    lie = f(w.profile.replace(w.voter, w.misreport))
    return lie != honest and prefers(truth, lie, honest)


def is_valid_monotonicity_violation(f: SocialChoiceFunction, p: Profile, p2: Profile) -> bool:
    a = f(p)
    improved = all(is_improvement_for(o, o2, a) for o, o2 in zip(p.orders, p2.orders))
    return improved and f(p2) != a


@dataclass(frozen=True)
class AxiomSummary:
    monotonic: AxiomCheck
    unanimous: AxiomCheck
    surjective: AxiomCheck
    strategy_proof: AxiomCheck

    @property
    def monotonic_and_unanimous(self) -> bool:
        return bool(self.monotonic) and bool(self.unanimous)

    @property
    def surjective_and_strategy_proof(self) -> bool:
        return bool(self.surjective) and bool(self.strategy_proof)

    @property
    def equivalence_holds(self) -> bool:
        return self.monotonic_and_unanimous == self.surjective_and_strategy_proof


def axiom_summary(f: SocialChoiceFunction) -> AxiomSummary:
    return AxiomSummary(check_monotonic(f), check_unanimous(f),
                        check_surjective(f), check_strategy_proof(f))


def check_axiom_equivalence(f: SocialChoiceFunction) -> bool:
    """(monotonic and unanimous) == (surjective and strategy-proof)."""
    return axiom_summary(f).equivalence_holds


# -- table files ------------------------------------------------------------------

def table_to_json(f: SocialChoiceFunction) -> dict:
    sp = f.space
    values = f.values
    return {
        "n": f.n,
        "N": f.N,
        "entries": [{"profile": sp.profile(r).as_lists(), "choice": int(values[r])}
                    for r in range(sp.size)],
    }


def table_from_json(doc: dict) -> SocialChoiceFunction:
    try:
        n, N, entries = int(doc["n"]), int(doc["N"]), doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ChoiceError(f"malformed table document: {exc}") from None
    if n < 1 or N < 1:
        raise ChoiceError(f"need n >= 1 and N >= 1, got n={n}, N={N}")
    sp = profile_space(n, N)
    table: list[int | None] = [None] * sp.size
    for k, entry in enumerate(entries):
        try:
            p = Profile.of(*entry["profile"])
            choice = entry["choice"]
        except (KeyError, TypeError) as exc:
            raise ChoiceError(f"entry {k}: malformed ({exc})") from None
        if not isinstance(choice, int) or isinstance(choice, bool) or not 0 <= choice < n:
            raise ChoiceError(f"entry {k}: choice {choice!r} outside 0..{n - 1}")
        r = sp.rank(p)
        if table[r] is not None:
            raise ChoiceError(f"entry {k}: duplicate profile {p.as_lists()}")
        table[r] = choice
    missing = table.count(None)
    if missing:
        raise ChoiceError(f"table is not total: {missing} of {sp.size} profiles missing")
    return SocialChoiceFunction.from_table(table, n, N)


def load_table(path: str | Path) -> SocialChoiceFunction:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChoiceError(f"{path}: invalid JSON ({exc})") from None
    return table_from_json(doc)


def save_table(f: SocialChoiceFunction, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(table_to_json(f), fh)
