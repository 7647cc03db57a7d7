"""Covers of orders, profiles and outcomes; their nerves; the simplicial map
induced by a monotonic unanimous social choice function; and the homology
pairings that read dictators off that map.

Vertex conventions
------------------
A vertex of the profile nerve is ``(i, j, sigma)`` with ``i < j`` and
``sigma`` a tuple of ``N`` signs in ``{+1, -1}``; ``sigma[l] == +1`` means
voter ``l`` ranks ``a_i`` above ``a_j``.  Vertices are numbered
lexicographically by ``(i, j, sigma)`` with ``+1`` ordered before ``-1``.
The order nerve is the case ``N = 1``.  Vertex ``i`` of the outcome nerve is
the set of all alternatives except ``a_i``.

Orientations of the n-cycle on alternatives are tuples of ``n`` booleans, one
per edge ``(0,1), (1,2), ..., (n-2,n-1), (0,n-1)``; ``True`` is the sign
``+1`` on that pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from topogs.choice import (
    LinearOrder,
    ManipulationWitness,
    Profile,
    SocialChoiceFunction,
    axiom_summary,
    check_monotonic,
    check_unanimous,
    dictator_of,
    profile_space,
)
from topogs.complexes import (
    Chain,
    Cover,
    SimplicialComplex,
    SimplicialMap,
    boundary_chain,
    nerve,
)
from topogs.homology import (
    HomologyError,
    coefficients_in_homology,
    homology,
)
from topogs.intmat import IntegerMatrix

PLUS, MINUS = 1, -1


class PipelineError(RuntimeError):
    """A computed object contradicts what the constructions guarantee."""


class PreconditionError(ValueError):
    pass


# -- indexing -------------------------------------------------------------------

@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def sign_vectors(N: int) -> tuple[tuple[int, ...], ...]:
    return tuple(product((PLUS, MINUS), repeat=N))


class VertexIndex:
    """Canonical numbering of the vertices ``(i, j, sigma)``."""

    def __init__(self, n: int, N: int):
        self.n, self.N = n, N
        self.vertices = tuple((i, j, s) for (i, j) in pairs(n) for s in sign_vectors(N))
        self.index = {v: k for k, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def __call__(self, i: int, j: int, sigma: Sequence[int]) -> int:
        return self.index[(i, j, tuple(sigma))]


@lru_cache(maxsize=None)
def vertex_index(n: int, N: int) -> VertexIndex:
    return VertexIndex(n, N)


def _check_instance(n: int, N: int = 1) -> None:
    if n < 2 or N < 1:
        raise PreconditionError(f"need n >= 2 and N >= 1, got n={n}, N={N}")


# -- covers and nerves --------------------------------------------------------------

def _signature(n, N, orders_positions) -> tuple[int, ...]:
    vx = vertex_index(n, N)
    out = []
    for i, j in pairs(n):
        sigma = tuple(PLUS if pos[i] < pos[j] else MINUS for pos in orders_positions)
        out.append(vx.index[(i, j, sigma)])
    return tuple(out)


def cover_profiles(n: int, N: int) -> Cover:
    """Sets ``U_ij^sigma`` over the ``(n!)^N`` profiles in rank order."""
    _check_instance(n, N)
    sp = profile_space(n, N)
    vx = vertex_index(n, N)
    members: list[list[int]] = [[] for _ in range(len(vx))]
    pos = sp.positions.tolist()
    for r, row in enumerate(sp.profile_orders.tolist()):
        for v in _signature(n, N, [pos[o] for o in row]):
            members[v].append(r)
    return Cover(sp.size, tuple(frozenset(m) for m in members), vx.vertices)


def cover_P(n: int) -> Cover:
    """Sets ``U_ij^+`` and ``U_ij^-`` over the ``n!`` orders."""
    return cover_profiles(n, 1)


def cover_A(n: int) -> Cover:
    """``U_i = A - {a_i}`` for ``i < n``."""
    _check_instance(n)
    return Cover(n, tuple(frozenset(range(n)) - {i} for i in range(n)))


@lru_cache(maxsize=None)
def nerve_NA(n: int) -> SimplicialComplex:
    return nerve(cover_A(n))


@lru_cache(maxsize=None)
def nerve_NProfiles(n: int, N: int) -> SimplicialComplex:
    return nerve(cover_profiles(n, N))


def nerve_NP(n: int) -> SimplicialComplex:
    return nerve_NProfiles(n, 1)


def _acyclic(n: int, arcs: list[tuple[int, int]]) -> bool:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == n


def cones_intersect(n: int, N: int, face: Sequence[int]) -> bool:
    """Whether the open cones ``K_ij^sigma`` indexed by ``face`` meet.

    The cones are products over voters of open half-spaces ``x_i > x_j`` (or
    ``<``), so they meet iff each voter's system of strict inequalities is
    feasible, i.e. its digraph of demanded comparisons has no directed cycle.
    """
    vx = vertex_index(n, N)
    for l in range(N):
        arcs = []
        for v in face:
            i, j, sigma = vx.vertices[v]
            arcs.append((i, j) if sigma[l] == PLUS else (j, i))
        if not _acyclic(n, arcs):
            return False
    return True


@lru_cache(maxsize=None)
def nerve_NM(n: int, N: int) -> SimplicialComplex:
    """Nerve of the cone cover, built from the acyclicity criterion alone."""
    _check_instance(n, N)
    nv = len(vertex_index(n, N))
    faces = []
    frontier = [(v,) for v in range(nv) if cones_intersect(n, N, (v,))]
    while frontier:
        faces.extend(frontier)
        frontier = [f + (v,) for f in frontier for v in range(f[-1] + 1, nv)
                    if cones_intersect(n, N, f + (v,))]
    return SimplicialComplex(nv, faces)


# -- orientations, delta and h ------------------------------------------------------

def cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(k, k + 1) for k in range(n - 1)] + [(0, n - 1)]


@dataclass(frozen=True)
class Orientation:
    arrows: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(bool(a) for a in self.arrows))
        if len(self.arrows) < 3:
            raise PreconditionError("orientations need n >= 3")

    @property
    def n(self) -> int:
        return len(self.arrows)

    def signs(self) -> tuple[int, ...]:
        return tuple(PLUS if a else MINUS for a in self.arrows)

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs ``winner -> loser`` of the oriented cycle."""
        return [(i, j) if a else (j, i) for (i, j), a in zip(cycle_edges(self.n), self.arrows)]

    def is_cyclic(self) -> bool:
        return not _acyclic(self.n, self.arcs())

    def flip(self, e: int) -> "Orientation":
        arrows = list(self.arrows)
        arrows[e] = not arrows[e]
        return Orientation(tuple(arrows))


def all_orientations(n: int) -> list[Orientation]:
    return [Orientation(a) for a in product((True, False), repeat=n)]


def classify_orientation_cycle(g: Orientation) -> str:
    return "cyclic" if g.is_cyclic() else "acyclic"


def hat_g(n: int) -> Orientation:
    """The fixed oriented cycle: signs ``+, ..., +, -``."""
    return Orientation((True,) * (n - 1) + (False,))


def acyclic_g0(n: int) -> Orientation:
    """All-plus orientation, the order ``a_0 > a_1 > ... > a_{n-1}``."""
    return Orientation((True,) * n)


def _tuple_n_N(gs: Sequence[Orientation]) -> tuple[int, int]:
    if not gs:
        raise PreconditionError("need at least one orientation")
    n = gs[0].n
    if any(g.n != n for g in gs):
        raise PreconditionError("orientations of different cycle lengths")
    return n, len(gs)


def delta_simplex(gs: Sequence[Orientation]) -> tuple[int, ...]:
    """Vertices of the n-simplex picked out by a tuple of orientations."""
    n, N = _tuple_n_N(gs)
    vx = vertex_index(n, N)
    signs = [g.signs() for g in gs]
    verts = [vx(i, j, tuple(s[e] for s in signs)) for e, (i, j) in enumerate(cycle_edges(n))]
    return tuple(sorted(verts))


def h_chain(gs: Sequence[Orientation]) -> Chain:
    """Boundary of ``delta_simplex(gs)``, a degree-(n-2) cycle."""
    return boundary_chain(delta_simplex(gs))


def generator_test(n: int) -> list[dict]:
    """Class of ``h(g)`` in ``H_{n-2}`` of the order nerve for every orientation."""
    NP = nerve_NP(n)
    desc = homology(NP, n - 2)
    if desc.betti != 1 or desc.torsion:
        raise PipelineError(f"H_{n - 2} of the order nerve is not Z: {desc.summary()}")
    rows = []
    for g in all_orientations(n):
        (coeff,) = coefficients_in_homology(NP, n - 2, h_chain([g]))
        rows.append({"arrows": list(g.arrows), "kind": classify_orientation_cycle(g),
                     "coefficient": coeff})
    return rows


def standard_tuple(l: int, n: int, N: int) -> list[Orientation]:
    return [hat_g(n) if k == l else acyclic_g0(n) for k in range(N)]


def standard_basis(n: int, N: int) -> list[Chain]:
    """The cycles ``h_l``: the oriented cycle in slot ``l``, all-plus elsewhere."""
    return [h_chain(standard_tuple(l, n, N)) for l in range(N)]


def _free_part(cx: SimplicialComplex, k: int) -> None:
    desc = homology(cx, k)
    if desc.torsion:
        raise PipelineError(f"torsion {desc.torsion} in degree {k}")


def basis_coefficient_matrix(n: int, N: int) -> IntegerMatrix:
    """Column ``l``: coordinates of ``h_l`` in the computed homology basis."""
    cx = nerve_NProfiles(n, N)
    _free_part(cx, n - 2)
    cols = [coefficients_in_homology(cx, n - 2, h) for h in standard_basis(n, N)]
    betti = homology(cx, n - 2).betti
    return IntegerMatrix(betti, N, [{i: v for i, v in enumerate(c) if v} for c in cols])


def projection_map(l: int, n: int, N: int) -> SimplicialMap:
    """``(i, j, sigma) -> (i, j, sigma[l])`` from the profile nerve to the order nerve."""
    if not 0 <= l < N:
        raise PreconditionError(f"voter {l} outside 0..{N - 1}")
    src, dst = vertex_index(n, N), vertex_index(n, 1)
    vmap = [dst(i, j, (s[l],)) for (i, j, s) in src.vertices]
    return SimplicialMap(nerve_NProfiles(n, N), nerve_NP(n), vmap)


def diagonal_inclusion(n: int, N: int) -> SimplicialMap:
    """``(i, j, x) -> (i, j, (x, ..., x))`` from the order nerve into the profile nerve."""
    src, dst = vertex_index(n, 1), vertex_index(n, N)
    vmap = [dst(i, j, s * N) for (i, j, s) in src.vertices]
    return SimplicialMap(nerve_NP(n), nerve_NProfiles(n, N), vmap)


def duality_matrix(n: int, N: int) -> list[list[int]]:
    """Entry ``[l][k]``: the class of ``p_l(h_k)`` measured against the
    generator ``c = h(hat_g)`` of the order nerve (so ``c`` itself gives 1)."""
    NP = nerve_NP(n)
    (c_coeff,) = coefficients_in_homology(NP, n - 2, h_chain([hat_g(n)]))
    if abs(c_coeff) != 1:
        raise PipelineError(f"h(hat_g) is not a generator: coefficient {c_coeff}")
    hs = standard_basis(n, N)
    out = []
    for l in range(N):
        p = projection_map(l, n, N)
        row = []
        for h in hs:
            (v,) = coefficients_in_homology(NP, n - 2, p.chain_map(h))
            row.append(v * c_coeff)  # c_coeff is its own inverse
        out.append(row)
    return out


def homology_class(gs: Sequence[Orientation]) -> list[int]:
    n, N = _tuple_n_N(gs)
    return coefficients_in_homology(nerve_NProfiles(n, N), n - 2, h_chain(gs))


def homologous_tuple_check(gs: Sequence[Orientation], gs2: Sequence[Orientation]) -> bool:
    """Compare classes of ``h(gs)`` and ``h(gs2)`` for tuples that agree in some
    slot ``k`` and are acyclic in every other slot; other inputs are rejected."""
    n, N = _tuple_n_N(gs)
    if _tuple_n_N(gs2) != (n, N):
        raise PreconditionError("tuples of different shapes")
    ok = any(
        gs[k] == gs2[k] and all(not gs[l].is_cyclic() and not gs2[l].is_cyclic()
                                for l in range(N) if l != k)
        for k in range(N))
    if not ok:
        raise PreconditionError("tuples do not satisfy the hypotheses for any slot")
    return homology_class(gs) == homology_class(gs2)


# -- the induced map and pairings ---------------------------------------------------

def probe_profile_ranks(n: int, N: int) -> list[int]:
    """Rank of the canonical probe profile for each vertex: every voter puts
    ``{a_i, a_j}`` on top, ordered by its sign, then the rest ascending."""
    sp = profile_space(n, N)
    out = []
    for i, j, sigma in vertex_index(n, N).vertices:
        rest = [a for a in range(n) if a not in (i, j)]
        orders = [LinearOrder(((i, j) if s == PLUS else (j, i)) + tuple(rest)) for s in sigma]
        out.append(sp.rank(Profile(tuple(orders))))
    return out


def induced_scf_map(f: SocialChoiceFunction, exhaustive: bool | None = None,
                    check_axioms: bool = True) -> SimplicialMap:
    """The map ``(i, j, sigma) -> index of the alternative never chosen on U_ij^sigma``.

    The probe outcome is ``a_i`` or ``a_j``; if it is ``a_i`` then ``a_j`` is
    never chosen, so the vertex goes to ``j`` (and vice versa).  With
    ``exhaustive`` every profile of ``U_ij^sigma`` is scanned to confirm it;
    the default is on for ``(n!)^N <= 1000``.
    """
    n, N = f.n, f.N
    if n < 3:
        raise PreconditionError("the induced map needs n >= 3")
    if check_axioms:
        for chk in (check_monotonic(f), check_unanimous(f)):
            if not chk:
                raise PreconditionError(f"{f.name} is not {chk.axiom}")
    values = f.values
    vx = vertex_index(n, N)
    vmap = []
    for v, r in enumerate(probe_profile_ranks(n, N)):
        i, j, _ = vx.vertices[v]
        y = int(values[r])
        if y == i:
            vmap.append(j)
        elif y == j:
            vmap.append(i)
        else:
            raise PipelineError(f"probe for vertex {vx.vertices[v]} chose a_{y}; "
                                "input is not monotonic and unanimous")
    if exhaustive is None:
        exhaustive = profile_space(n, N).size <= 1000
    if exhaustive:
        cover = cover_profiles(n, N)
        for v, members in enumerate(cover.sets):
            chosen = values[sorted(members)]
            if (chosen == vmap[v]).any():
                raise PipelineError(f"a_{vmap[v]} is chosen on U_{vx.vertices[v]}")
    return SimplicialMap(nerve_NProfiles(n, N), nerve_NA(n), vmap)


def fundamental_cycle_NA(n: int) -> Chain:
    return boundary_chain(range(n))


def pairing_with_dstar(z: Chain, n: int) -> int:
    """The multiple of the fundamental cycle that a degree-(n-2) cycle of the
    outcome nerve equals (raw, before sign normalization)."""
    if z.dim != n - 2:
        raise HomologyError(f"expected an {n - 2}-chain")
    if not z.support_in(nerve_NA(n)):
        raise HomologyError("chain is not supported on the outcome nerve")
    if n - 2 > 0 and not z.boundary().is_zero():
        raise HomologyError("chain is not a cycle")
    if z.is_zero():
        return 0
    zA = fundamental_cycle_NA(n)
    key = next(iter(z.coeffs))
    m, rem = divmod(z.coeffs[key], zA.coeffs[key])
    if rem or z != m * zA:
        raise HomologyError("cycle is not a multiple of the fundamental cycle")
    return m


def _raw_pairing(fs: SimplicialMap, h: Chain, n: int) -> int:
    return pairing_with_dstar(fs.chain_map(h), n)


def unanimity_class(f: SocialChoiceFunction, fs: SimplicialMap | None = None) -> int:
    """Raw pairing of ``f_*(h(hat_g, ..., hat_g))`` with the fundamental class;
    its sign fixes the normalization, its magnitude must be 1."""
    n, N = f.n, f.N
    fs = fs if fs is not None else induced_scf_map(f)
    raw = _raw_pairing(fs, h_chain([hat_g(n)] * N), n)
    if abs(raw) != 1:
        raise PipelineError(f"unanimity class pairs to {raw}, expected +-1")
    return raw


def pairing_vector(f: SocialChoiceFunction, fs: SimplicialMap | None = None) -> list[int]:
    """Normalized pairings of ``f_*(h_l)``; a unit vector at the dictator."""
    n, N = f.n, f.N
    fs = fs if fs is not None else induced_scf_map(f)
    sign = unanimity_class(f, fs)
    vec = [sign * _raw_pairing(fs, h, n) for h in standard_basis(n, N)]
    if sorted(vec) != [0] * (N - 1) + [1]:
        raise PipelineError(f"pairing vector {vec} is not a standard unit vector")
    return vec


def dictator_via_homology(f: SocialChoiceFunction, fs: SimplicialMap | None = None) -> int:
    vec = pairing_vector(f, fs)
    l = vec.index(1)
    combinatorial = dictator_of(f)
    if combinatorial != l:
        raise PipelineError(f"homology names voter {l}, direct check names {combinatorial}")
    return l


# -- reports ------------------------------------------------------------------------

@dataclass
class AnalysisReport:
    rule: str
    n: int
    N: int
    axioms: dict
    witnesses: dict
    monotonic_unanimous: bool
    dictator_combinatorial: int | None
    vertex_map: list | None = None
    pairing_vector: list[int] | None = None
    unanimity_raw: int | None = None
    dictator: int | None = None
    homology: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def analyze(f: SocialChoiceFunction, exhaustive: bool | None = None) -> AnalysisReport:
    s = axiom_summary(f)
    witnesses = {}
    for chk in (s.monotonic, s.unanimous, s.surjective, s.strategy_proof):
        if chk.witness is not None:
            witnesses[chk.axiom] = _witness_json(chk.witness)
    report = AnalysisReport(
        rule=f.name, n=f.n, N=f.N,
        axioms={"monotonic": s.monotonic.holds, "unanimous": s.unanimous.holds,
                "surjective": s.surjective.holds, "strategy_proof": s.strategy_proof.holds,
                "equivalence_holds": s.equivalence_holds},
        witnesses=witnesses,
        monotonic_unanimous=s.monotonic_and_unanimous,
        dictator_combinatorial=dictator_of(f),
    )
    if not s.monotonic_and_unanimous or f.n < 3:
        return report
    fs = induced_scf_map(f, exhaustive=exhaustive, check_axioms=False)
    vx = vertex_index(f.n, f.N)
    report.vertex_map = [[i, j, list(sig), img]
                         for (i, j, sig), img in zip(vx.vertices, fs.vertex_map)]
    report.unanimity_raw = unanimity_class(f, fs)
    report.pairing_vector = pairing_vector(f, fs)
    report.dictator = dictator_via_homology(f, fs)
    k = f.n - 2
    report.homology = {
        "profile_nerve": homology(nerve_NProfiles(f.n, f.N), k).summary(),
        "outcome_nerve": homology(nerve_NA(f.n), k).summary(),
    }
    return report


def _witness_json(w):
    if isinstance(w, ManipulationWitness):
        return {"profile": w.profile.as_lists(), "voter": w.voter,
                "misreport": list(w.misreport.ranking)}
    if isinstance(w, Profile):
        return {"profile": w.as_lists()}
    if isinstance(w, tuple):
        return {"profile": w[0].as_lists(), "improved_profile": w[1].as_lists()}
    return w
