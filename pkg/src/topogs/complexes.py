"""Finite abstract simplicial complexes, covers and their nerves, chains, maps.

Simplices are sorted tuples of vertex indices.  Orientation follows the
integer order of vertices: the boundary of ``(v_0, ..., v_k)`` is
``sum_i (-1)^i (v_0, ..., v_i omitted, ..., v_k)``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from topogs.intmat import IntegerMatrix

Simplex = tuple  # strictly increasing tuple of vertex indices


class ComplexError(ValueError):
    pass


def simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(vertices))
    if len(set(s)) != len(s):
        raise ComplexError(f"repeated vertex in simplex {s}")
    return s


class SimplicialComplex:
    """Downward-closed family of nonempty simplices on ``range(vertex_count)``.

    ``faces_by_dim[k]`` is the lexicographically sorted list of k-simplices
    and ``face_index[k]`` maps each of them to its position.  The empty
    simplex is not stored.
    """

    def __init__(self, vertex_count: int, faces: Iterable[Sequence[int]]):
        self.vertex_count = vertex_count
        by_dim: dict[int, set] = {}
        for f in faces:
            s = simplex(f)
            if not s:
                continue
            if s[0] < 0 or s[-1] >= vertex_count:
                raise ComplexError(f"vertex out of range in {s} (vertex_count={vertex_count})")
            by_dim.setdefault(len(s) - 1, set()).add(s)
        top = max(by_dim, default=-1)
        self.faces_by_dim: list[list[Simplex]] = [sorted(by_dim.get(k, ())) for k in range(top + 1)]
        self.face_index: list[dict[Simplex, int]] = [
            {s: i for i, s in enumerate(fs)} for fs in self.faces_by_dim]
        for k in range(1, top + 1):
            lower = self.face_index[k - 1]
            for s in self.faces_by_dim[k]:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in lower:
                        raise ComplexError(f"not downward closed: {s} lacks a facet")
        self._cache: dict = {}

    @classmethod
    def from_maximal_faces(cls, vertex_count: int,
                           faces: Iterable[Sequence[int]]) -> "SimplicialComplex":
        closure: set = set()
        for f in faces:
            s = simplex(f)
            if s and (s[0] < 0 or s[-1] >= vertex_count):
                raise ComplexError(f"vertex out of range in {s} (vertex_count={vertex_count})")
            if s in closure:
                continue
            for r in range(1, len(s) + 1):
                closure.update(combinations(s, r))
        return cls(vertex_count, closure)

    @property
    def dim(self) -> int:
        return len(self.faces_by_dim) - 1

    def faces(self, k: int) -> list[Simplex]:
        return self.faces_by_dim[k] if 0 <= k <= self.dim else []

    def count(self, k: int) -> int:
        return len(self.faces(k))

    def __len__(self) -> int:
        return sum(len(fs) for fs in self.faces_by_dim)

    def __iter__(self) -> Iterator[Simplex]:
        for fs in self.faces_by_dim:
            yield from fs

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        k = len(s) - 1
        return 0 <= k <= self.dim and s in self.face_index[k]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and self.faces_by_dim == other.faces_by_dim)

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={self.vertex_count}, f={self.f_vector()})"

    def f_vector(self) -> list[int]:
        return [len(fs) for fs in self.faces_by_dim]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def maximal_faces(self) -> list[Simplex]:
        covered: set = set()
        for k in range(1, self.dim + 1):
            for s in self.faces_by_dim[k]:
                covered.update(s[:i] + s[i + 1:] for i in range(len(s)))
        return [s for s in self if s not in covered]

    def boundary_matrix(self, k: int) -> IntegerMatrix:
        """Integer matrix of the boundary map from k-chains to (k-1)-chains.

        ``k`` ranges over ``1..dim``; for convenience ``k = 0`` and
        ``k = dim + 1`` give the zero maps with the correct shapes.
        """
        if not 0 <= k <= self.dim + 1:
            raise ComplexError(f"boundary degree {k} out of range 0..{self.dim + 1}")
        key = ("boundary", k)
        if key not in self._cache:
            if k == 0 or k == self.dim + 1:
                mat = IntegerMatrix.zeros(self.count(k - 1) if k else 0, self.count(k))
            else:
                lower = self.face_index[k - 1]
                cols = []
                for s in self.faces_by_dim[k]:
                    cols.append({lower[s[:i] + s[i + 1:]]: (-1) ** i for i in range(len(s))})
                mat = IntegerMatrix(len(lower), len(cols), cols)
            self._cache[key] = mat
        return self._cache[key]

    def to_json(self) -> dict:
        return {"vertex_count": self.vertex_count,
                "faces_by_dim": [[list(s) for s in fs] for fs in self.faces_by_dim]}

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def boundary_of_simplex_complex(m: int) -> SimplicialComplex:
    """All proper faces of the m-simplex on vertices ``0..m``."""
    verts = range(m + 1)
    return SimplicialComplex.from_maximal_faces(m + 1, combinations(verts, m))


def full_simplex_complex(m: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal_faces(m + 1, [range(m + 1)])


# -- covers and nerves ----------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    """Indexed family of subsets of ``range(ground_size)``."""

    ground_size: int
    sets: tuple[frozenset, ...]
    labels: tuple[Hashable, ...] = field(default=())

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if any(not 0 <= e < self.ground_size for e in s):
                raise ComplexError("cover set contains an element outside the ground set")
        object.__setattr__(self, "sets", sets)
        labels = tuple(self.labels) if self.labels else tuple(range(len(sets)))
        if len(labels) != len(sets):
            raise ComplexError("one label per cover set")
        object.__setattr__(self, "labels", labels)
        if sets and frozenset().union(*sets) != frozenset(range(self.ground_size)):
            warnings.warn("cover sets do not cover the ground set", stacklevel=3)

    def __len__(self) -> int:
        return len(self.sets)

    def signature(self, e: int) -> Simplex:
        """Indices of the sets containing ground element ``e``."""
        return tuple(k for k, s in enumerate(self.sets) if e in s)


def nerve(cover: Cover) -> SimplicialComplex:
    """Nerve via witnesses: every nonempty intersection contains some ground
    element ``e``, so the faces are exactly the subsets of the signatures."""
    if not len(cover):
        raise ComplexError("nerve of an empty cover")
    membership: list[list[int]] = [[] for _ in range(cover.ground_size)]
    for k, s in enumerate(cover.sets):
        for e in s:
            membership[e].append(k)
    signatures = {tuple(m) for m in membership if m}
    return SimplicialComplex.from_maximal_faces(len(cover), signatures)


def nerve_by_intersections(cover: Cover) -> SimplicialComplex:
    """Nerve by testing index subsets directly (exponential; test oracle)."""
    faces = []
    frontier = [((k,), cover.sets[k]) for k in range(len(cover)) if cover.sets[k]]
    while frontier:
        faces.extend(f for f, _ in frontier)
        nxt = []
        for f, inter in frontier:
            for k in range(f[-1] + 1, len(cover)):
                meet = inter & cover.sets[k]
                if meet:
                    nxt.append((f + (k,), meet))
        frontier = nxt
    return SimplicialComplex(len(cover), faces)


# -- chains ---------------------------------------------------------------------

class Chain:
    """Integer combination of k-simplices, keyed by sorted vertex tuples."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Mapping[Sequence[int], int] | None = None):
        self.dim = dim
        self.coeffs: dict[Simplex, int] = {}
        for s, c in (coeffs or {}).items():
            key = tuple(s)
            if len(key) != dim + 1 or list(key) != sorted(set(key)):
                raise ComplexError(f"{key} is not a sorted {dim}-simplex")
            if c:
                self.coeffs[key] = self.coeffs.get(key, 0) + int(c)
        self.coeffs = {s: c for s, c in self.coeffs.items() if c}

    @classmethod
    def of_simplex(cls, s: Sequence[int], coeff: int = 1) -> "Chain":
        return cls(len(s) - 1, {simplex(s): coeff})

    @classmethod
    def from_vector(cls, cx: SimplicialComplex, k: int, vec: Mapping[int, int]) -> "Chain":
        faces = cx.faces(k)
        return cls(k, {faces[i]: v for i, v in vec.items() if v})

    def to_vector(self, cx: SimplicialComplex) -> dict[int, int]:
        index = cx.face_index[self.dim] if 0 <= self.dim <= cx.dim else {}
        out = {}
        for s, c in self.coeffs.items():
            if s not in index:
                raise ComplexError(f"{s} is not a {self.dim}-face of the complex")
            out[index[s]] = c
        return out

    def support_in(self, cx: SimplicialComplex) -> bool:
        return all(s in cx for s in self.coeffs)

    def boundary(self) -> "Chain":
        if self.dim == 0:
            return Chain(-1)
        out: dict[Simplex, int] = {}
        for s, c in self.coeffs.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                out[f] = out.get(f, 0) + (c if i % 2 == 0 else -c)
        return Chain(self.dim - 1, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "Chain") -> None:
        if self.dim != other.dim:
            raise ComplexError(f"cannot combine {self.dim}-chain with {other.dim}-chain")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return Chain(self.dim, out)

    def __neg__(self) -> "Chain":
        return Chain(self.dim, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, k: int) -> "Chain":
        return Chain(self.dim, {s: k * c for s, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = " ".join(f"{c:+d}{list(s)}" for s, c in sorted(self.coeffs.items()))
        return f"Chain[{self.dim}]({terms or '0'})"


def boundary_chain(s: Sequence[int]) -> Chain:
    """Boundary of a single simplex, computed in the ambient full simplex."""
    return Chain.of_simplex(s).boundary()


# -- simplicial maps --------------------------------------------------------------

class NotSimplicialError(ComplexError):
    pass


class SimplicialMap:
    """Vertex map carrying every face of ``source`` onto a face of ``target``."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 vertex_map: Sequence[int], validate: bool = True):
        vertex_map = tuple(int(v) for v in vertex_map)
        if len(vertex_map) != source.vertex_count:
            raise NotSimplicialError("vertex map must be total on source vertices")
        if any(not 0 <= v < target.vertex_count for v in vertex_map):
            raise NotSimplicialError("vertex image outside the target")
        self.source = source
        self.target = target
        self.vertex_map = vertex_map
        if validate:
            bad = self.first_non_simplicial_face()
            if bad is not None:
                raise NotSimplicialError(f"image of face {bad} is not a face of the target")

    def image(self, s: Sequence[int]) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    def first_non_simplicial_face(self) -> Simplex | None:
        # images of subfaces are subfaces of images, so maximal faces suffice
        for s in self.source.maximal_faces():
            if self.image(s) not in self.target:
                return s
        return None

    def chain_map(self, z: Chain) -> Chain:
        """Push a chain forward; collapsed simplices map to zero and the rest
        carry the sign of the permutation sorting their images."""
        out: dict[Simplex, int] = {}
        for s, c in z.coeffs.items():
            img = [self.vertex_map[v] for v in s]
            if len(set(img)) < len(img):
                continue
            sign = _permutation_sign(img)
            key = tuple(sorted(img))
            out[key] = out.get(key, 0) + sign * c
        return Chain(z.dim, out)

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self after first``."""
        if first.target is not self.source and first.target != self.source:
            raise ComplexError("maps do not compose")
        return SimplicialMap(first.source, self.target,
                             [self.vertex_map[v] for v in first.vertex_map])

    def chain_matrix(self, k: int) -> IntegerMatrix:
        src, dst = self.source, self.target
        idx = dst.face_index[k] if k <= dst.dim else {}
        cols = []
        for s in src.faces(k):
            img = self.chain_map(Chain.of_simplex(s))
            cols.append({idx[t]: c for t, c in img.coeffs.items()})
        return IntegerMatrix(dst.count(k), src.count(k), cols)


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def induced_chain_map(m: SimplicialMap, k: int):
    """The chain map on k-chains as a callable ``Chain -> Chain``."""
    def apply(z: Chain) -> Chain:
        if z.dim != k:
            raise ComplexError(f"expected a {k}-chain")
        return m.chain_map(z)
    return apply
