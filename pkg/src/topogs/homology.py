"""Integral simplicial homology with explicit cycle representatives.

For degree ``k`` write ``B`` for the boundary map out of (k+1)-chains and
``D`` for the boundary map out of k-chains.  With ``U B V = diag(d)`` the new
coordinates ``y = U z`` make boundaries the lattice ``sum d_i Z e_i``
(``i < r``), and ``D U^{-1}`` vanishes on those first ``r`` coordinates
because ``D B = 0``.  Cycles are then ``Z^r`` plus the kernel ``K`` of the
remaining block ``A`` of ``D U^{-1}``; a second Smith form of ``A`` yields a
basis of ``K``.  So::

    H_k = (+)_{i<r} Z/d_i  (+)  K

and reading off the class of a cycle is a pair of log replays.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from topogs.complexes import Chain, ComplexError, SimplicialComplex, SimplicialMap
from topogs.intmat import IntegerMatrix, SnfResult, smith_normal_form, verify_snf


class HomologyError(ArithmeticError):
    pass


class NotACycleError(HomologyError):
    pass


@dataclass
class HomologyDescriptor:
    degree: int
    betti: int
    torsion: list[int]
    basis_cycles: list[Chain] = field(repr=False)

    def summary(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}


@dataclass
class HomologyClass:
    """Coordinates of a cycle: free part against ``basis_cycles``, torsion
    part as residues modulo each torsion coefficient."""

    free: list[int]
    torsion: list[int]


class _DegreeData:
    def __init__(self, cx: SimplicialComplex, k: int, verify: bool):
        self.cx, self.k = cx, k
        m = cx.count(k)
        B = cx.boundary_matrix(k + 1)
        D = cx.boundary_matrix(k)
        self.bsnf: SnfResult = smith_normal_form(B, track_rows=True, track_cols=verify)
        if verify:
            verify_snf(B, self.bsnf)
        r = self.bsnf.rank
        self.r = r

        # rows of D U^{-1}, restricted to coordinates r..m-1
        a_cols: list[dict[int, int]] = [{} for _ in range(m - r)]
        for i, row in enumerate(D.row_dicts()):
            if not row:
                continue
            img = self.bsnf.apply_U_inv_T(row)
            for j, v in img.items():
                if j < r:
                    raise HomologyError("D U^-1 is nonzero on boundary coordinates; D B != 0")
                a_cols[j - r][i] = v
        A = IntegerMatrix(D.rows, m - r, a_cols)
        self.asnf: SnfResult = smith_normal_form(A, track_rows=verify, track_cols=True)
        if verify:
            verify_snf(A, self.asnf)
        self.r2 = self.asnf.rank
        self.betti = m - r - self.r2
        self.diag = self.bsnf.diagonal
        self.torsion = [d for d in self.diag if d > 1]
        self._torsion_pos = [i for i, d in enumerate(self.diag) if d > 1]

        self.basis_cycles: list[Chain] = []
        for t in range(self.betti):
            w = self.asnf.apply_V({self.r2 + t: 1})
            y = {r + j: v for j, v in w.items()}
            z = self.bsnf.apply_U_inv(y)
            chain = Chain.from_vector(cx, k, z)
            if k > 0 and not chain.boundary().is_zero():
                raise HomologyError("computed basis element is not a cycle")
            self.basis_cycles.append(chain)

    def descriptor(self) -> HomologyDescriptor:
        return HomologyDescriptor(self.k, self.betti, list(self.torsion), list(self.basis_cycles))

    def classify(self, z: Chain) -> HomologyClass:
        if z.dim != self.k:
            raise HomologyError(f"expected a {self.k}-chain, got a {z.dim}-chain")
        try:
            vec = z.to_vector(self.cx)
        except ComplexError as exc:
            raise HomologyError(str(exc)) from None
        if self.k > 0 and not z.boundary().is_zero():
            raise NotACycleError("chain is not a cycle")
        y = self.bsnf.apply_U(vec)
        r = self.r
        w = {j - r: v for j, v in y.items() if j >= r}
        u = self.asnf.apply_V_inv(w)
        if any(j < self.r2 for j in u):
            raise HomologyError("no integer solution for a cycle; internal failure")
        free = [u.get(self.r2 + t, 0) for t in range(self.betti)]
        torsion = [y.get(i, 0) % self.diag[i] for i in self._torsion_pos]
        return HomologyClass(free, torsion)


def _degree_data(cx: SimplicialComplex, k: int, verify: bool = False) -> _DegreeData:
    if not 0 <= k <= cx.dim:
        raise HomologyError(f"degree {k} outside 0..{cx.dim}")
    key = ("homology", k)
    data = cx._cache.get(key)
    if data is None or (verify and not getattr(data, "verified", False)):
        data = _DegreeData(cx, k, verify)
        data.verified = verify
        cx._cache[key] = data
    return data


def homology(cx: SimplicialComplex, k: int, verify: bool = False) -> HomologyDescriptor:
    """Betti number, torsion coefficients and basis cycles of ``H_k(cx; Z)``.

    With ``verify`` every Smith form involved is re-checked by exact
    multiplication (costly on the larger nerves).
    """
    return _degree_data(cx, k, verify).descriptor()


def classify_cycle(cx: SimplicialComplex, k: int, z: Chain) -> HomologyClass:
    return _degree_data(cx, k).classify(z)


def coefficients_in_homology(cx: SimplicialComplex, k: int, z: Chain) -> list[int]:
    """Free coordinates of ``z`` against ``homology(cx, k).basis_cycles``.

    Raises :class:`NotACycleError` for non-cycles and :class:`HomologyError`
    when ``z`` has a nonzero torsion component.
    """
    cls = classify_cycle(cx, k, z)
    if any(cls.torsion):
        raise HomologyError(f"cycle has nonzero torsion component {cls.torsion}")
    return cls.free


def betti_numbers(cx: SimplicialComplex) -> list[int]:
    """Betti numbers from ranks alone (no representatives)."""
    ranks = [0] * (cx.dim + 2)
    for k in range(1, cx.dim + 1):
        ranks[k] = len(smith_normal_form(cx.boundary_matrix(k), False, False).diagonal)
    return [cx.count(k) - ranks[k] - ranks[k + 1] for k in range(cx.dim + 1)]


def homology_groups(cx: SimplicialComplex) -> list[tuple[int, list[int]]]:
    """``(betti, torsion)`` for every degree, from invariant factors only."""
    factors = [[] for _ in range(cx.dim + 2)]
    for k in range(1, cx.dim + 1):
        factors[k] = smith_normal_form(cx.boundary_matrix(k), False, False).diagonal
    out = []
    for k in range(cx.dim + 1):
        betti = cx.count(k) - len(factors[k]) - len(factors[k + 1])
        out.append((betti, [d for d in factors[k + 1] if d > 1]))
    return out


def induced_homology_matrix(m: SimplicialMap, k: int) -> IntegerMatrix:
    """Matrix of ``m_*: H_k(source) -> H_k(target)`` in the computed bases."""
    src, dst = m.source, m.target
    src_h = homology(src, k)
    dst_data = _degree_data(dst, k)
    cols = []
    for z in src_h.basis_cycles:
        img = m.chain_map(z)
        if k > 0 and not img.boundary().is_zero():
            raise HomologyError("chain map does not commute with the boundary")
        cls = dst_data.classify(img)
        if any(cls.torsion):
            raise HomologyError("image has a torsion component; matrix is not integral")
        cols.append({i: v for i, v in enumerate(cls.free) if v})
    return IntegerMatrix(dst_data.betti, src_h.betti, cols)


def chain_map_commutes(m: SimplicialMap, k: int) -> bool:
    """``f_{k-1} o d_k == d_k o f_k`` as integer matrices."""
    if k < 1:
        return True
    left = m.chain_matrix(k - 1) @ m.source.boundary_matrix(k)
    if k > m.target.dim:
        return left.is_zero()
    right = m.target.boundary_matrix(k) @ m.chain_matrix(k)
    return left == right
