import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from topogs.choice import SocialChoiceFunction, dictator_of
from topogs.complexes import Chain
from topogs.homology import (
    HomologyError,
    coefficients_in_homology,
    homology,
    induced_homology_matrix,
)
from topogs.intmat import rank
from topogs.pipeline import (
    MINUS,
    PLUS,
    Orientation,
    PipelineError,
    PreconditionError,
    acyclic_g0,
    all_orientations,
    analyze,
    basis_coefficient_matrix,
    classify_orientation_cycle,
    cover_A,
    cover_P,
    cover_profiles,
    delta_simplex,
    diagonal_inclusion,
    dictator_via_homology,
    duality_matrix,
    fundamental_cycle_NA,
    generator_test,
    h_chain,
    hat_g,
    homologous_tuple_check,
    homology_class,
    induced_scf_map,
    nerve_NA,
    nerve_NM,
    nerve_NP,
    nerve_NProfiles,
    pairing_vector,
    pairing_with_dstar,
    projection_map,
    unanimity_class,
    vertex_index,
)

INSTANCES = [(3, 1), (3, 2), (3, 3), (4, 1), (4, 2)]


def tuples_of_orientations(n, N):
    return st.lists(st.lists(st.booleans(), min_size=n, max_size=n)
                    .map(lambda a: Orientation(tuple(a))), min_size=N, max_size=N)


# -- covers --------------------------------------------------------------------

def test_cover_P_n3():
    c = cover_P(3)
    assert len(c) == 6 and all(len(s) == 3 for s in c.sets)
    vx = vertex_index(3, 1)
    for i, j in itertools.combinations(range(3), 2):
        plus, minus = c.sets[vx(i, j, (PLUS,))], c.sets[vx(i, j, (MINUS,))]
        assert not plus & minus
        assert len(plus | minus) == 6


def test_cover_profiles_3_2():
    c = cover_profiles(3, 2)
    assert len(c) == 12 and all(len(s) == 9 for s in c.sets)
    counts = [sum(p in s for s in c.sets) for p in range(36)]
    assert set(counts) == {3}
    assert {len(f) for f in nerve_NProfiles(3, 2).maximal_faces()} == {comb(3, 2)}


def test_cover_A_and_outcome_nerve():
    assert [sorted(s) for s in cover_A(3).sets] == [[1, 2], [0, 2], [0, 1]]
    NA = nerve_NA(4)
    assert len(NA) == 14
    assert (0, 1, 2, 3) not in NA
    assert [homology(NA, k).betti for k in range(3)] == [1, 0, 1]


def test_vertex_numbering():
    vx = vertex_index(3, 2)
    assert list(vx.vertices[:4]) == [(0, 1, (1, 1)), (0, 1, (1, -1)), (0, 1, (-1, 1)), (0, 1, (-1, -1))]
    assert len(vx) == 12


# -- nerves --------------------------------------------------------------------

@pytest.mark.parametrize("n,N", INSTANCES)
def test_nerves_agree(n, N):
    assert nerve_NM(n, N) == nerve_NProfiles(n, N)


def test_contradictory_signs_never_share_a_face():
    vx = vertex_index(3, 2)
    cx = nerve_NProfiles(3, 2)
    for s in cx.faces(1):
        (i, j, _), (k, l, _) = vx.vertices[s[0]], vx.vertices[s[1]]
        assert (i, j) != (k, l)


def test_three_cycle_face_absent():
    vx = vertex_index(3, 1)
    cyc = sorted([vx(0, 1, (PLUS,)), vx(1, 2, (PLUS,)), vx(0, 2, (MINUS,))])
    NP = nerve_NP(3)
    assert tuple(cyc) not in NP
    assert all(pair in NP for pair in itertools.combinations(cyc, 2))


# -- orientations and cycles -------------------------------------------------------

def test_orientations():
    for n in range(3, 7):
        gs = all_orientations(n)
        assert len(gs) == 2 ** n
        assert sum(classify_orientation_cycle(g) == "cyclic" for g in gs) == 2
    assert hat_g(4).is_cyclic() and not acyclic_g0(4).is_cyclic()
    assert hat_g(3).signs() == (PLUS, PLUS, MINUS)
    with pytest.raises(ValueError):
        Orientation((True, False))


@pytest.mark.parametrize("g", all_orientations(3))
def test_delta_facets_in_nerve_n3(g):
    NP = nerve_NP(3)
    d = delta_simplex([g])
    assert len(d) == 3
    assert all(f in NP for f in itertools.combinations(d, 2))
    h = h_chain([g])
    assert h.boundary().is_zero()
    assert len(h.coeffs) == 3 and {abs(c) for c in h.coeffs.values()} == {1}


@given(tuples_of_orientations(3, 2))
def test_delta_facets_in_nerve_3_2(gs):
    cx = nerve_NProfiles(3, 2)
    d = delta_simplex(gs)
    assert all(f in cx for f in itertools.combinations(d, len(d) - 1))
    assert h_chain(gs).boundary().is_zero()


@pytest.mark.parametrize("n", [3, 4])
def test_generator_dichotomy(n):
    rows = generator_test(n)
    for r in rows:
        if r["kind"] == "cyclic":
            assert abs(r["coefficient"]) == 1
        else:
            assert r["coefficient"] == 0


# -- basis and duality ---------------------------------------------------------------

@pytest.mark.parametrize("n,N", [(3, 1), (3, 2), (3, 3), (4, 2)])
def test_basis_unimodular(n, N):
    M = basis_coefficient_matrix(n, N)
    assert M.shape == (N, N) and abs(M.determinant()) == 1


@pytest.mark.parametrize("n,N", [(3, 2), (3, 3), (4, 2)])
def test_duality_identity(n, N):
    assert duality_matrix(n, N) == [[int(i == j) for j in range(N)] for i in range(N)]


def test_all_acyclic_tuple_is_zero():
    for n, N in [(3, 2), (4, 2)]:
        assert homology_class([acyclic_g0(n)] * N) == [0] * N


def test_projection_example():
    p = projection_map(0, 3, 2)
    src, dst = vertex_index(3, 2), vertex_index(3, 1)
    assert p.vertex_map[src(0, 1, (PLUS, MINUS))] == dst(0, 1, (PLUS,))
    with pytest.raises(PreconditionError):
        projection_map(2, 3, 2)


@pytest.mark.parametrize("n,N", [(3, 2), (3, 3)])
def test_projection_after_inclusion_is_identity(n, N):
    inc = diagonal_inclusion(n, N)
    for l in range(N):
        comp = projection_map(l, n, N).compose(inc)
        assert comp.vertex_map == tuple(range(len(vertex_index(n, 1))))
        M = induced_homology_matrix(comp, n - 2)
        assert M.to_dense() == [[1]]
        # functoriality: the composite's matrix is the product
        prod = induced_homology_matrix(projection_map(l, n, N), n - 2) @ \
            induced_homology_matrix(inc, n - 2)
        assert prod == M


def test_projection_rank_one():
    for l in range(2):
        assert rank(induced_homology_matrix(projection_map(l, 3, 2), 1)) == 1


def test_homologous_tuple_check():
    n = 3
    acyc = [g for g in all_orientations(n) if not g.is_cyclic()]
    gh = hat_g(n)
    assert homologous_tuple_check([gh, acyc[0]], [gh, acyc[0]])
    for a, b in itertools.combinations(acyc, 2):
        assert homologous_tuple_check([gh, a], [gh, b])
        assert homology_class([acyclic_g0(n), a]) == [0, 0] == homology_class([acyclic_g0(n), b])
    with pytest.raises(PreconditionError):
        homologous_tuple_check([gh, gh], [gh, acyc[0]])


# -- pairing ---------------------------------------------------------------------

def test_pairing_with_dstar():
    zA = fundamental_cycle_NA(3)
    assert pairing_with_dstar(zA, 3) == 1
    assert pairing_with_dstar(Chain(1, {}), 3) == 0
    assert pairing_with_dstar(-3 * zA, 3) == -3
    with pytest.raises(HomologyError):
        pairing_with_dstar(Chain.of_simplex((0, 1)), 3)


def test_induced_map_example():
    f = SocialChoiceFunction.dictatorship(0, 3, 2)
    fs = induced_scf_map(f)
    vx = vertex_index(3, 2)
    for v, (i, j, sigma) in enumerate(vx.vertices):
        assert fs.vertex_map[v] == (j if sigma[0] == PLUS else i)
    assert fs.vertex_map[vx(0, 1, (PLUS, MINUS))] == 1


@pytest.mark.parametrize("n,N", [(3, 2), (3, 3), (4, 2)])
def test_dictator_pairing(n, N):
    for l in range(N):
        f = SocialChoiceFunction.dictatorship(l, n, N)
        fs = induced_scf_map(f, exhaustive=True)
        assert abs(unanimity_class(f, fs)) == 1
        assert pairing_vector(f, fs) == [int(k == l) for k in range(N)]
        assert dictator_via_homology(f, fs) == l == dictator_of(f)


def test_dictator_2_of_3():
    f = SocialChoiceFunction.dictatorship(2, 3, 3)
    assert pairing_vector(f) == [0, 0, 1]


def test_preconditions():
    with pytest.raises(PreconditionError):
        induced_scf_map(SocialChoiceFunction.plurality_lex(3, 2))
    with pytest.raises(PreconditionError):
        induced_scf_map(SocialChoiceFunction.constant(0, 3, 2))
    # skipping the checks lets the probe catch it
    with pytest.raises(PipelineError):
        induced_scf_map(SocialChoiceFunction.constant(2, 3, 2), check_axioms=False)


def test_analyze_reports():
    rep = analyze(SocialChoiceFunction.dictatorship(1, 3, 2))
    assert rep.pairing_vector == [0, 1] and rep.dictator == 1
    assert rep.homology["profile_nerve"]["betti"] == 2
    rep = analyze(SocialChoiceFunction.plurality_lex(3, 2))
    assert rep.pairing_vector is None
    assert rep.witnesses["strategy_proof"]["voter"] in (0, 1)


def test_coefficients_example_3_2():
    cx = nerve_NProfiles(3, 2)
    b = homology(cx, 1).basis_cycles
    assert coefficients_in_homology(cx, 1, 2 * b[1] - b[0]) == [-1, 2]
