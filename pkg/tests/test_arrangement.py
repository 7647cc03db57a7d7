from math import comb

import pytest
from hypothesis import given, strategies as st

from topogs.arrangement import (
    UnionFind,
    arrangement_survey,
    coloring_dimension,
    cycle_rank,
    dimension_by_components,
    dimension_by_formula,
)


def test_examples():
    assert coloring_dimension((0, 0, 0), 3, 2) == 2
    assert coloring_dimension((1, 1, 1), 3, 2) == 2
    assert coloring_dimension((0, 0, 1), 3, 2) == 1


def test_bad_colorings():
    with pytest.raises(ValueError):
        coloring_dimension((0, 0), 3, 2)
    with pytest.raises(ValueError):
        coloring_dimension((0, 0, 2), 3, 2)


def test_cycle_rank():
    assert cycle_rank(3, [(0, 1), (1, 2), (0, 2)]) == 1
    assert cycle_rank(4, [(0, 1), (1, 2)]) == 0
    assert cycle_rank(4, [(i, j) for i in range(4) for j in range(i + 1, 4)]) == 3


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 1) and uf.union(3, 4) and not uf.union(1, 0)
    assert uf.components == 3 and uf.find(0) == uf.find(1)


@given(st.integers(3, 5).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda N: st.lists(st.integers(0, N - 1), min_size=comb(n, 2), max_size=comb(n, 2))
        .map(lambda c: (n, N, tuple(c))))))
def test_two_computations_agree(case):
    n, N, col = case
    d = dimension_by_components(col, n, N)
    assert d == dimension_by_formula(col, n, N)
    assert 0 <= d <= (N - 1) * (n - 1)


@pytest.mark.parametrize("n,N", [(3, 2), (3, 3), (4, 2)])
def test_survey(n, N):
    s = arrangement_survey(n, N)
    assert s.colorings == N ** comb(n, 2)
    assert not s.mismatches
    assert s.max_dimension == (N - 1) * (n - 1)
    assert s.maximizers == [(k,) * comb(n, 2) for k in range(N)]
    assert s.passed


def test_survey_4_2_count():
    assert len(arrangement_survey(4, 2).maximizers) == 2


def test_survey_budget():
    with pytest.raises(ValueError):
        arrangement_survey(5, 4, max_colorings=1000)
