from itertools import product

import numpy as np
import pytest

from quiver_codim.errors import InvalidInputError, ResourceCapError
from quiver_codim.linalg import bareiss_rank
from quiver_codim.quiver_core import (
    DimensionVector,
    KostantPartition,
    MatrixTuple,
    RankPattern,
    count_kostant_partitions,
    dense_orbits,
    enumerate_components,
    enumerate_kostant_partitions,
    horizontal_lace_diagram,
    intervals,
    is_orbit_rank_pattern,
    kostant_to_rank,
    lace_diagram,
    lace_representative,
    longest_root_shift,
    orbit_codim,
    rank_pattern_of,
    rank_to_kostant,
    rep_dim,
    top_components_bruteforce,
)

FIRST_EXAMPLE_RANKS = [(5, 3, 2, 1), (6, 3, 2), (5, 4), (6,)]


def first_example():
    return rank_to_kostant(RankPattern.from_rows(FIRST_EXAMPLE_RANKS))


def literal_rank(m):
    N = m.N
    return tuple(
        sum(m[k, l] for k in range(i + 1) for l in range(j, N + 1)) for i, j in intervals(N)
    )


def orbit_codim_by_tangent_space(m):
    """rep_dim minus the orbit dimension, from the stabilizer Lie algebra.

    The stabilizer of A is {(X_0..X_N) : X_i A_i = A_i X_{i-1}}; its
    dimension is found by exact rank of the linear map X -> (X_i A_i - A_i X_{i-1}).
    """
    A = [np.array(a, dtype=object) for a in lace_representative(m).matrices]
    d = m.dims
    offsets = np.cumsum([0] + [x * x for x in d])
    n_vars = int(offsets[-1])
    rows = []
    for i in range(1, len(d)):
        a = A[i - 1]
        for p in range(d[i]):
            for q in range(d[i - 1]):
                row = [0] * n_vars
                # (X_i A)_{pq} = sum_s X_i[p, s] A[s, q]
                for s in range(d[i]):
                    row[offsets[i] + p * d[i] + s] += int(a[s, q])
                # (A X_{i-1})_{pq} = sum_s A[p, s] X_{i-1}[s, q]
                for s in range(d[i - 1]):
                    row[offsets[i - 1] + s * d[i - 1] + q] -= int(a[p, s])
                rows.append(row)
    rank = bareiss_rank(rows) if rows else 0
    stabilizer = n_vars - rank
    return rep_dim(d) - (n_vars - stabilizer)


def test_dimension_vector_validation():
    with pytest.raises(InvalidInputError):
        DimensionVector((3,))
    with pytest.raises(InvalidInputError):
        DimensionVector((1, -1))
    assert DimensionVector((0, 0)).N == 1


def test_rep_dim():
    assert rep_dim((2, 2, 3)) == 10
    assert rep_dim((2, 3, 2)) == 12
    assert rep_dim((0, 5)) == 0


def test_kostant_counts():
    assert count_kostant_partitions((2, 2, 2)) == 10
    assert len(enumerate_kostant_partitions((0, 0, 0))) == 1
    pairs = {m.as_dict()[(0, 1)] for m in enumerate_kostant_partitions((1, 1))}
    assert pairs == {0, 1}
    for d in [(1, 1), (2, 2, 2), (3, 1, 2), (2, 0, 3), (1, 2, 2, 1)]:
        assert count_kostant_partitions(d) == len(enumerate_kostant_partitions(d))


def test_six_element_listing_of_222_is_the_rank_zero_part():
    # the listing for (2,2,2) has six elements; they are exactly those with m_02 = 0
    listed = [
        [(2, 0, 0), (2, 0), (2,)],
        [(1, 1, 0), (1, 0), (2,)],
        [(2, 0, 0), (1, 1), (1,)],
        [(0, 2, 0), (0, 0), (2,)],
        [(2, 0, 0), (0, 2), (0,)],
        [(1, 1, 0), (0, 1), (1,)],
    ]
    listed = {KostantPartition.from_rows(rows) for rows in listed}
    assert all(m.dims == (2, 2, 2) and m.is_valid() for m in listed)
    enumerated = enumerate_kostant_partitions((2, 2, 2))
    assert {m for m in enumerated if m.top == 0} == listed
    assert len(enumerated) == 10


def test_enumeration_is_lexicographic_and_unique():
    parts = enumerate_kostant_partitions((2, 3, 2, 1))
    entries = [m.entries for m in parts]
    assert entries == sorted(entries)
    assert len(set(entries)) == len(entries)
    assert all(m.is_valid() for m in parts)


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_kostant_partitions((2, 2, 2), cap=5)


def test_first_example():
    m = first_example()
    assert m.is_valid()
    assert m.dims == (5, 6, 5, 6)
    assert kostant_to_rank(m).rows() == FIRST_EXAMPLE_RANKS
    assert orbit_codim(m) == 18
    assert rep_dim(m.dims) - orbit_codim(m) == 72
    assert rank_pattern_of(lace_representative(m)).rows() == FIRST_EXAMPLE_RANKS


def test_modified_first_example_is_not_an_orbit():
    rows = [list(r) for r in FIRST_EXAMPLE_RANKS]
    rows[1][2] = 1  # r_13 from 2 to 1
    r = RankPattern.from_rows(rows)
    m = rank_to_kostant(r)
    assert m[2, 2] == 5 - 4 - 3 + 1
    assert not is_orbit_rank_pattern(r)
    assert is_orbit_rank_pattern(RankPattern.from_rows(FIRST_EXAMPLE_RANKS))


def test_rank_round_trip_and_literal_sum():
    for d in [(2, 2, 2), (1, 3, 2), (2, 0, 2), (1, 2, 1, 2)]:
        for m in enumerate_kostant_partitions(d):
            r = kostant_to_rank(m)
            assert r.entries == literal_rank(m)
            assert rank_to_kostant(r) == m
            assert is_orbit_rank_pattern(r)


def test_rank_of_small_cases():
    zero = KostantPartition((0, 0, 0), (0,) * 6)
    assert kostant_to_rank(zero).entries == (0,) * 6
    m = KostantPartition.from_dict((1, 1), {(0, 1): 1})
    assert rank_to_kostant(RankPattern.from_rows([(1, 1), (1,)])) == m


@pytest.mark.parametrize("d", [(1, 1), (2, 2), (2, 2, 2), (2, 1, 2), (1, 2, 2), (2, 2, 3), (0, 2, 1)])
def test_orbit_codim_matches_stabilizer_dimension(d):
    for m in enumerate_kostant_partitions(d):
        assert orbit_codim(m) == orbit_codim_by_tangent_space(m), m


def test_dense_orbit_of_constant_vector():
    for c in range(4):
        m = KostantPartition.from_dict((c, c, c), {(0, 2): c})
        assert orbit_codim(m) == 0
    for d in [(2, 3, 1), (1, 1, 1, 1), (0, 2), (3, 2, 4, 1)]:
        assert len(dense_orbits(d)) == 1


def test_longest_root_shift():
    for m in enumerate_kostant_partitions((2, 2, 2)):
        assert longest_root_shift(m, 0) == m
        shifted = longest_root_shift(m, 3)
        assert shifted.dims == (5, 5, 5)
        assert shifted.is_valid()
        assert orbit_codim(shifted) == orbit_codim(m)
    m = KostantPartition.from_dict((1, 1), {(0, 1): 1})
    assert longest_root_shift(m, 1).dims == (2, 2)
    with pytest.raises(InvalidInputError):
        longest_root_shift(m, -2)


def test_components_of_small_examples():
    assert sorted(o.codim for o in enumerate_components((2, 2, 2), 0)) == [3, 4, 4]
    assert [o.codim for o in enumerate_components((2, 3, 2), 0)] == [4, 4]
    assert [o.codim for o in enumerate_components((2, 4, 2), 0)] == [4]


def test_components_dominated_by_every_orbit_pattern():
    # every orbit in the closure lies below one of the components
    for d, r in [((2, 2, 2), 0), ((2, 3, 2), 1), ((1, 2, 2, 1), 0), ((3, 2, 3), 1)]:
        comps = [o.rank for o in enumerate_components(d, r)]
        for m in enumerate_kostant_partitions(d):
            rank = kostant_to_rank(m)
            if rank.top <= r:
                assert any(rank <= c for c in comps)
        for a in comps:
            assert not any(a <= b for b in comps if b != a)


def test_component_range_errors():
    with pytest.raises(InvalidInputError):
        enumerate_components((2, 2, 2), 3)
    with pytest.raises(InvalidInputError):
        top_components_bruteforce((2, 2, 2), -1)


def test_top_components_bruteforce():
    rep = top_components_bruteforce((3, 3, 3), 0)
    assert (rep.C, rep.theta) == (7, 2)
    assert len(rep.witnesses) == 2
    assert all(w.codim == 7 and w.top_rank == 0 for w in rep.witnesses)
    rep = top_components_bruteforce((3, 0, 3), 0)
    assert (rep.C, rep.theta) == (0, 1)


def test_lace_representatives():
    m = KostantPartition.from_dict((1, 1), {(0, 1): 1})
    assert lace_representative(m).matrices[0].tolist() == [[1]]
    for d in [(2, 2, 3), (2, 2, 2), (1, 2, 1), (3, 1, 2, 2)]:
        for m in enumerate_kostant_partitions(d):
            diagram = lace_diagram(m)
            assert diagram.kostant() == m
            assert rank_pattern_of(diagram.matrices()) == kostant_to_rank(m)


def test_horizontal_lace_diagrams():
    with pytest.raises(InvalidInputError):
        horizontal_lace_diagram(KostantPartition.from_dict((1, 2, 1), {(0, 1): 1, (1, 2): 1}))
    block = KostantPartition.from_dict((3, 3, 3), {(0, 2): 3})
    diagram = horizontal_lace_diagram(block)
    assert diagram.is_horizontal() and len(diagram.laces) == 3
    for d in [(2, 2, 3), (1, 2, 3), (1, 1, 2, 2)]:
        for m in enumerate_kostant_partitions(d):
            diagram = horizontal_lace_diagram(m)
            assert diagram.is_horizontal()
            assert diagram.kostant() == m
            assert rank_pattern_of(diagram.matrices()) == kostant_to_rank(m)


def test_rank_pattern_of_explicit_tuples():
    zero = MatrixTuple.from_lists([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert rank_pattern_of(zero).rows() == [(2, 0, 0), (2, 0), (2,)]
    ident = MatrixTuple.from_lists([[[1, 0], [0, 1]], [[1, 0], [0, 1]]])
    assert rank_pattern_of(ident).rows() == [(2, 2, 2), (2, 2), (2,)]
    t = MatrixTuple.from_lists([[[1, 2], [2, 4]], [[0, 1], [1, 0]]])
    assert rank_pattern_of(t).rows() == [(2, 1, 1), (2, 2), (2,)]
    with pytest.raises(InvalidInputError):
        MatrixTuple.from_lists([[[1, 0]], [[1, 0]]])


def test_rank_patterns_of_random_integer_tuples():
    rng = np.random.default_rng(7)
    for _ in range(30):
        d = tuple(int(x) for x in rng.integers(1, 4, size=3))
        mats = [rng.integers(-1, 2, size=(d[k + 1], d[k])).tolist() for k in range(2)]
        r = rank_pattern_of(MatrixTuple.from_lists(mats))
        # the orbit of a generic tuple always has a valid rank pattern
        assert is_orbit_rank_pattern(r)
        for i, j in product(range(3), repeat=2):
            if i < j:
                prod = np.eye(d[i], dtype=np.int64)
                for k in range(i, j):
                    prod = np.array(mats[k]) @ prod
                assert r[i, j] == np.linalg.matrix_rank(prod)
