import itertools

import numpy as np
import pytest

from phkit.complex import (FilteredComplex, Simplex, boundary_matrix, close, euler_characteristic,
                           format_complex, make_complex, parse_complex, read_complex, simplex_rank)
from phkit.errors import MissingFace, NonMonotone, PHError

FIG6 = [((1,), 1), ((2,), 2), ((3,), 2), ((1, 2), 2), ((1, 3), 3), ((2, 3), 3), ((1, 2, 3), 4)]


def f2_product_is_zero(B):
    D = B.to_dense().astype(np.int64)
    return not ((D @ D) % 2).any()


def test_simplex_validation():
    assert Simplex.of([3, 1, 2]).vertices == (1, 2, 3)
    assert Simplex.of([0, 4]).dim == 1
    with pytest.raises(PHError):
        Simplex.of([])
    with pytest.raises(PHError):
        Simplex.of([1, 1])
    with pytest.raises(PHError):
        Simplex.of([-1, 2])


def test_fig6_order_and_boundary():
    K = make_complex(FIG6)
    assert [s.vertices for s, _ in K] == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]
    B = boundary_matrix(K)
    # columns 4..7 of the printed matrix, zero-based here
    assert B.columns == [[], [], [], [0, 1], [0, 2], [1, 2], [3, 4, 5]]


def test_single_vertex_and_missing_face():
    assert len(make_complex([((0,), 0.0)])) == 1
    with pytest.raises(MissingFace):
        make_complex([((0,), 0.0), ((0, 1), 1.0)])
    with pytest.raises(NonMonotone):
        make_complex([((0,), 2.0), ((1,), 0.0), ((0, 1), 1.0)])
    with pytest.raises(PHError):
        make_complex([])
    with pytest.raises(PHError):
        make_complex([((0,), float("nan"))])


def test_isolated_vertices_have_empty_columns():
    B = boundary_matrix(make_complex([((i,), 0.0) for i in range(3)]))
    assert B.columns == [[], [], []]


def test_fig3_blocks_and_euler(data_dir):
    K = read_complex(data_dir / "fig3.cplx")
    assert K.counts() == [5, 5, 1]
    B = boundary_matrix(K).to_dense()
    tri = K.index_of((0, 1, 2))
    edges = [K.index_of(e) for e in [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]]
    # the triangle abc has faces ab, ac, bc: (1 1 0 1 0) in the edge order ab, ac, ad, bc, cd
    assert B[edges, tri].tolist() == [1, 1, 0, 1, 0]
    assert euler_characteristic(K) == 1


def test_euler_small_cases():
    assert euler_characteristic(make_complex([((0,), 0)])) == 1
    hollow = [((i,), 0) for i in range(3)] + [(e, 0) for e in itertools.combinations(range(3), 2)]
    assert euler_characteristic(make_complex(hollow)) == 0


def test_close_fills_faces_with_min_of_cofaces():
    K = close([((0, 1, 2), 3.0), ((0, 1), 1.0), ((2, 3), 2.0)])
    assert K.value_of((0, 1)) == 1.0
    assert K.value_of((0,)) == 1.0
    assert K.value_of((2,)) == 2.0
    assert K.value_of((1, 2)) == 3.0
    assert K.counts() == [4, 4, 1]


def test_text_round_trip(tmp_path):
    K = make_complex(FIG6)
    text = format_complex(K)
    assert parse_complex(text).as_dict() == K.as_dict()
    shuffled = "\n".join(reversed(text.splitlines())) + "\n# trailing comment\n"
    assert parse_complex(shuffled).as_dict() == K.as_dict()
    with pytest.raises(PHError):
        parse_complex("1 0 1\n")


def test_rank_is_combinatorial_number_system():
    # all 3-subsets of range(7) get ranks 0..C(7,3)-1 in colex order
    subsets = list(itertools.combinations(range(7), 3))
    ranks = simplex_rank(np.array(subsets))
    assert sorted(ranks.tolist()) == list(range(35))
    colex = sorted(subsets, key=lambda s: s[::-1])
    assert [simplex_rank(list(s)) for s in colex] == list(range(35))


def test_large_vertex_ids_use_fallback_index():
    big = 2 ** 40
    K = make_complex([((big,), 0), ((big + 7,), 0), ((big, big + 7), 1)])
    assert boundary_matrix(K).columns[2] == [0, 1]


def test_boundary_squares_to_zero_and_column_sizes():
    K = make_complex([(s, 0) for k in range(1, 5) for s in itertools.combinations(range(5), k)])
    B = boundary_matrix(K)
    assert f2_product_is_zero(B)
    assert np.array_equal(B.column_sizes(), np.where(K.dims > 0, K.dims + 1, 0))


def test_order_is_a_filtration_order():
    K = make_complex([((0,), 0), ((1,), 0), ((2,), 1), ((0, 1), 0), ((0, 2), 2), ((1, 2), 2), ((0, 1, 2), 2)])
    B = boundary_matrix(K)
    for j, col in enumerate(B.columns):
        for i in col:
            assert i < j and K.values[i] <= K.values[j]
    assert isinstance(K, FilteredComplex)
