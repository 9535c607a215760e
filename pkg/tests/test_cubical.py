import math

import numpy as np
import pytest

from phkit.barcode import Barcode
from phkit.cubical import (ImageGrid, build_cubical, cubical_boundary, format_image, image_barcode,
                           parse_image, read_image)
from phkit.errors import PHError, UnsupportedDim

INF = math.inf
G = np.array([[115, 119, 119, 119, 119],
              [115, 94, 94, 94, 114],
              [115, 94, 139, 100, 114],
              [115, 94, 99, 99, 114],
              [115, 117, 117, 117, 117]], dtype=float)


def img(a):
    return ImageGrid.from_array(a)


def test_single_pixel():
    K = build_cubical(img([[3.5]]))
    assert len(K) == 1 and K.values[0] == 3.5


def test_constant_square():
    K = build_cubical(img(np.full((2, 2), 7.0)))
    assert K.counts() == [4, 4, 1]
    assert np.all(K.values == 7.0)
    assert image_barcode(img(np.full((2, 2), 7.0))) == Barcode.from_intervals([(0, 7.0, INF)])


def test_figure_grid_counts_and_barcode(data_dir):
    K = build_cubical(img(G))
    assert K.counts() == [25, 40, 16]
    assert K.values.min() == 94
    bc = image_barcode(read_image(data_dir / "fig2.img"))
    assert bc == Barcode.from_intervals([(0, 94, INF), (1, 100, 139)])


def test_ring_around_centre():
    a = np.zeros((3, 3))
    a[1, 1] = 9
    assert image_barcode(img(a)) == Barcode.from_intervals([(0, 0, INF), (1, 0, 9)])


def test_cell_values_are_vertex_maxima():
    rng = np.random.default_rng(0)
    a = rng.random((4, 5))
    K = build_cubical(img(a))
    for c in K:
        ranges = [range(x, x + (1 if ax in c.extent else 0) + 1) for ax, x in enumerate(c.anchor)]
        corners = [a[i, j] for i in ranges[0] for j in ranges[1]]
        assert c.value == max(corners)


def test_boundary_sizes_and_square_zero():
    K = build_cubical(img(np.random.default_rng(1).random((3, 3, 3))))
    B = cubical_boundary(K)
    assert np.array_equal(B.column_sizes(), 2 * K.dims)
    D = B.to_dense().astype(np.int64)
    assert not ((D @ D) % 2).any()
    for j, col in enumerate(B.columns):
        assert all(i < j for i in col)
    assert K.counts() == [27, 54, 36, 8]


def test_order_value_dim_anchor():
    K = build_cubical(img(np.random.default_rng(2).integers(0, 3, (4, 4)).astype(float)))
    keys = [(c.value, c.dim, c.anchor) for c in K]
    assert keys == sorted(keys)


def test_unsupported_dims():
    with pytest.raises(UnsupportedDim):
        build_cubical(ImageGrid((5,), np.zeros(5)))
    with pytest.raises(UnsupportedDim):
        build_cubical(ImageGrid((2, 2, 2, 2), np.zeros(16)))
    with pytest.raises(PHError):
        ImageGrid((2, 2), np.zeros(3))


def test_shift_and_monotone_relabel():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 20, (5, 6)).astype(float)
    base = image_barcode(img(a))
    shifted = image_barcode(img(a + 2.5))
    assert np.array_equal(shifted.births, base.births + 2.5)
    assert np.array_equal(shifted.deaths, base.deaths + 2.5)
    phi = lambda x: x ** 3 + x
    mapped = image_barcode(img(phi(a)))
    assert np.array_equal(mapped.births, phi(base.births))
    assert np.array_equal(mapped.deaths, phi(base.deaths))


def test_one_essential_component():
    rng = np.random.default_rng(4)
    for shape in [(3, 7), (4, 4, 3)]:
        assert image_barcode(img(rng.random(shape))).count_infinite(0) == 1


def test_image_file_round_trip(tmp_path):
    im = img(np.random.default_rng(5).random((2, 3, 4)))
    back = parse_image(format_image(im))
    assert back.dims == im.dims and np.array_equal(back.values, im.values)
    with pytest.raises(PHError):
        parse_image("2\n3\n")
