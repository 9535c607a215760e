import math
import re

import numpy as np
import pytest

from oracles import brute_distance
from phkit.barcode import Barcode
from phkit.complex import make_complex, read_complex
from phkit.diagrams import PersistenceDiagram, bottleneck, emit_svg, from_barcode, wasserstein
from phkit.errors import BadP
from phkit.reduction import compute_barcode

INF = math.inf
FIG6 = [((1,), 1), ((2,), 2), ((3,), 2), ((1, 2), 2), ((1, 3), 3), ((2, 3), 3), ((1, 2, 3), 4)]


def random_diagram(rng, max_points=5, essentials=0):
    k = int(rng.integers(0, max_points + 1))
    b = rng.integers(0, 10, k) / 2.0
    d = b + rng.integers(0, 8, k) / 2.0
    pts = list(zip(b.tolist(), d.tolist()))
    pts += [(float(rng.integers(0, 6)), INF) for _ in range(essentials)]
    return pts


def test_from_barcode(data_dir):
    b = compute_barcode(read_complex(data_dir / "fig4.cplx"))
    assert sorted(from_barcode(b, 1).points) == [(2, 3), (3, 4), (3, INF)]
    assert len(from_barcode(Barcode(), 0)) == 0
    assert sorted(from_barcode(compute_barcode(make_complex(FIG6)), 0).points) == [(1, INF), (2, 3)]


def test_spec_examples():
    X = [(0, 4), (1, 3)]
    assert bottleneck(X, X) == 0
    assert bottleneck([(0, 2)], []) == 1
    assert bottleneck(X, [(0, 4)]) == 1
    assert wasserstein(X, X, 2) == 0
    assert wasserstein([(0, 2)], [], 1) == 1
    assert wasserstein([(0, 2), (0, 4)], [(0, 4)], 2) == pytest.approx(1.0)


def test_essentials():
    assert bottleneck([(0, INF)], []) == INF
    assert wasserstein([(0, INF)], [(1, INF), (2, INF)], 1) == INF
    assert bottleneck([(0, INF), (5, INF)], [(4, INF), (1, INF)]) == 1
    assert wasserstein([(0, INF), (5, INF)], [(4, INF), (1, INF)], 1) == 2


def test_bad_p():
    with pytest.raises(BadP):
        wasserstein([], [], 0.5)


def test_oracle_agreement_small():
    rng = np.random.default_rng(99)
    for _ in range(60):
        X, Y = random_diagram(rng), random_diagram(rng)
        e = int(rng.integers(0, 3))
        X += [(float(v), INF) for v in rng.integers(0, 5, e)]
        Y += [(float(v), INF) for v in rng.integers(0, 5, e)]
        assert bottleneck(X, Y) == pytest.approx(brute_distance(X, Y, INF), abs=1e-9)
        for p in (1, 2):
            assert wasserstein(X, Y, p) == pytest.approx(brute_distance(X, Y, p), abs=1e-9)
        assert wasserstein(X, Y, 1, q=2) == pytest.approx(brute_distance(X, Y, 1, 2), abs=1e-9)


def test_high_p_approaches_bottleneck():
    # with N matched pairs, W_inf <= W_p <= N^(1/p) W_inf
    rng = np.random.default_rng(7)
    for _ in range(40):
        X, Y = random_diagram(rng, 4), random_diagram(rng, 4)
        w_inf = bottleneck(X, Y)
        assert w_inf <= wasserstein(X, Y, 1) + 1e-12
        n = max(len(X) + len(Y), 1)
        w64 = wasserstein(X, Y, 64)
        assert w_inf - 1e-9 <= w64 <= n ** (1 / 64) * w_inf + 1e-9
    # a single dominant displacement gives agreement to 1e-6
    assert wasserstein([(0, 10), (0, 0.5)], [], 64) == pytest.approx(5.0, abs=1e-6)


def test_diagonal_points_are_free():
    assert bottleneck([(1, 1), (2, 2)], []) == 0
    assert wasserstein([(1, 1)], [(3, 3)], 2) == 0


def test_emit_svg_counts(tmp_path):
    empty = tmp_path / "e.svg"
    emit_svg(Barcode(), empty)
    text = empty.read_text()
    assert text.startswith("<svg") and 'class="bar"' not in text and 'class="axis"' in text
    fig = tmp_path / "f.svg"
    emit_svg(compute_barcode(make_complex(FIG6)), fig)
    text = fig.read_text()
    assert len(re.findall(r'class="bar"', text)) == 3
    assert len(re.findall(r'class="arrow"', text)) == 1
    dg = tmp_path / "d.svg"
    emit_svg(PersistenceDiagram.from_points([(1.0, 2.0)]), dg)
    assert len(re.findall(r'<circle class="point"', dg.read_text())) == 1
    again = tmp_path / "f2.svg"
    emit_svg(compute_barcode(make_complex(FIG6)), again)
    assert again.read_text() == text
