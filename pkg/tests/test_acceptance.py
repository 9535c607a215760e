"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line, printed in
the terminal summary under "acceptance criteria"."""

import itertools
import math
import statistics
import time

import numpy as np
import pytest

from conftest import record
from oracles import brute_distance, oracle_barcode, random_filtered_complex
from phkit.barcode import Barcode
from phkit.bench import run_cell
from phkit.builders import MetricInput, build_cech, build_rips, cech_value
from phkit.complex import boundary_matrix, euler_characteristic, make_complex, read_complex
from phkit.cubical import image_barcode, read_image
from phkit.datasets import generate_klein
from phkit.diagrams import bottleneck, from_barcode, wasserstein
from phkit.reduction import (betti_numbers, compute_barcode, extract_barcode, reduce_dual,
                             reduce_standard, reduce_twist)

INF = math.inf
FIG6 = [((1,), 1), ((2,), 2), ((3,), 2), ((1, 2), 2), ((1, 3), 3), ((2, 3), 3), ((1, 2, 3), 4)]


def median_ms(fn, runs=50):
    fn()
    times = []
    for _ in range(runs):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return 1e3 * statistics.median(times)


def check_small_figure(criterion, load, expected):
    results, times = {}, {}
    for alg in ("standard", "twist", "dual"):
        results[alg] = compute_barcode(load(), alg)
        times[alg] = median_ms(lambda: compute_barcode(load(), alg))
    ok = all(b == expected for b in results.values()) and max(times.values()) < 1.0
    record(criterion, ok, f"exact match under all algorithms, slowest median {max(times.values()):.3f} ms")
    assert ok, (results, times)


def test_criterion_1_fig6():
    expected = Barcode.from_intervals([(0, 1, INF), (0, 2, 3), (1, 3, 4)])
    K = make_complex(FIG6)
    zero_pair_dropped = (1, 3) in reduce_standard(boundary_matrix(K)).pair_set()
    assert zero_pair_dropped
    check_small_figure(1, lambda: make_complex(FIG6), expected)


def test_criterion_2_fig4(data_dir):
    text = (data_dir / "fig4.cplx").read_text()
    from phkit.complex import parse_complex
    expected = Barcode.from_intervals([(0, 1, INF), (0, 1, INF), (0, 1, 2), (0, 2, 3), (0, 2, 3),
                                       (1, 2, 3), (1, 3, 4), (1, 3, INF)])
    check_small_figure(2, lambda: parse_complex(text), expected)


def test_criterion_3_fig3(data_dir):
    K = read_complex(data_dir / "fig3.cplx")
    betti = betti_numbers(K)
    chi = euler_characteristic(K)
    ok = betti == [2, 1, 0] and chi == 1 and betti[0] - betti[1] == 1
    record(3, ok, f"betti {betti}, euler characteristic {chi}")
    assert ok


def test_criterion_4_fig2(data_dir):
    bc = image_barcode(read_image(data_dir / "fig2.img"))
    ok = bc == Barcode.from_intervals([(0, 94, INF), (1, 100, 139)])
    record(4, ok, f"{bc}")
    assert ok


# ------------------------------------------------------------------ Klein bottle

@pytest.fixture(scope="session")
def klein_run():
    t0 = time.perf_counter()
    K = build_rips(generate_klein(400, "grid"), 2)
    t1 = time.perf_counter()
    size = len(K)
    bc = compute_barcode(K, "dual")
    t2 = time.perf_counter()
    del K
    return {"size": size, "barcode": bc, "build_s": t1 - t0, "reduce_s": t2 - t1}


@pytest.mark.slow
def test_criterion_5_sizes(klein_run):
    uniform = run_cell({"dataset": {"kind": "uniform", "N": 50, "d": 16}, "complex": "rips", "max_dim": 8})
    total = klein_run["build_s"] + klein_run["reduce_s"]
    ok = klein_run["size"] == 10_667_000 and uniform.size == 3_160_457_385 and total <= 600
    record(5, ok, f"Klein size {klein_run['size']}, uniform(50,16) dim 8 analytic size {uniform.size}, "
                  f"build {klein_run['build_s']:.1f} s + reduce {klein_run['reduce_s']:.1f} s")
    assert ok


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the figure-8 immersion glues v=0 to v=pi; see the decisions ledger")
def test_criterion_6_klein_h1(klein_run):
    h1 = np.sort(klein_run["barcode"].restrict(1).persistence())[::-1]
    third = h1[2] if len(h1) > 2 else 0.0
    long = int(np.sum(h1 >= 3 * third)) if third > 0 else len(h1)
    ok = long == 2
    record(6, ok, f"{long} degree-1 intervals reach 3x the third-longest; "
                  f"top persistences {np.round(h1[:4], 4).tolist()}")
    assert ok


# ------------------------------------------------------------------ random suites

def test_criterion_7_algorithm_equivalence():
    rng = np.random.default_rng(20240607)
    t0 = time.perf_counter()
    mismatches = oracle_checked = 0
    for trial in range(500):
        # every other complex is kept within the oracle's size range
        simplices = random_filtered_complex(rng, max_size=25 if trial % 2 else 60, max_dim=3)
        K = make_complex(simplices)
        B = boundary_matrix(K)
        states = [reduce_standard(B), reduce_twist(B, K.dims), reduce_dual(B, K.dims)]
        ref = states[0].pair_set()
        ess = states[0].essentials.tolist()
        if any(s.pair_set() != ref or s.essentials.tolist() != ess for s in states):
            mismatches += 1
            continue
        if len(K) <= 25:
            oracle_checked += 1
            got = {}
            for iv in extract_barcode(states[0], K):
                got[iv] = got.get(iv, 0) + 1
            if got != dict(oracle_barcode(simplices)):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed <= 60 and oracle_checked >= 200
    record(7, ok, f"500 complexes, {oracle_checked} oracle-checked, {mismatches} mismatches, {elapsed:.1f} s")
    assert ok


def _random_diagram(rng):
    k = int(rng.integers(0, 6))
    b = rng.random(k) * 4
    d = b + rng.random(k) * 3
    return list(zip(b.tolist(), d.tolist()))


def test_criterion_8_diagram_distances():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    bad = []
    for trial in range(500):
        X, Y, Z = _random_diagram(rng), _random_diagram(rng), _random_diagram(rng)
        e = int(rng.integers(0, 3))
        ess = lambda: [(float(v), INF) for v in rng.random(e) * 4]
        X, Y, Z = X + ess(), Y + ess(), Z + ess()
        bxy = bottleneck(X, Y)
        if abs(bxy - brute_distance(X, Y, INF)) > 1e-9:
            bad.append(("bottleneck", trial))
        for p in (1, 2):
            wxy = wasserstein(X, Y, p)
            if abs(wxy - brute_distance(X, Y, p)) > 1e-9:
                bad.append((f"W{p}", trial))
            if wxy != wasserstein(Y, X, p):
                bad.append((f"W{p} symmetry", trial))
            if wxy > wasserstein(X, Z, p) + wasserstein(Z, Y, p) + 1e-9:
                bad.append((f"W{p} triangle", trial))
            if bxy > wxy + 1e-9:
                bad.append(("bottleneck above W_p", trial))
        if bxy != bottleneck(Y, X):
            bad.append(("symmetry", trial))
        if bxy > bottleneck(X, Z) + bottleneck(Z, Y) + 1e-9:
            bad.append(("triangle", trial))
        if bottleneck(X, X) != 0 or wasserstein(X, X, 1) != 0:
            bad.append(("identity", trial))
        if sorted(X) != sorted(Y) and bxy == 0 and any(b < d for b, d in X + Y):
            bad.append(("indiscernibles", trial))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed <= 60
    record(8, ok, f"500 diagram pairs, {len(bad)} violations, {elapsed:.1f} s")
    assert ok, bad[:10]


def test_criterion_9_stability():
    rng = np.random.default_rng(9)
    eta = 0.05
    worst = 0.0
    violations = 0
    for _ in range(100):
        P = rng.random((30, 2))
        D = MetricInput.from_points(P).dist
        E = rng.uniform(-eta, eta, D.shape)
        E = np.triu(E, 1)
        D2 = np.maximum(D + E + E.T, 0.0)
        np.fill_diagonal(D2, 0.0)
        assert np.abs(D2 - D).max() <= eta
        b1 = compute_barcode(build_rips(MetricInput.from_distance(D), 2))
        b2 = compute_barcode(build_rips(MetricInput.from_distance(D2), 2))
        for p in (0, 1):
            d = bottleneck(from_barcode(b1, p), from_barcode(b2, p))
            worst = max(worst, d)
            if d > eta + 1e-9:
                violations += 1
    ok = violations == 0
    record(9, ok, f"100 trials, {violations} violations, largest bottleneck {worst:.4f} (eta {eta})")
    assert ok


def test_criterion_10_cech_rips_sandwich():
    rng = np.random.default_rng(10)
    bad = 0
    for _ in range(200):
        d = int(rng.integers(1, 7))
        k = int(rng.integers(2, 9))
        S = rng.normal(size=(k, d))
        diam = MetricInput.from_points(S).dist.max()
        c = cech_value(S)
        if not (diam - 1e-12 <= c <= math.sqrt(2) * diam + 1e-9):
            bad += 1
    contain = 0
    for _ in range(20):
        P = rng.random((10, int(rng.integers(2, 4))))
        C = build_cech(P, 3).as_dict()
        V = build_rips(P, 3).as_dict()
        for t in sorted(set(C.values()) | set(V.values())):
            c_t = {s for s, v in C.items() if v <= t}
            v_t = {s for s, v in V.items() if v <= t}
            c_wide = {s for s, v in C.items() if v <= math.sqrt(2) * t + 1e-9}
            if not (c_t <= v_t <= c_wide):
                contain += 1
    ok = bad == 0 and contain == 0
    record(10, ok, f"200 random simplices, {bad} value violations; 20 clouds, {contain} containment violations")
    assert ok
