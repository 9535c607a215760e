"""Benchmark harness: build and reduce a grid of (dataset, complex, algorithm)
cells and write one CSV row per cell.

Each repeat runs in a freshly spawned process, so the peak resident set size
reported by ``getrusage`` belongs to that repeat alone.  Full-scale Rips cells
have an analytic size; cells whose size exceeds the cap are not built and
report ``-`` in the timing columns.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import multiprocessing as mp
import resource
import sys
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

HEADER = ["dataset", "complex", "max_dim", "size", "algorithm", "wall_s", "cpu_s", "peak_mem_bytes"]
DEFAULT_CAP = 200_000_000
MEMORY_METHOD = "getrusage ru_maxrss of a spawned child process"


@dataclass
class BenchRecord:
    dataset: str
    complex: str
    max_dim: int
    size: int | None
    algorithm: str
    wall_s: float | None = None
    cpu_s: float | None = None
    peak_mem_bytes: int | None = None

    def row(self) -> list[str]:
        def cell(x, fmt):
            return "-" if x is None else fmt(x)
        return [self.dataset, self.complex, str(self.max_dim), cell(self.size, str), self.algorithm,
                cell(self.wall_s, lambda v: f"{v:.6f}"), cell(self.cpu_s, lambda v: f"{v:.6f}"),
                cell(self.peak_mem_bytes, str)]


def full_rips_size(n_points: int, max_dim: int) -> int:
    """Simplex count of the full-scale Rips complex: every subset of at most
    ``max_dim + 1`` points."""
    return sum(math.comb(n_points, k) for k in range(1, max_dim + 2))


# ------------------------------------------------------------------ datasets

def load_dataset(spec: dict[str, Any]):
    """Return ``("points" | "graph" | "image", data)`` for a dataset entry."""
    from . import datasets as ds
    from .builders import read_distance_matrix, read_edge_list, read_points
    from .cubical import read_image
    kind = spec["kind"]
    seed = int(spec.get("seed", 0))
    if kind == "klein":
        return "points", ds.generate_klein(int(spec.get("n", 400)), spec.get("mode", "grid"), seed)
    if kind == "uniform":
        return "points", ds.generate_uniform(int(spec.get("N", 50)), int(spec.get("d", 16)), seed)
    if kind == "vicsek":
        keys = {k: spec[k] for k in ("l", "v0", "N", "eta", "T", "r", "init", "theta0") if k in spec}
        p = ds.VicsekParams(**keys)
        return "points", ds.generate_vicsek(p, seed, [int(spec.get("frame", p.T))])[0]
    if kind == "fractal":
        keys = {k: spec[k] for k in ("b", "n", "k", "weighting") if k in spec}
        return "graph", ds.generate_fractal(ds.FractalParams(**keys), seed)
    if kind == "points":
        return "points", read_points(spec["path"])
    if kind == "distance":
        return "points", read_distance_matrix(spec["path"])
    if kind == "edges":
        return "graph", read_edge_list(spec["path"])
    if kind == "image":
        return "image", read_image(spec["path"])
    raise ValueError(f"unknown dataset kind {kind!r}")


def dataset_size(spec: dict[str, Any]) -> int | None:
    kind = spec["kind"]
    if kind == "klein":
        return int(spec.get("n", 400))
    if kind == "uniform":
        return int(spec.get("N", 50))
    if kind == "vicsek":
        return int(spec.get("N", 300))
    return None


def analytic_size(cell: dict[str, Any]) -> int | None:
    if cell.get("complex", "rips") != "rips" or cell.get("max_scale") not in (None, "inf", math.inf):
        return None
    n = dataset_size(cell["dataset"])
    return None if n is None else full_rips_size(n, int(cell.get("max_dim", 1)))


def build_complex(cell: dict[str, Any]):
    from . import builders as b
    from .cubical import build_cubical
    what, data = load_dataset(cell["dataset"])
    kind = cell.get("complex", "rips")
    max_dim = int(cell.get("max_dim", 1))
    scale = cell.get("max_scale")
    scale = math.inf if scale in (None, "inf") else float(scale)
    cap = int(cell.get("cap", DEFAULT_CAP))
    if kind == "cubical":
        return build_cubical(data)
    if kind == "wrcf":
        return b.build_wrcf(data, max_dim)
    m = b.graph_to_metric(data, cell.get("metric_mode", "inverse")) if what == "graph" else b.as_metric(data)
    if kind == "rips":
        return b.build_rips(m, max_dim, scale, cap=cap)
    if kind == "cech":
        return b.build_cech(m, max_dim, scale)
    if kind == "witness":
        L = b.maxmin_landmarks(m, int(cell.get("landmarks", max(1, m.n // 10))), int(cell.get("seed", 0)))
        nu = cell.get("nu")
        if nu is None:
            return b.build_weak_witness(m, L, max_dim, scale)
        return b.build_parametrized_witness(m, L, int(nu), max_dim, scale)
    raise ValueError(f"unknown complex type {kind!r}")


# ------------------------------------------------------------------ cells

def _child(cell: dict[str, Any], conn) -> None:
    try:
        from .reduction import compute_barcode
        w0, c0 = time.perf_counter(), time.process_time()
        K = build_complex(cell)
        compute_barcode(K, cell.get("algorithm", "twist"))
        wall, cpu = time.perf_counter() - w0, time.process_time() - c0
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        # ru_maxrss is in kilobytes on Linux, bytes on macOS
        peak_bytes = peak if sys.platform == "darwin" else peak * 1024
        conn.send(("ok", len(K), wall, cpu, peak_bytes))
    except BaseException as exc:  # report every failure, including MemoryError
        conn.send(("error", f"{type(exc).__name__}: {exc}", traceback.format_exc()))
    finally:
        conn.close()


def _run_once(cell: dict[str, Any], timeout: float | None):
    ctx = mp.get_context("spawn")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(cell, send))
    proc.start()
    send.close()
    msg = None
    if recv.poll(timeout):
        try:
            msg = recv.recv()
        except EOFError:
            msg = None
    proc.join(5 if msg is not None else 0)
    if proc.is_alive():
        proc.kill()
        proc.join()
    if msg is None:
        return ("error", f"worker exited with code {proc.exitcode}", "")
    return msg


def run_cell(cell: dict[str, Any], repeats: int = 3, cap: int = DEFAULT_CAP,
             timeout: float | None = None) -> BenchRecord:
    ds = cell["dataset"]
    rec = BenchRecord(cell.get("name", ds.get("name", ds["kind"])), cell.get("complex", "rips"),
                      int(cell.get("max_dim", 1)), analytic_size(cell), cell.get("algorithm", "twist"))
    if rec.size is not None and rec.size > cap:
        log.info("%s/%s dim %d: analytic size %d exceeds cap %d, build skipped",
                 rec.dataset, rec.complex, rec.max_dim, rec.size, cap)
        return rec
    cell = dict(cell, cap=cap)
    walls, cpus, peaks = [], [], []
    for _ in range(max(1, repeats)):
        msg = _run_once(cell, timeout)
        if msg[0] != "ok":
            log.warning("%s/%s failed: %s", rec.dataset, rec.complex, msg[1])
            return rec
        _, size, wall, cpu, peak = msg
        if rec.size is not None and size != rec.size:
            log.error("%s: built %d simplices, analytic count is %d", rec.dataset, size, rec.size)
        rec.size = size
        walls.append(wall)
        cpus.append(cpu)
        peaks.append(peak)
    rec.wall_s = sum(walls) / len(walls)
    rec.cpu_s = sum(cpus) / len(cpus)
    rec.peak_mem_bytes = int(round(sum(peaks) / len(peaks)))
    return rec


def load_config(path) -> dict[str, Any]:
    text = Path(path).read_text().strip()
    return json.loads(text) if text else {}


def bench_suite(config: dict[str, Any], parallel: bool = False) -> list[BenchRecord]:
    cells = config.get("cells", [])
    repeats = int(config.get("repeats", 3))
    cap = int(float(config.get("cap", DEFAULT_CAP)))
    timeout = config.get("timeout")
    log.info("peak memory method: %s", MEMORY_METHOD)
    run = lambda c: run_cell(c, repeats, cap, timeout)
    if parallel and len(cells) > 1:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]


def format_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()
