"""Benchmark model generators and the timing/memory harness.

Both generator families share the objective "whenever the final
location is reached, at least k*k time units have passed", guarded by
a budget-1 blocker.  The pipeline is a single chain whose guards make
the first arrival at the last location take exactly k*k time units;
the mesh is a complete digraph where the blocker must keep
deactivating the one edge into the final location until enough time
has accumulated.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
import tracemalloc
from dataclasses import dataclass

from .checker import check
from .logic import TolFormula, parse_formula
from .model import ClockConstraint, Edge, Location, Wta

CSV_HEADER = ["case", "k", "runtime_ms_mean", "runtime_ms_std",
              "mem_kb_mean", "mem_kb_std", "verdict"]
PAPER_SIZES = (4, 12, 16, 22, 30)


def gen_pipeline(k: int) -> tuple[Wta, TolFormula]:
    """Chain s0..s(k-1) with k edges (the last location loops).

    Chain guards are x >= k except the final hop at x >= 2k, so the
    k-1 hops take at least (k-2)*k + 2k = k*k time units and the bound
    in the objective is tight.
    """
    if k < 2:
        raise ValueError("pipeline needs k >= 2")
    locations = tuple(Location(f"s{i}", (), frozenset({f"s{i}"})) for i in range(k))
    edges = []
    for i in range(k - 1):
        bound = 2 * k if i == k - 2 else k
        edges.append(Edge(f"s{i}", f"step{i}", (ClockConstraint("x", ">=", bound),),
                          frozenset({"x"}), f"s{i + 1}", 1))
    edges.append(Edge(f"s{k - 1}", "stay", (ClockConstraint("x", ">=", k),),
                      frozenset({"x"}), f"s{k - 1}", 1))
    m = Wta(("x",), locations, "s0", tuple(edges))
    f = parse_formula(f"j . <#1> G (s{k - 1} -> j >= {k * k})")
    return m, f


def gen_mesh(k: int) -> tuple[Wta, TolFormula]:
    """Complete digraph on k locations, every hop takes at least one unit."""
    if k < 2:
        raise ValueError("mesh needs k >= 2")
    locations = tuple(Location(f"s{i}", (), frozenset({f"s{i}"})) for i in range(k))
    edges = []
    for i in range(k):
        for j in range(k):
            if i != j:
                edges.append(Edge(f"s{i}", f"m{i}_{j}",
                                  (ClockConstraint("x", ">=", 1),),
                                  frozenset({"x"}), f"s{j}", 1))
    m = Wta(("x",), locations, "s0", tuple(edges))
    f = parse_formula(f"j . <#1> G (s{k - 1} -> j >= {k * k})")
    return m, f


GENERATORS = {"pipeline": gen_pipeline, "mesh": gen_mesh}


@dataclass
class BenchResult:
    case: str
    k: int
    runtime_ms_mean: float
    runtime_ms_std: float
    mem_kb_mean: float
    mem_kb_std: float
    verdict: object  # bool, or the string "error"

    def row(self) -> list:
        verdict = self.verdict if isinstance(self.verdict, str) \
            else ("SAT" if self.verdict else "UNSAT")
        return [self.case, self.k,
                f"{self.runtime_ms_mean:.3f}", f"{self.runtime_ms_std:.3f}",
                f"{self.mem_kb_mean:.3f}", f"{self.mem_kb_std:.3f}", verdict]


def bench_row(case: str, k: int, runs: int = 5) -> BenchResult:
    """Mean/stdev of wall time and peak traced allocation over `runs` runs."""
    if runs < 1:
        raise ValueError("need at least one run")
    gen = GENERATORS[case]
    try:
        m, f = gen(k)
        times, mems = [], []
        verdicts = set()
        for _ in range(runs):
            tracemalloc.start()
            t0 = time.perf_counter()
            verdict = check(m, f)
            elapsed = (time.perf_counter() - t0) * 1000.0
            peak = tracemalloc.get_traced_memory()[1]
            tracemalloc.stop()
            times.append(elapsed)
            mems.append(peak / 1024.0)
            verdicts.add(verdict.satisfied)
        assert len(verdicts) == 1, "verdict must not vary across runs"
        return BenchResult(case, k,
                           statistics.fmean(times),
                           statistics.stdev(times) if runs > 1 else 0.0,
                           statistics.fmean(mems),
                           statistics.stdev(mems) if runs > 1 else 0.0,
                           verdicts.pop())
    except Exception:
        if tracemalloc.is_tracing():
            tracemalloc.stop()
        return BenchResult(case, k, 0.0, 0.0, 0.0, 0.0, "error")


def run_bench(cases, ks, runs: int = 5, parallel: bool = False) -> list[BenchResult]:
    jobs = [(case, k) for case in cases for k in ks]
    if parallel:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor() as pool:
            return list(pool.map(_bench_job, [(c, k, runs) for c, k in jobs]))
    return [bench_row(c, k, runs) for c, k in jobs]


def _bench_job(args) -> BenchResult:
    case, k, runs = args
    return bench_row(case, k, runs)


def write_csv(results, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in results:
            w.writerow(r.row())


def write_jsonl(results, path) -> None:
    with open(path, "w") as fh:
        for r in results:
            fh.write(json.dumps(r.__dict__) + "\n")
