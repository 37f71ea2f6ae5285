"""Approximate all-pairs shortest paths answered from a spanner alone.

Build a near-linear-size spanner once, then compute every pairwise
distance on the spanner subgraph.  The exact oracle is repeated Dijkstra,
which is adequate at the guarded instance sizes; comparing the two
matrices measures the realized approximation factor.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import DomainError, WeightedGraph
from .oracles import _dijkstra_on, _subgraph_adj
from .spanner import general_spanner, stretch_exponent

EXACT_APSP_GUARD = 2000


def apsp_matrix(g: WeightedGraph, edge_ids: Iterable[int] | None = None) -> np.ndarray:
    """All-pairs distance matrix via one Dijkstra per source; +inf when
    unreachable."""
    adj = _subgraph_adj(g, edge_ids)
    out = np.empty((g.n, g.n), dtype=np.float64)
    for src in range(g.n):
        out[src, :] = _dijkstra_on(adj, src)
    return out


def apsp_on_spanner(g: WeightedGraph, spanner_edges: Iterable[int]) -> np.ndarray:
    """All-pairs distances restricted to the spanner subgraph."""
    eids = list(spanner_edges)
    for eid in eids:
        if not (0 <= eid < g.m):
            raise DomainError(f"spanner edge id {eid} not in graph")
    return apsp_matrix(g, eids)


def coordinator_budget(n: int, factor: float = 8.0) -> float:
    """Reference memory budget factor * n * log2(log2 n) for holding the
    spanner on one coordinator; reported, never enforced."""
    inner = max(2.0, math.log2(max(2, n)))
    return factor * n * math.log2(inner)


def write_distance_csv(matrix: np.ndarray, sink, max_n: int = EXACT_APSP_GUARD) -> None:
    """Dump a distance matrix as CSV (one row per source); size-guarded."""
    n = matrix.shape[0]
    if n > max_n:
        raise DomainError(f"refusing to write a {n}x{n} distance matrix (guard {max_n})")
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_distance_csv(matrix, fh, max_n)
        return
    sink.write(",".join(f"v{j}" for j in range(n)) + "\n")
    for i in range(n):
        sink.write(",".join(repr(float(x)) for x in matrix[i]) + "\n")


@dataclass
class ApspReport:
    """Spanner-vs-exact distance comparison for one run.

    Wall-time fields are measured but kept out of the canonical dict so
    reports from identical seeds stay byte-identical.
    """

    k: int
    t: int
    seed: int
    n: int
    spanner_size: int
    max_ratio: float
    mean_ratio: float
    pairs: int
    memory_budget: float
    build_seconds: float
    query_seconds: float

    def as_dict(self, with_timing: bool = False) -> dict:
        out = {
            "k": self.k,
            "t": self.t,
            "seed": self.seed,
            "n": self.n,
            "spanner_size": self.spanner_size,
            "max_ratio": self.max_ratio,
            "mean_ratio": self.mean_ratio,
            "pairs": self.pairs,
            "memory_budget": self.memory_budget,
            "within_budget": self.spanner_size <= self.memory_budget,
        }
        if with_timing:
            out["timing"] = {"build": self.build_seconds, "query": self.query_seconds}
        return out


def pair_ratios(exact: np.ndarray, approx: np.ndarray) -> tuple[float, float, int]:
    """Max and mean of approx/exact over connected off-diagonal pairs."""
    n = exact.shape[0]
    iu = np.triu_indices(n, k=1)
    e = exact[iu]
    a = approx[iu]
    connected = np.isfinite(e)
    e, a = e[connected], a[connected]
    pairs = int(e.size)
    if pairs == 0:
        return 1.0, 1.0, 0
    ratios = np.empty_like(e)
    zero = e == 0
    ratios[~zero] = a[~zero] / e[~zero]
    ratios[zero] = np.where(a[zero] == 0, 1.0, math.inf)
    return float(ratios.max()), float(ratios.mean()), pairs


def apsp_experiment(g: WeightedGraph, k: int, t: int, seed: int) -> ApspReport:
    """Build a spanner, answer all pairs from it, and report the realized
    approximation factor against exact distances.

    Refuses graphs with more than 2000 vertices: the exact oracle is
    quadratic in memory and this harness targets desk-scale instances.
    The max ratio is asserted against the bound 2*k**s.
    """
    if g.n > EXACT_APSP_GUARD:
        raise DomainError(
            f"exact APSP oracle is guarded at n <= {EXACT_APSP_GUARD}; got n = {g.n}"
        )
    t0 = time.perf_counter()
    build = general_spanner(g, k, t, seed)
    t1 = time.perf_counter()
    exact = apsp_matrix(g)
    approx = apsp_matrix(g, build.spanner_edges)
    t2 = time.perf_counter()

    max_ratio, mean_ratio, pairs = pair_ratios(exact, approx)
    bound = 2 * k ** stretch_exponent(t)
    assert max_ratio <= bound, f"APSP ratio {max_ratio} exceeds bound {bound}"
    return ApspReport(
        k=k,
        t=t,
        seed=seed,
        n=g.n,
        spanner_size=build.size,
        max_ratio=max_ratio,
        mean_ratio=mean_ratio,
        pairs=pairs,
        memory_budget=coordinator_budget(g.n),
        build_seconds=t1 - t0,
        query_seconds=t2 - t1,
    )
