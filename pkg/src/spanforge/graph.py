"""Weighted undirected graphs: construction, random generators, edge-list I/O.

Vertices are dense ids 0..n-1 and edges live in an indexed list; every
other module refers to edges by their index (edge id), which stays stable
through cluster contraction and spanner extraction.

Edge-list text format:
    # n m            optional header (keeps isolated vertices)
    u v w            one edge per line; '#' starts a comment

Without a header, vertex ids may be arbitrary integers and are remapped to
0..n-1 in sorted order.  With a header, ids must already lie in [0, n).
Self-loops are dropped and parallel edges collapse to the single
minimum-weight edge, so loading is idempotent.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable


class EdgeListError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph with nonnegative edge weights.

    edges: list of (u, v, w) with u < v, no self-loops, no parallel edges.
    adj:   per-vertex list of incident edge ids.
    """

    n: int
    edges: list[tuple[int, int, float]]
    adj: list[list[int]]

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, eid: int) -> float:
        return self.edges[eid][2]

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v, _ = self.edges[eid]
        return u, v

    def validate(self) -> None:
        """Check all structural invariants; raises AssertionError on breakage."""
        assert self.n >= 1
        seen_pairs = set()
        for eid, (u, v, w) in enumerate(self.edges):
            assert 0 <= u < self.n and 0 <= v < self.n and u != v, f"edge {eid} endpoints"
            assert u < v, f"edge {eid} not normalized"
            assert math.isfinite(w) and w >= 0, f"edge {eid} weight"
            assert (u, v) not in seen_pairs, f"parallel edge {eid}"
            seen_pairs.add((u, v))
        incident = [0] * len(self.edges)
        for v, eids in enumerate(self.adj):
            for eid in eids:
                a, b, _ = self.edges[eid]
                assert v in (a, b), f"adjacency of {v} lists foreign edge {eid}"
                incident[eid] += 1
        assert all(c == 2 for c in incident), "adjacency/edge list mismatch"


def build_graph(n: int, raw_edges: Iterable[tuple[int, int, float]]) -> WeightedGraph:
    """Normalize raw (u, v, w) triples into a WeightedGraph.

    Drops self-loops, collapses parallel edges to the minimum weight
    (first occurrence wins ties), and rejects negative or non-finite
    weights.
    """
    if n < 1:
        raise DomainError(f"vertex count must be >= 1, got {n}")
    index: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int, float]] = []
    for u, v, w in raw_edges:
        if not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"edge ({u},{v}) out of range for n={n}")
        w = float(w)
        if not math.isfinite(w):
            raise DomainError(f"edge ({u},{v}) has non-finite weight")
        if w < 0:
            raise DomainError(f"edge ({u},{v}) has negative weight {w}")
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        at = index.get(key)
        if at is None:
            index[key] = len(edges)
            edges.append((key[0], key[1], w))
        elif w < edges[at][2]:
            edges[at] = (key[0], key[1], w)
    adj: list[list[int]] = [[] for _ in range(n)]
    for eid, (u, v, _) in enumerate(edges):
        adj[u].append(eid)
        adj[v].append(eid)
    return WeightedGraph(n=n, edges=edges, adj=adj)


def component_labels(g: WeightedGraph, edge_ids: Iterable[int] | None = None) -> list[int]:
    """Connected-component label per vertex, over all edges or a subset."""
    eids = range(g.m) if edge_ids is None else edge_ids
    nbr: list[list[int]] = [[] for _ in range(g.n)]
    for eid in eids:
        u, v, _ = g.edges[eid]
        nbr[u].append(v)
        nbr[v].append(u)
    label = [-1] * g.n
    current = 0
    for start in range(g.n):
        if label[start] != -1:
            continue
        stack = [start]
        label[start] = current
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if label[y] == -1:
                    label[y] = current
                    stack.append(y)
        current += 1
    return label


# ----------------------------- file I/O ------------------------------------


def load_edge_list(source: str | Path | IO[str]) -> WeightedGraph:
    """Parse an edge-list text stream or file path into a WeightedGraph."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh)

    header_n: int | None = None
    triples: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header_n is None and not triples:
                parts = line[1:].split()
                if len(parts) == 2:
                    try:
                        header_n = int(parts[0])
                        int(parts[1])
                    except ValueError:
                        header_n = None  # plain comment
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListError(f"expected 'u v w', got {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise EdgeListError(f"could not parse 'u v w' from {line!r}", line=lineno)
        if not math.isfinite(w):
            raise EdgeListError(f"non-finite weight {parts[2]!r}", line=lineno)
        if w < 0:
            raise DomainError(f"line {lineno}: negative weight {w}")
        triples.append((u, v, w))

    if header_n is not None:
        if header_n < 1:
            raise EdgeListError(f"header vertex count {header_n} must be >= 1", line=1)
        for u, v, _ in triples:
            if not (0 <= u < header_n and 0 <= v < header_n):
                raise EdgeListError(
                    f"vertex id out of header range [0,{header_n}) in edge ({u},{v})"
                )
        return build_graph(header_n, triples)

    ids = sorted({u for u, _, _ in triples} | {v for _, v, _ in triples})
    if not ids:
        raise EdgeListError("no vertices found (empty input needs a '# n m' header)")
    remap = {orig: i for i, orig in enumerate(ids)}
    return build_graph(len(ids), [(remap[u], remap[v], w) for u, v, w in triples])


def write_edge_list(g: WeightedGraph, sink: str | Path | IO[str]) -> None:
    """Write a graph in the edge-list format; round-trips bit-exactly."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_edge_list(g, fh)
        return
    sink.write(f"# {g.n} {g.m}\n")
    for u, v, w in g.edges:
        sink.write(f"{u} {v} {w!r}\n")


# ----------------------------- generators ----------------------------------

WeightSpec = str | tuple[str, float, float]


def _weight_sampler(weights: WeightSpec, rng: random.Random):
    if weights == "unit":
        return lambda: 1.0
    if isinstance(weights, tuple) and len(weights) == 3 and weights[0] == "uniform":
        lo, hi = float(weights[1]), float(weights[2])
        if lo < 0 or hi < lo:
            raise DomainError(f"bad uniform weight range ({lo},{hi})")
        return lambda: rng.uniform(lo, hi)
    raise DomainError(f"unknown weight distribution {weights!r}")


def gen_gnp(n: int, p: float, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    """Erdős–Rényi G(n, p) with unit or uniform(lo, hi) weights.

    A pure function of (n, p, weights, seed): the same arguments always
    produce the same graph.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"p must be in [0, 1], got {p}")
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    triples = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                triples.append((i, j, draw()))
    return build_graph(n, triples)


def gen_path(n: int, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    return build_graph(n, [(i, i + 1, draw()) for i in range(n - 1)])


def gen_cycle(n: int, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    if n < 3:
        raise DomainError("cycle needs n >= 3")
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    return build_graph(n, [(i, (i + 1) % n, draw()) for i in range(n)])


def gen_complete(n: int, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    return build_graph(n, [(i, j, draw()) for i in range(n) for j in range(i + 1, n)])


def gen_star(n: int, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    """Star on n vertices: center 0 joined to 1..n-1."""
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    return build_graph(n, [(0, i, draw()) for i in range(1, n)])


def gen_grid(width: int, height: int, weights: WeightSpec = "unit", seed: int = 0) -> WeightedGraph:
    if width < 1 or height < 1:
        raise DomainError("grid needs width, height >= 1")
    rng = random.Random(seed)
    draw = _weight_sampler(weights, rng)
    triples = []
    for r in range(height):
        for c in range(width):
            v = r * width + c
            if c + 1 < width:
                triples.append((v, v + 1, draw()))
            if r + 1 < height:
                triples.append((v, v + width, draw()))
    return build_graph(width * height, triples)


def parse_generator_spec(spec: str):
    """Parse the CLI generator mini-grammar into (description, seed -> graph).

    Supported forms:
        gnp:<n>:<p>:unit
        gnp:<n>:<p>:uniform(<lo>,<hi>)
        grid:<w>:<h>
        path:<n>
    """
    parts = spec.split(":")
    try:
        kind = parts[0]
        if kind == "gnp":
            if len(parts) != 4:
                raise ValueError
            n, p, wspec = int(parts[1]), float(parts[2]), parts[3]
            if wspec == "unit":
                weights: WeightSpec = "unit"
            elif wspec.startswith("uniform(") and wspec.endswith(")"):
                lo, hi = wspec[len("uniform("):-1].split(",")
                weights = ("uniform", float(lo), float(hi))
            else:
                raise ValueError
            return spec, lambda seed: gen_gnp(n, p, weights, seed)
        if kind == "grid":
            if len(parts) != 3:
                raise ValueError
            w, h = int(parts[1]), int(parts[2])
            return spec, lambda seed: gen_grid(w, h, "unit", seed)
        if kind == "path":
            if len(parts) != 2:
                raise ValueError
            n = int(parts[1])
            return spec, lambda seed: gen_path(n, "unit", seed)
    except (ValueError, IndexError):
        pass
    raise DomainError(f"bad generator spec {spec!r}")
