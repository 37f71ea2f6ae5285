"""Spanner constructions built around repeated cluster growth and contraction.

All four algorithms share one iteration engine.  An iteration samples a
subset of the current clusters, lets every super-node outside the sampled
clusters either join its closest sampled neighbor (keeping one minimum
edge per processed neighbor cluster) or settle by keeping one minimum
edge to every neighboring cluster, grows the sampled clusters by the
attach edges, and drops edges that became internal to a cluster.  Epochs
contract the grown clusters to super-nodes and lower the sampling
probability before the next round of iterations.

The trade-off parameter t is the number of growth iterations per epoch:
t=1 contracts after every growth step (fastest schedule, weakest
stretch), larger t grows clusters longer before contracting, and t=k
never contracts, reproducing the classic randomized (2k-1)-spanner
construction of Baswana and Sen.

Every build returns a SpannerBuild carrying the spanner edge ids, a
disposition for each original edge, and a per-epoch trace of cluster and
edge counts.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .clustering import (
    Clustering,
    Merge,
    QuotientGraph,
    RadiusCertificate,
    check_radius,
    compose,
    contract,
    grow_clusters,
    identity_quotient,
    sample_clusters,
    singleton_clustering,
)
from .graph import DomainError, WeightedGraph, build_graph

# Disposition rule tags for discarded edges.
RULE_JOIN = "join"                 # superseded while joining a sampled neighbor
RULE_SETTLE = "settle"             # superseded while settling with no sampled neighbor
RULE_INTRA = "intra-cluster"       # became internal to a grown cluster
RULE_DEDUP = "contract-dedup"      # lost the per-super-pair minimum at contraction
RULE_COMPLETION = "completion"     # superseded in the final completion sweep


@dataclass(frozen=True)
class Params:
    """Run parameters: stretch k, iterations-per-epoch t, memory exponent
    gamma (cost model only), and the rng seed."""

    k: int
    t: int = 1
    gamma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if self.t < 1:
            raise DomainError(f"t must be >= 1, got {self.t}")
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma must be in (0, 1], got {self.gamma}")


def stretch_exponent(t: int) -> float:
    """Exponent s with final stretch 2*k**s: ln(2t+1)/ln(t+1)."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    return math.log(2 * t + 1) / math.log(t + 1)


def epoch_count(k: int, t: int) -> int:
    """Number of epochs: smallest l >= 1 with (t+1)**l >= k.

    Equals ceil(ln k / ln(t+1)) for k >= 2, computed in exact integer
    arithmetic to avoid float boundary errors at exact powers.
    """
    if k < 1 or t < 1:
        raise DomainError("k and t must be >= 1")
    l = 1
    power = t + 1
    while power < k:
        power *= t + 1
        l += 1
    return l


def epoch_schedule(k: int, t: int, n: int) -> list[tuple[int, float, int]]:
    """Formal epoch plan: (epoch index, sampling probability, t iterations).

    Epoch i samples with probability n**(-(t+1)**(i-1)/k), clamped to
    [0, 1].  The actual runs may stop the tail iterations early once the
    cumulative sampling exponent reaches (k-1)/k; see general_spanner.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    l = epoch_count(k, t)
    out = []
    for i in range(1, l + 1):
        power = (t + 1) ** (i - 1)
        p = min(1.0, n ** (-power / k))
        out.append((i, p, t))
    return out


@dataclass
class IterationTrace:
    clusters_before: int
    sampled: int
    added: int
    discarded: int

    def as_dict(self) -> dict:
        return {
            "clusters_before": self.clusters_before,
            "sampled": self.sampled,
            "added": self.added,
            "discarded": self.discarded,
        }


@dataclass
class EpochTrace:
    epoch: int
    p: float
    iterations: list[IterationTrace]
    clusters_end: int
    contract_discarded: int = 0

    def as_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "p": self.p,
            "iterations": [it.as_dict() for it in self.iterations],
            "clusters_end": self.clusters_end,
            "contract_discarded": self.contract_discarded,
        }


@dataclass
class SpannerBuild:
    """Result of one spanner construction.

    disposition(eid) is ("in_spanner",), ("discarded", epoch, iteration,
    rule) or ("unprocessed",); after a completed run no edge is
    unprocessed.  Identical (graph, params, seed) produce byte-identical
    to_json() output.
    """

    n: int
    m: int
    k: int
    t: int
    seed: int
    spanner_edges: list[int]
    epochs: list[EpochTrace]
    phase2_added: int
    phase2_discarded: int
    final_clustering: Clustering
    radius_checks: list[RadiusCertificate] | None
    _state: bytearray
    _discards: dict[int, tuple[int, int | None, str]]

    LIVE, IN, OUT = 0, 1, 2

    def disposition(self, eid: int):
        s = self._state[eid]
        if s == self.IN:
            return ("in_spanner",)
        if s == self.OUT:
            epoch, iteration, rule = self._discards[eid]
            return ("discarded", epoch, iteration, rule)
        return ("unprocessed",)

    @property
    def size(self) -> int:
        return len(self.spanner_edges)

    def spanner_set(self) -> set[int]:
        return set(self.spanner_edges)

    def discard_histogram(self) -> dict[str, int]:
        hist: dict[str, int] = {}
        for _, _, rule in self._discards.values():
            hist[rule] = hist.get(rule, 0) + 1
        return hist

    def as_dict(self) -> dict:
        return {
            "graph": {"n": self.n, "m": self.m},
            "params": {"k": self.k, "t": self.t, "seed": self.seed},
            "size": self.size,
            "spanner_edges": self.spanner_edges,
            "dispositions": {
                "in_spanner": self.size,
                "discarded": self.discard_histogram(),
                "unprocessed": sum(1 for s in self._state if s == self.LIVE),
            },
            "epochs": [ep.as_dict() for ep in self.epochs],
            "phase2": {"added": self.phase2_added, "discarded": self.phase2_discarded},
            "radius_checks": None
            if self.radius_checks is None
            else [
                {
                    "epoch": i + 1,
                    "bound": c.radius_bound,
                    "max_depth": c.max_depth,
                    "passed": c.passed,
                }
                for i, c in enumerate(self.radius_checks)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


class _EdgeLedger:
    """Tracks each edge's fate while an algorithm runs."""

    def __init__(self, g: WeightedGraph):
        self.g = g
        self.state = bytearray(g.m)  # SpannerBuild.LIVE
        self.discards: dict[int, tuple[int, int | None, str]] = {}
        self.added = 0

    def is_live(self, eid: int) -> bool:
        return self.state[eid] == SpannerBuild.LIVE

    def add(self, eid: int) -> None:
        if self.state[eid] == SpannerBuild.LIVE:
            self.state[eid] = SpannerBuild.IN
            self.added += 1

    def discard(self, eid: int, epoch: int, iteration: int | None, rule: str) -> None:
        if self.state[eid] == SpannerBuild.LIVE:
            self.state[eid] = SpannerBuild.OUT
            self.discards[eid] = (epoch, iteration, rule)

    def counts(self) -> tuple[int, int]:
        return self.added, len(self.discards)


def _dissolve_unsampled(d: Clustering, sampled: set[int]) -> Clustering:
    """Sampled clusters keep their trees; every node of an unsampled
    cluster becomes a singleton cluster, ready to attach or settle."""
    n = d.node_count
    cluster_of: list[int | None] = [None] * n
    parent: list[tuple[int, int] | None] = [None] * n
    depth: list[int | None] = [None] * n
    center_of: dict[int, int] = {cid: cid for cid in d.center_of if cid in sampled}
    for v in range(n):
        cid = d.cluster_of[v]
        if cid is None:
            continue
        if cid in sampled:
            cluster_of[v] = cid
            parent[v] = d.parent[v]
            depth[v] = d.depth_of[v]
        else:
            cluster_of[v] = v
            depth[v] = 0
            center_of[v] = v
    return Clustering(n, cluster_of, center_of, parent, depth)


def _run_iteration(
    g: WeightedGraph,
    ledger: _EdgeLedger,
    super_of: list[int | None],
    d: Clustering,
    sampled: set[int],
    live: list[int],
    epoch: int,
    iteration: int,
) -> tuple[Clustering, list[int], IterationTrace]:
    """One sample/join/settle/grow/prune step on the current quotient."""
    added0, disc0 = ledger.counts()

    # Group live edges per super-node by the neighboring cluster.
    groups: dict[int, dict[int, list[int]]] = {}
    for eid in live:
        u, v, _ = g.edges[eid]
        su, sv = super_of[u], super_of[v]
        cu, cv = d.cluster_of[su], d.cluster_of[sv]
        assert cu is not None and cv is not None and cu != cv, "live edge inside a cluster"
        groups.setdefault(su, {}).setdefault(cv, []).append(eid)
        groups.setdefault(sv, {}).setdefault(cu, []).append(eid)

    def best_of(eids: list[int]) -> tuple[float, int]:
        return min((g.weight(e), e) for e in eids)

    keeps: set[int] = set()
    merges: list[Merge] = []
    pending: list[tuple[int, str]] = []

    for s in range(d.node_count):
        cid = d.cluster_of[s]
        if cid is None or cid in sampled:
            continue
        nbrs = groups.get(s)
        if not nbrs:
            continue  # isolated super-node settles with nothing to record
        sampled_nbrs = {c: best_of(eids) for c, eids in nbrs.items() if c in sampled}
        if sampled_nbrs:
            w0, e0 = min(sampled_nbrs.values())
            c0 = next(c for c, be in sampled_nbrs.items() if be == (w0, e0))
            keeps.add(e0)
            x, y = g.endpoints(e0)
            host = super_of[x] if super_of[x] != s else super_of[y]
            assert d.cluster_of[host] == c0
            merges.append(Merge(absorbed=s, host_node=host, edge=e0))
            for eid in nbrs[c0]:
                if eid != e0:
                    pending.append((eid, RULE_JOIN))
            for c, eids in nbrs.items():
                if c == c0:
                    continue
                w1, e1 = best_of(eids)
                if w1 < w0:  # strictly cheaper neighbor clusters also keep one edge
                    keeps.add(e1)
                    for eid in eids:
                        if eid != e1:
                            pending.append((eid, RULE_JOIN))
        else:
            for c in sorted(nbrs):
                eids = nbrs[c]
                _, e1 = best_of(eids)
                keeps.add(e1)
                for eid in eids:
                    if eid != e1:
                        pending.append((eid, RULE_SETTLE))

    for eid in sorted(keeps):
        ledger.add(eid)
    for eid, rule in pending:
        if ledger.is_live(eid):
            ledger.discard(eid, epoch, iteration, rule)

    d_next = grow_clusters(_dissolve_unsampled(d, sampled), sampled, merges)

    survivors: list[int] = []
    for eid in live:
        if not ledger.is_live(eid):
            continue
        u, v, _ = g.edges[eid]
        cu = d_next.cluster_of[super_of[u]]
        cv = d_next.cluster_of[super_of[v]]
        assert cu is not None and cv is not None, "live edge endpoint left the clustering"
        if cu == cv:
            ledger.discard(eid, epoch, iteration, RULE_INTRA)
        else:
            survivors.append(eid)

    added1, disc1 = ledger.counts()
    trace = IterationTrace(
        clusters_before=len(d.center_of),
        sampled=len(sampled),
        added=added1 - added0,
        discarded=disc1 - disc0,
    )
    return d_next, survivors, trace


def _completion_sweep(
    g: WeightedGraph,
    ledger: _EdgeLedger,
    final: Clustering,
    live: list[int],
    epoch: int,
) -> tuple[int, int]:
    """Final pass: every endpoint of a remaining edge keeps one minimum
    edge into each adjacent cluster; the rest are superseded.

    Vertices are visited in ascending id and clusters in ascending id, so
    the sweep is deterministic.
    """
    added0, disc0 = ledger.counts()
    endpoints = sorted({v for eid in live for v in g.endpoints(eid)})
    for v in endpoints:
        by_cluster: dict[int, list[int]] = {}
        for eid in g.adj[v]:
            if not ledger.is_live(eid):
                continue
            a, b, _ = g.edges[eid]
            other = b if a == v else a
            cid = final.cluster_of[other]
            assert cid is not None, "remaining edge endpoint is unclustered"
            by_cluster.setdefault(cid, []).append(eid)
        for cid in sorted(by_cluster):
            eids = by_cluster[cid]
            _, keep = min((g.weight(e), e) for e in eids)
            ledger.add(keep)
            for eid in eids:
                if eid != keep:
                    ledger.discard(eid, epoch, None, RULE_COMPLETION)
    added1, disc1 = ledger.counts()
    return added1 - added0, disc1 - disc0


def _finish(
    g: WeightedGraph,
    ledger: _EdgeLedger,
    k: int,
    t: int,
    seed: int,
    epochs: list[EpochTrace],
    phase2: tuple[int, int],
    final: Clustering,
    certs: list[RadiusCertificate] | None,
) -> SpannerBuild:
    assert all(s != SpannerBuild.LIVE for s in ledger.state), "unprocessed edges remain"
    spanner = sorted(e for e in range(g.m) if ledger.state[e] == SpannerBuild.IN)
    return SpannerBuild(
        n=g.n,
        m=g.m,
        k=k,
        t=t,
        seed=seed,
        spanner_edges=spanner,
        epochs=epochs,
        phase2_added=phase2[0],
        phase2_discarded=phase2[1],
        final_clustering=final,
        radius_checks=certs,
        _state=ledger.state,
        _discards=ledger.discards,
    )


def _take_all(
    g: WeightedGraph, k: int, t: int, seed: int, radius_checks: bool = False
) -> SpannerBuild:
    """Stretch-1 output: the spanner is the whole graph."""
    ledger = _EdgeLedger(g)
    for eid in range(g.m):
        ledger.add(eid)
    certs: list[RadiusCertificate] | None = [] if radius_checks else None
    return _finish(g, ledger, k, t, seed, [], (0, 0), singleton_clustering(g), certs)


def general_spanner(
    g: WeightedGraph, k: int, t: int, seed: int, radius_checks: bool = False
) -> SpannerBuild:
    """Epoch-parameterized spanner with stretch at most 2*k**s, where
    s = ln(2t+1)/ln(t+1).

    Runs epoch_count(k, t) epochs.  Epoch i samples clusters with
    probability n**(-(t+1)**(i-1)/k) for up to t iterations; iterations
    stop (only relevant for t >= 2) once the cumulative sampling exponent
    reaches (k-1)/k, the budget after which the expected cluster count has
    already dropped to n**(1/k) and further growth would only inflate the
    radius.  With t=k this leaves exactly k-1 growth iterations plus the
    completion sweep, the classic (2k-1)-stretch construction.  Clusters
    are contracted between epochs; the completion sweep runs directly on
    the last epoch's clustering.

    With radius_checks=True the composed clustering at the end of each
    epoch i is certified against radius ((2t+1)**i - 1)/2 and property (B)
    over the edges still unprocessed at that point.
    """
    if k < 1 or t < 1:
        raise DomainError("k and t must be >= 1")
    if k == 1:
        return _take_all(g, k, t, seed, radius_checks)

    rng = random.Random(seed)
    ledger = _EdgeLedger(g)
    quotient = identity_quotient(g)
    inner = singleton_clustering(g)
    live = list(range(g.m))
    epochs: list[EpochTrace] = []
    certs: list[RadiusCertificate] | None = [] if radius_checks else None

    schedule = epoch_schedule(k, t, g.n)
    last_epoch = schedule[-1][0]
    spent = 0  # cumulative sampling exponent, in units of 1/k
    composed = inner

    for i, p, _ in schedule:
        power = (t + 1) ** (i - 1)
        d = singleton_clustering(quotient)
        iterations: list[IterationTrace] = []
        for j in range(1, t + 1):
            if spent >= k - 1:
                break
            spent += power
            sampled = sample_clusters(d, p, rng)
            d, live, trace = _run_iteration(
                g, ledger, quotient.super_of, d, sampled, live, i, j
            )
            iterations.append(trace)
        assert iterations, "every scheduled epoch runs at least one iteration"

        composed = compose(d, inner, quotient, g)
        if certs is not None:
            bound = ((2 * t + 1) ** i - 1) // 2
            certs.append(check_radius(g, composed, live, bound))

        dedup = 0
        if i < last_epoch:
            quotient, dropped = contract(quotient, d, live, g)
            for eid in dropped:
                ledger.discard(eid, i, len(iterations), RULE_DEDUP)
            dedup = len(dropped)
            live = [e for e in live if ledger.is_live(e)]
            inner = composed
        epochs.append(EpochTrace(i, p, iterations, len(d.center_of), dedup))

    phase2 = _completion_sweep(g, ledger, composed, live, last_epoch)
    return _finish(g, ledger, k, t, seed, epochs, phase2, composed, certs)


def baswana_sen(g: WeightedGraph, k: int, seed: int) -> SpannerBuild:
    """Classic randomized (2k-1)-spanner: the t=k extreme of the general
    construction (a single epoch, no contraction)."""
    return general_spanner(g, k, k, seed)


def cluster_merge_spanner(
    g: WeightedGraph, k: int, seed: int, radius_checks: bool = False
) -> SpannerBuild:
    """Contract-every-iteration spanner: stretch at most 2*k**log2(3) in
    ceil(log2 k) epochs.  Identical to general_spanner with t=1."""
    return general_spanner(g, k, 1, seed, radius_checks=radius_checks)


def two_phase_spanner(g: WeightedGraph, k: int, seed: int) -> SpannerBuild:
    """Two-stage spanner for unweighted graphs with O(k) hop stretch.

    Stage one runs t = ceil(sqrt(k)) growth iterations at sampling
    probability n**(-1/k) and contracts the resulting clusters.  Stage two
    runs the classic (2t'-1)-spanner with t' = t on the contracted graph
    and maps its edges back.  Hop stretch is at most
    2t + (2t+1)(2t'-1) + 2t.
    """
    if any(w != 1.0 for _, _, w in g.edges):
        raise DomainError("two-phase spanner requires an unweighted graph (unit weights)")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k == 1:
        return _take_all(g, k, 1, seed)

    t = math.isqrt(k)
    if t * t < k:
        t += 1
    rng = random.Random(seed)
    ledger = _EdgeLedger(g)
    quotient = identity_quotient(g)
    live = list(range(g.m))
    p = min(1.0, g.n ** (-1.0 / k))

    d = singleton_clustering(quotient)
    iterations: list[IterationTrace] = []
    for j in range(1, t + 1):
        sampled = sample_clusters(d, p, rng)
        d, live, trace = _run_iteration(g, ledger, quotient.super_of, d, sampled, live, 1, j)
        iterations.append(trace)
    composed = compose(d, singleton_clustering(g), quotient, g)

    sub_quotient, dropped = contract(quotient, d, live, g)
    for eid in dropped:
        ledger.discard(eid, 1, t, RULE_DEDUP)
    live = [e for e in live if ledger.is_live(e)]
    epochs = [EpochTrace(1, p, iterations, len(d.center_of), len(dropped))]

    if not live:
        return _finish(g, ledger, k, t, seed, epochs, (0, 0), composed, None)

    assert sorted(se[2] for se in sub_quotient.super_edges) == sorted(live)
    contracted = build_graph(
        sub_quotient.super_count, [(a, b, 1.0) for a, b, _, _ in sub_quotient.super_edges]
    )
    assert contracted.m == len(sub_quotient.super_edges)
    to_original = [se[2] for se in sub_quotient.super_edges]

    sub = baswana_sen(contracted, t, rng.getrandbits(63))
    for sub_eid in range(contracted.m):
        orig = to_original[sub_eid]
        dispo = sub.disposition(sub_eid)
        if dispo[0] == "in_spanner":
            ledger.add(orig)
        else:
            _, ep, it, rule = dispo
            ledger.discard(orig, ep + 1, it, f"stage2-{rule}")
    for ep in sub.epochs:
        epochs.append(
            EpochTrace(ep.epoch + 1, ep.p, ep.iterations, ep.clusters_end, ep.contract_discarded)
        )

    # Final clustering: expand stage two's trees (edge ids remapped back to
    # the original graph) through the stage-one contraction.
    fc = sub.final_clustering
    remapped = Clustering(
        node_count=fc.node_count,
        cluster_of=list(fc.cluster_of),
        center_of=dict(fc.center_of),
        parent=[None if pe is None else (pe[0], to_original[pe[1]]) for pe in fc.parent],
        depth_of=list(fc.depth_of),
    )
    final = compose(remapped, composed, sub_quotient, g)
    phase2 = (sub.phase2_added, sub.phase2_discarded)
    return _finish(g, ledger, k, t, seed, epochs, phase2, final, None)
