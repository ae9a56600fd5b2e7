"""Random linear network coding over a DAG with two sources and an adversary.

Packets are rows over a prime field.  Every edge carries one packet: source
edges carry uniform random combinations of that source's message rows,
internal edges carry uniform random combinations of the tail node's incoming
packets, and the adversary adds its payload to up to z chosen edges after the
honest coding step.  Coefficient vectors are propagated alongside packets, so
every run exposes the exact ground truth Y = T1 M1 + T2 M2 + E.

Edges are processed in topological order of their tail node (ties broken by
edge list position), which makes a run fully determined by its seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadNetwork, ShapeMismatch, UnknownNode
from .fields import PrimeField, make_prime_field
from .matrix import Mat, rank

SOURCE1, SOURCE2, SINK = "S1", "S2", "R"

_STRATEGIES = ("none", "random-edges", "fixed-edges", "targeted-downstream")


def _topo_order(nodes, edges):
    indeg = {v: 0 for v in nodes}
    for _, h in edges:
        indeg[h] += 1
    pos = {v: i for i, v in enumerate(nodes)}
    ready = sorted((v for v in nodes if indeg[v] == 0), key=pos.get)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for t, h in edges:
            if t == u:
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        ready.sort(key=pos.get)
    if len(order) != len(nodes):
        raise BadNetwork("network graph contains a cycle")
    return order


class NetworkSpec:
    """Validated two-source single-receiver DAG with unit-capacity edges."""

    def __init__(self, nodes, edges, p: int):
        self.nodes = tuple(nodes)
        self.edges = tuple((str(t), str(h)) for t, h in edges)
        self.field = make_prime_field(p)
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise BadNetwork("duplicate node names")
        for name in (SOURCE1, SOURCE2, SINK):
            if name not in known:
                raise BadNetwork(f"required node {name} missing")
        for t, h in self.edges:
            if t not in known or h not in known:
                raise UnknownNode(f"edge ({t}, {h}) references an unknown node")
        for t, h in self.edges:
            if h in (SOURCE1, SOURCE2):
                raise BadNetwork(f"source {h} must not have incoming edges")
            if t == SINK:
                raise BadNetwork("receiver must not forward packets")
        self._topo = _topo_order(self.nodes, self.edges)
        self._topo_pos = {v: i for i, v in enumerate(self._topo)}
        joint = min_cut(self, (SOURCE1, SOURCE2), SINK)
        in_deg = sum(1 for _, h in self.edges if h == SINK)
        if in_deg != joint:
            raise BadNetwork(
                f"receiver in-degree {in_deg} != joint min cut {joint}; "
                "the model assumes exactly C edges reach the receiver")

    @property
    def p(self) -> int:
        return self.field.p

    def in_edges(self, node: str):
        return [i for i, (_, h) in enumerate(self.edges) if h == node]

    def cuts(self) -> CutProfile:
        c1 = min_cut(self, (SOURCE1,), SINK)
        c2 = min_cut(self, (SOURCE2,), SINK)
        c = min_cut(self, (SOURCE1, SOURCE2), SINK)
        return CutProfile(c1, c2, c)

    def to_obj(self) -> dict:
        return {"nodes": list(self.nodes),
                "edges": [[t, h] for t, h in self.edges],
                "p": self.p}

    @classmethod
    def from_obj(cls, obj: dict) -> NetworkSpec:
        return cls(obj["nodes"], obj["edges"], obj["p"])

    def __repr__(self):
        return (f"NetworkSpec({len(self.nodes)} nodes, "
                f"{len(self.edges)} edges, p={self.p})")


@dataclass(frozen=True)
class CutProfile:
    C1: int
    C2: int
    C: int


def min_cut(spec: NetworkSpec, sources, sink: str) -> int:
    """Max-flow value from the source set to the sink, unit edge capacities."""
    known = set(spec.nodes)
    for v in (*sources, sink):
        if v not in known:
            raise UnknownNode(f"node {v} not in network")
    cap = {}
    for t, h in spec.edges:
        cap[(t, h)] = cap.get((t, h), 0) + 1
    super_src = ("__super__",)
    big = len(spec.edges) + 1
    for s in set(sources):
        cap[(super_src, s)] = big
    adj = {}
    for u, v in cap:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    flow = 0
    while True:
        parent = {super_src: None}
        queue = [super_src]
        while queue and sink not in parent:
            u = queue.pop(0)
            for v in adj.get(u, ()):
                if v not in parent and cap.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        v = sink
        bottleneck = big
        while parent[v] is not None:
            u = parent[v]
            bottleneck = min(bottleneck, cap[(u, v)])
            v = u
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= bottleneck
            cap[(v, u)] = cap.get((v, u), 0) + bottleneck
            v = u
        flow += bottleneck


def reference_network(p: int = 257) -> NetworkSpec:
    """Bundled stand-in topology with cuts C1 = C2 = 4, C = 5.

    Two four-edge source fans overlap on five relay nodes that feed the
    receiver, so each source alone reaches four relays and together they
    cover five.
    """
    relays = [f"m{i}" for i in range(1, 6)]
    nodes = [SOURCE1, SOURCE2, *relays, SINK]
    edges = [(SOURCE1, m) for m in relays[:4]]
    edges += [(SOURCE2, m) for m in relays[1:]]
    edges += [(m, SINK) for m in relays]
    return NetworkSpec(nodes, edges, p)


@dataclass(frozen=True)
class AdversaryPlan:
    """Up to z attacked edges plus how their payload rows are drawn."""

    z: int
    strategy: str = "none"
    edges: tuple[int, ...] = ()
    payload: Mat | None = None

    def __post_init__(self):
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"strategy must be one of {_STRATEGIES}")
        if self.z < 0:
            raise ValueError("z must be nonnegative")
        if self.strategy == "fixed-edges" and len(self.edges) > self.z:
            raise ValueError(f"{len(self.edges)} fixed edges exceed z={self.z}")
        if self.strategy != "fixed-edges" and self.edges:
            raise ValueError("edge list is only for the fixed-edges strategy")

    @classmethod
    def none(cls) -> AdversaryPlan:
        return cls(0)


@dataclass(frozen=True)
class TransmissionResult:
    Y: Mat
    T1: Mat
    T2: Mat
    E: Mat
    seed: int
    attacked_edges: tuple[int, ...]


def _choose_attacked(spec: NetworkSpec, plan: AdversaryPlan, rng) -> tuple[int, ...]:
    ne = len(spec.edges)
    if plan.strategy == "none" or plan.z == 0:
        return ()
    if plan.strategy == "fixed-edges":
        bad = [i for i in plan.edges if not 0 <= i < ne]
        if bad:
            raise ValueError(f"fixed edge indices out of range: {bad}")
        return tuple(sorted(set(plan.edges)))
    if plan.strategy == "random-edges":
        picked = rng.choice(ne, size=min(plan.z, ne), replace=False)
        return tuple(sorted(int(i) for i in picked))
    # targeted-downstream: hit the edges whose heads sit latest in
    # topological order, i.e. closest to the receiver
    ranked = sorted(range(ne),
                    key=lambda i: (-spec._topo_pos[spec.edges[i][1]], i))
    return tuple(sorted(ranked[:plan.z]))


def transmit(spec: NetworkSpec, m1: Mat, m2: Mat,
             plan: AdversaryPlan, seed: int) -> TransmissionResult:
    """One seeded network use; returns the receiver block plus ground truth."""
    fp = spec.field
    if m1.field != fp or m2.field != fp:
        raise ShapeMismatch(f"messages must live in {fp!r}")
    if m1.ncols != m2.ncols:
        raise ShapeMismatch(
            f"message widths differ: {m1.ncols} vs {m2.ncols}")
    p = fp.p
    width = m1.ncols
    r1, r2 = m1.nrows, m2.nrows
    d1, d2 = m1.data[:, :, 0], m2.data[:, :, 0]

    rng = np.random.default_rng(seed)
    attacked = _choose_attacked(spec, plan, rng)
    if plan.payload is not None:
        if plan.payload.field != fp:
            raise ShapeMismatch(f"payload must live in {fp!r}")
        if plan.payload.ncols != width or plan.payload.nrows < len(attacked):
            raise ShapeMismatch("payload must supply one width-matched row "
                                "per attacked edge")

    order = sorted(range(len(spec.edges)),
                   key=lambda i: (spec._topo_pos[spec.edges[i][0]], i))
    packets = np.zeros((len(spec.edges), width), dtype=np.int64)
    coeff1 = np.zeros((len(spec.edges), r1), dtype=np.int64)
    coeff2 = np.zeros((len(spec.edges), r2), dtype=np.int64)
    attack_slot = {e: k for k, e in enumerate(attacked)}

    for idx in order:
        tail, _ = spec.edges[idx]
        if tail == SOURCE1:
            k = rng.integers(0, p, r1, dtype=np.int64)
            packets[idx] = k @ d1 % p
            coeff1[idx] = k
        elif tail == SOURCE2:
            k = rng.integers(0, p, r2, dtype=np.int64)
            packets[idx] = k @ d2 % p
            coeff2[idx] = k
        else:
            feeds = spec.in_edges(tail)
            if feeds:
                k = rng.integers(0, p, len(feeds), dtype=np.int64)
                packets[idx] = k @ packets[feeds] % p
                coeff1[idx] = k @ coeff1[feeds] % p
                coeff2[idx] = k @ coeff2[feeds] % p
        if idx in attack_slot:
            if plan.payload is not None:
                extra = plan.payload.data[attack_slot[idx], :, 0]
            else:
                extra = rng.integers(0, p, width, dtype=np.int64)
            packets[idx] = (packets[idx] + extra) % p

    sink_edges = spec.in_edges(SINK)
    y = packets[sink_edges]
    t1 = coeff1[sink_edges]
    t2 = coeff2[sink_edges]
    e = (y - t1 @ d1 - t2 @ d2) % p
    result = TransmissionResult(
        Y=Mat(fp, y[:, :, None]),
        T1=Mat(fp, t1[:, :, None]),
        T2=Mat(fp, t2[:, :, None]),
        E=Mat(fp, e[:, :, None]),
        seed=seed,
        attacked_edges=attacked,
    )
    assert rank(result.E) <= len(attacked)
    return result


def coefficient_transforms(result: TransmissionResult):
    return result.T1, result.T2
