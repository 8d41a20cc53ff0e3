"""Finite directed graphs (loops allowed) and their homomorphisms.

Nodes are 0..n-1; a homomorphism is a total node map preserving edges.
Graphs are immutable values: equality is node count plus edge set, so
all categorical constructions compare on the nose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .core import Category, CategoryError, InjectivityResult, MorRef, ObjRef


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise ValueError(f"edge ({i}, {j}) out of range for {self.node_count} nodes")

    @staticmethod
    def of(node_count: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        return Graph(node_count, frozenset((int(i), int(j)) for i, j in edges))

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.node_count, self.node_count), dtype=np.bool_)
        for i, j in self.edges:
            adj[i, j] = True
        adj.setflags(write=False)
        return adj

    def has_loop(self) -> bool:
        return any(i == j for i, j in self.edges)

    def __repr__(self) -> str:
        return f"Graph({self.node_count}, {self.edge_list()})"


@dataclass(frozen=True)
class GraphHom:
    """Edge-preserving total node map."""

    source: Graph
    target: Graph
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mapping) != self.source.node_count:
            raise ValueError(
                f"total map required: {len(self.mapping)} images for "
                f"{self.source.node_count} nodes"
            )
        for v in self.mapping:
            if not 0 <= v < self.target.node_count:
                raise ValueError(f"image {v} out of range")
        for i, j in self.source.edge_list():
            if (self.mapping[i], self.mapping[j]) not in self.target.edges:
                raise ValueError(
                    f"map does not preserve edge ({i}, {j}): "
                    f"({self.mapping[i]}, {self.mapping[j]}) missing in target"
                )

    def __call__(self, node: int) -> int:
        return self.mapping[node]

    def then(self, other: "GraphHom") -> "GraphHom":
        """Composite self followed by other; targets must match on the nose."""
        if self.target != other.source:
            raise CategoryError("composability mismatch: target != next source")
        return GraphHom(self.source, other.target, tuple(other.mapping[v] for v in self.mapping))

    @staticmethod
    def identity(g: Graph) -> "GraphHom":
        return GraphHom(g, g, tuple(range(g.node_count)))


def empty_graph() -> Graph:
    return Graph.of(0)


def loop_point() -> Graph:
    return Graph.of(1, [(0, 0)])


def clique(n: int) -> Graph:
    """n nodes, every ordered pair of distinct nodes an edge, no loops."""
    return Graph.of(n, ((i, j) for i in range(n) for j in range(n) if i != j))


@dataclass(frozen=True)
class FactorizationResult:
    """Surjection onto the induced image followed by an embedding."""

    epi_part: GraphHom
    mono_part: GraphHom

    @property
    def mid(self) -> Graph:
        return self.epi_part.target


def factor(f: GraphHom) -> FactorizationResult:
    """Factor f through its image: node image with all target edges between
    image nodes (the embedding is edge-reflecting).  Image nodes are
    renumbered in increasing target order."""
    image = sorted(set(f.mapping))
    rename = {v: k for k, v in enumerate(image)}
    mid = Graph.of(
        len(image),
        ((rename[i], rename[j]) for i, j in f.target.edges if i in rename and j in rename),
    )
    epi = GraphHom(f.source, mid, tuple(rename[v] for v in f.mapping))
    mono = GraphHom(mid, f.target, tuple(image))
    return FactorizationResult(epi, mono)


def enumerate_graphs(max_nodes: int) -> Iterator[Graph]:
    """All labeled graphs ordered by node count, then lexicographically on
    the adjacency matrix read row-major with bit (0, 0) most significant."""
    for n in range(max_nodes + 1):
        cells = n * n
        for code in range(1 << cells):
            edges = [
                (i, j)
                for i in range(n)
                for j in range(n)
                if (code >> (cells - 1 - (i * n + j))) & 1
            ]
            yield Graph.of(n, edges)


def count_graphs(max_nodes: int) -> int:
    return sum(1 << (n * n) for n in range(max_nodes + 1))


def isomorphic(g: Graph, h: Graph) -> bool:
    """Brute-force isomorphism test, intended for test assertions only."""
    if g.node_count != h.node_count or len(g.edges) != len(h.edges):
        return False
    n = g.node_count
    for perm in permutations(range(n)):
        if frozenset((perm[i], perm[j]) for i, j in g.edges) == h.edges:
            return True
    return False


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]  # path compression
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as representative
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _quotient(parts: Sequence[Graph], relations: Iterable[tuple[int, int]]):
    """Glue a disjoint union along relations given in combined indices.

    Classes are renumbered by minimal member.  Returns the quotient graph
    and the map from combined index to class index.
    """
    offsets = []
    total = 0
    for g in parts:
        offsets.append(total)
        total += g.node_count
    uf = _UnionFind(total)
    for a, b in relations:
        uf.union(a, b)
    reps = sorted({uf.find(v) for v in range(total)})
    cls = {rep: k for k, rep in enumerate(reps)}
    index_map = [cls[uf.find(v)] for v in range(total)]
    edges = set()
    for g, off in zip(parts, offsets):
        for i, j in g.edges:
            edges.add((index_map[off + i], index_map[off + j]))
    return Graph.of(len(reps), edges), index_map, offsets


class GraphCategory(Category):
    """Ambient category of all finite graphs, with an interning registry so
    object references stay stable for the lifetime of the instance."""

    def __init__(self, cat_id: str = "graphs"):
        self.cat_id = cat_id
        self._graphs: list[Graph] = []
        self._index: dict[Graph, int] = {}

    def obj(self, g: Graph) -> ObjRef:
        i = self._index.get(g)
        if i is None:
            i = len(self._graphs)
            self._graphs.append(g)
            self._index[g] = i
        return ObjRef(self.cat_id, i)

    def graph_of(self, ref: ObjRef) -> Graph:
        self._check_obj(ref)
        return self._graphs[ref.index]

    def mor(self, hom: GraphHom) -> MorRef:
        return MorRef(self.obj(hom.source), self.obj(hom.target), hom)

    def hom_of(self, m: MorRef) -> GraphHom:
        self._check_mor(m)
        return m.payload

    def identity(self, obj: ObjRef) -> MorRef:
        return self.mor(GraphHom.identity(self.graph_of(obj)))

    def compose(self, g: MorRef, f: MorRef) -> MorRef:
        self._check_mor(g)
        self._check_mor(f)
        if f.cod != g.dom:
            raise CategoryError("composability mismatch: cod of inner != dom of outer")
        return self.mor(f.payload.then(g.payload))

    def enumerate_homs(self, a: ObjRef, x: ObjRef) -> list[MorRef]:
        src = self.graph_of(a)
        dst = self.graph_of(x)
        table = kernels.hom_list(src.adjacency, dst.adjacency)
        return [
            MorRef(a, x, GraphHom(src, dst, tuple(int(v) for v in row))) for row in table
        ]

    def pushout(self, h: MorRef, f: MorRef) -> tuple[MorRef, MorRef]:
        self._check_mor(h)
        self._check_mor(f)
        if h.dom != f.dom:
            raise CategoryError("pushout span must share a domain")
        hh: GraphHom = h.payload
        ff: GraphHom = f.payload
        off_f = hh.target.node_count
        relations = [
            (hh.mapping[v], off_f + ff.mapping[v]) for v in range(hh.source.node_count)
        ]
        apex, index_map, offsets = _quotient([hh.target, ff.target], relations)
        h_prime = GraphHom(
            ff.target, apex, tuple(index_map[offsets[1] + v] for v in range(ff.target.node_count))
        )
        f_prime = GraphHom(
            hh.target, apex, tuple(index_map[offsets[0] + v] for v in range(hh.target.node_count))
        )
        return self.mor(h_prime), self.mor(f_prime)

    def coproduct(self, objs: Sequence[ObjRef]) -> tuple[ObjRef, list[MorRef]]:
        parts = [self.graph_of(o) for o in objs]
        total = 0
        offsets = []
        edges: list[tuple[int, int]] = []
        for g in parts:
            offsets.append(total)
            edges.extend((total + i, total + j) for i, j in g.edges)
            total += g.node_count
        apex_graph = Graph.of(total, edges)
        apex = self.obj(apex_graph)
        injections = [
            self.mor(GraphHom(g, apex_graph, tuple(range(off, off + g.node_count))))
            for g, off in zip(parts, offsets)
        ]
        return apex, injections

    def coproduct_morphism(self, mors: Sequence[MorRef]) -> MorRef:
        for m in mors:
            self._check_mor(m)
        src, _ = self.coproduct([m.dom for m in mors])
        dst, dst_inj = self.coproduct([m.cod for m in mors])
        mapping: list[int] = []
        for m, inj in zip(mors, dst_inj):
            hom: GraphHom = m.payload
            block: GraphHom = inj.payload
            mapping.extend(block.mapping[hom.mapping[v]] for v in range(hom.source.node_count))
        return self.mor(GraphHom(self.graph_of(src), self.graph_of(dst), tuple(mapping)))

    def cotuple(self, legs: Sequence[MorRef], target: ObjRef) -> MorRef:
        mapping: list[int] = []
        for m in legs:
            self._check_mor(m)
            if m.cod != target:
                raise CategoryError("cotuple legs must share the target")
            mapping.extend(m.payload.mapping)
        src, _ = self.coproduct([m.dom for m in legs])
        return self.mor(GraphHom(self.graph_of(src), self.graph_of(target), tuple(mapping)))

    def count_homs(self, a: ObjRef, x: ObjRef, cap: int | None = None) -> int:
        return kernels.hom_count(
            self.graph_of(a).adjacency, self.graph_of(x).adjacency, cap=cap
        )

    def object_size(self, obj: ObjRef) -> int:
        return self.graph_of(obj).node_count

    def find_factorization(self, h: MorRef, f: MorRef) -> MorRef | None:
        # search g with g . h = f directly: pin g on the image of h
        self._check_mor(h)
        self._check_mor(f)
        if h.dom != f.dom:
            raise CategoryError("factorization query needs a common domain")
        hh: GraphHom = h.payload
        ff: GraphHom = f.payload
        mid = hh.target
        pins = np.full(mid.node_count, -1, np.int64)
        for v in range(hh.source.node_count):
            want = ff.mapping[v]
            at = hh.mapping[v]
            if pins[at] >= 0 and pins[at] != want:
                return None  # h merges nodes that f separates
            pins[at] = want
        row = kernels.hom_first(mid.adjacency, ff.target.adjacency, pins)
        if row is None:
            return None
        return self.mor(GraphHom(mid, ff.target, tuple(int(v) for v in row)))

    def is_injective(self, x: ObjRef, h: MorRef) -> InjectivityResult:
        self._check_mor(h)
        xg = self.graph_of(x)
        hh: GraphHom = h.payload
        src = hh.source
        for row in kernels.hom_list(src.adjacency, xg.adjacency):
            f = self.mor(GraphHom(src, xg, tuple(int(v) for v in row)))
            if self.find_factorization(h, f) is None:
                return InjectivityResult(False, f)
        return InjectivityResult(True)

    def universe(self, max_nodes: int) -> Iterator[ObjRef]:
        for g in enumerate_graphs(max_nodes):
            yield self.obj(g)

    def object_label(self, obj: ObjRef) -> str:
        g = self.graph_of(obj)
        return f"graph<{g.node_count};{','.join(f'{i}->{j}' for i, j in g.edge_list())}>"

    def morphism_label(self, m: MorRef) -> str:
        hom = self.hom_of(m)
        images = ",".join(str(v) for v in hom.mapping)
        return f"[{images}]:{self.object_label(m.dom)}=>{self.object_label(m.cod)}"

    def _check_obj(self, obj: ObjRef) -> None:
        if obj.cat_id != self.cat_id or not 0 <= obj.index < len(self._graphs):
            raise CategoryError(f"object {obj} is not from {self.cat_id}")

    def _check_mor(self, m: MorRef) -> None:
        if not isinstance(m.payload, GraphHom):
            raise CategoryError(f"morphism {m} is not a graph morphism")
        self._check_obj(m.dom)
        self._check_obj(m.cod)
        if (
            self._graphs[m.dom.index] != m.payload.source
            or self._graphs[m.cod.index] != m.payload.target
        ):
            raise CategoryError(f"morphism {m} endpoints disagree with its payload")


def random_graph(rng: random.Random, max_nodes: int = 4, loop_bias: float = 0.2) -> Graph:
    n = rng.randint(0, max_nodes)
    edges = []
    for i in range(n):
        for j in range(n):
            p = loop_bias if i == j else 0.35
            if rng.random() < p:
                edges.append((i, j))
    return Graph.of(n, edges)
