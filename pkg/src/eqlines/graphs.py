"""Small simple graphs on bitsets, with exact maximum clique / independent set search."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _kernels

log = logging.getLogger(__name__)

EXACT_LIMIT = 64


@dataclass(frozen=True)
class Graph:
    order: int
    adj: tuple[int, ...]  # adj[v] is the neighbourhood bitmask of v

    def __post_init__(self):
        if len(self.adj) != self.order:
            raise ValueError("adjacency length does not match order")
        for v, nb in enumerate(self.adj):
            if nb >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            w = nb
            while w:
                u = (w & -w).bit_length() - 1
                w &= w - 1
                if u >= self.order or not self.adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v},{u})")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * order
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(order, tuple(adj))

    @classmethod
    def empty(cls, order: int) -> "Graph":
        return cls(order, (0,) * order)

    @classmethod
    def complete(cls, order: int) -> "Graph":
        full = (1 << order) - 1
        return cls(order, tuple(full & ~(1 << v) for v in range(order)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def degree_into(self, v: int, subset: Sequence[int]) -> int:
        return sum(1 for u in subset if self.adj[v] >> u & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in _bits(self.adj[u]) if u < v]

    def complement(self) -> "Graph":
        full = (1 << self.order) - 1
        return Graph(self.order, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph on ``vertices``; vertex k of the result is ``vertices[k]``."""
        pos = {v: k for k, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            nb = 0
            for u in _bits(self.adj[v]):
                k = pos.get(u)
                if k is not None:
                    nb |= 1 << k
            adj.append(nb)
        return Graph(len(vertices), tuple(adj))

    def is_clique(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])

    def is_independent(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        return all(not self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


@dataclass(frozen=True)
class CliqueResult:
    vertices: list[int]
    exact: bool


def clique_search(g: Graph) -> CliqueResult:
    """Maximum clique: exact branch and bound up to 64 vertices, heuristic beyond."""
    if g.order == 0:
        return CliqueResult([], True)
    if g.order <= EXACT_LIMIT:
        return CliqueResult(_bits(_kernels.max_clique_bits(list(g.adj))), True)
    log.warning("graph of order %d exceeds exact limit %d; using heuristic clique search", g.order, EXACT_LIMIT)
    return CliqueResult(_heuristic_clique(g), False)


def independent_search(g: Graph) -> CliqueResult:
    return clique_search(g.complement())


def max_clique(g: Graph) -> list[int]:
    return clique_search(g).vertices


def max_independent_set(g: Graph) -> list[int]:
    return independent_search(g).vertices


def _heuristic_clique(g: Graph) -> list[int]:
    # greedy from every start vertex, then (1,2)-swaps until no improvement
    best: list[int] = []
    for start in range(g.order):
        clique = [start]
        cand = g.adj[start]
        while cand:
            v = max(_bits(cand), key=lambda u: (bin(g.adj[u] & cand).count("1"), -u))
            clique.append(v)
            cand &= g.adj[v]
        clique = _improve(g, sorted(clique))
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _improve(g: Graph, clique: list[int]) -> list[int]:
    improved = True
    while improved:
        improved = False
        cs = set(clique)
        for out in list(clique):
            rest = [v for v in clique if v != out]
            common = (1 << g.order) - 1
            for v in rest:
                common &= g.adj[v]
            cand = [u for u in _bits(common) if u not in cs]
            for a in cand:
                for b in cand:
                    if a < b and g.has_edge(a, b):
                        clique = sorted(rest + [a, b])
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
    return clique


def transversal_clique(g: Graph, layers: Sequence[Sequence[int]]) -> list[int] | None:
    """A clique taking exactly one vertex from each layer, or None.

    Depth-first over layers, keeping the common neighbourhood of the choices so
    far. Returns the lexicographically least choice sequence.
    """
    k = len(layers)
    if k == 0:
        return []
    layer_masks = []
    for layer in layers:
        m = 0
        for v in layer:
            m |= 1 << v
        layer_masks.append(m)

    def dfs(depth: int, allowed: int, chosen: list[int]) -> list[int] | None:
        if depth == k:
            return list(chosen)
        for v in _bits(layer_masks[depth] & allowed):
            chosen.append(v)
            found = dfs(depth + 1, allowed & g.adj[v], chosen)
            if found is not None:
                return found
            chosen.pop()
        return None

    return dfs(0, (1 << g.order) - 1, [])
