"""Combinatorics of the Feynman graphs behind the trace density.

A graph carries one yellow vertex (the observable) and 2n green vertices
(connection insertions); each green vertex has exactly one purple (fermionic)
tail, and propagators are internal edges pairing black half-edges of two
distinct vertices.  Black tails are forbidden (the symbol map kills them),
so all black half-edges are paired.  The hbar order is l = p + g + |E| with
p the total green genus and g the yellow genus; consequently the yellow
valency is bounded by |E| <= l, the counting fact underlying trace
continuity.  Graph weights (configuration-space integrals) are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from .intervals import BudgetExceededError

YELLOW = "yellow"
GREEN = "green"
BLACK = "black"
PURPLE = "purple"

EdgeMultiset = Tuple[Tuple[int, int], ...]  # sorted pairs u < v, with repeats

class MalformedGraphError(Exception):
    """The involution or labeling data is inconsistent."""

@dataclass(frozen=True)
class LabeledGraph:
    """vertices[(color, genus)], half_edges[(vertex, flavor)], involution."""

    vertices: Tuple[Tuple[str, int], ...]
    half_edges: Tuple[Tuple[int, str], ...]
    involution: Tuple[int, ...]

    def validate(self):
        H = len(self.half_edges)
        if len(self.involution) != H:
            raise MalformedGraphError("involution size != half-edge count")
        for h, img in enumerate(self.involution):
            if not 0 <= img < H or self.involution[img] != h:
                raise MalformedGraphError("involution is not an involution")
        for v, flavor in self.half_edges:
            if not 0 <= v < len(self.vertices):
                raise MalformedGraphError("half-edge at missing vertex")
            if flavor not in (BLACK, PURPLE):
                raise MalformedGraphError(f"unknown flavor {flavor}")
        for color, genus in self.vertices:
            if color not in (YELLOW, GREEN) or genus < 0:
                raise MalformedGraphError("bad vertex data")

    def tails(self) -> List[int]:
        return [h for h, img in enumerate(self.involution) if img == h]

    def internal_edges(self) -> EdgeMultiset:
        out = []
        for h, img in enumerate(self.involution):
            if img > h:
                u = self.half_edges[h][0]
                v = self.half_edges[img][0]
                out.append((min(u, v), max(u, v)))
        return tuple(sorted(out))

    def valency(self, v: int) -> int:
        return sum(1 for u, _ in self.half_edges if u == v)

    def canonical_form(self):
        """Invariant under half-edge relabeling: vertex data + edge multiset
        + per-vertex tail flavors."""
        tails = tuple(sorted((self.half_edges[h][0], self.half_edges[h][1])
                             for h in self.tails()))
        return (self.vertices, self.internal_edges(), tails)

def build_graph(n: int, yellow_genus: int, green_genera: Sequence[int],
                edges: Sequence[Tuple[int, int]]) -> LabeledGraph:
    """Standard-form graph: vertex 0 yellow, vertices 1..2n green with one
    purple tail each, black half-edges paired per the edge list."""
    vertices = [(YELLOW, yellow_genus)] + [(GREEN, g) for g in green_genera]
    if len(vertices) != 2 * n + 1:
        raise ValueError("need exactly 2n green genera")
    half_edges: List[Tuple[int, str]] = []
    involution: List[int] = []
    for v in range(1, 2 * n + 1):
        half_edges.append((v, PURPLE))
        involution.append(len(involution))  # fixed point: a tail
    for (u, v) in edges:
        a = len(half_edges)
        half_edges.append((u, BLACK))
        half_edges.append((v, BLACK))
        involution.extend([a + 1, a])
    return LabeledGraph(tuple(vertices), tuple(half_edges), tuple(involution))

def admissible(G: LabeledGraph, n: int) -> bool:
    """One yellow + 2n green, one purple tail per green vertex and none on
    yellow, no black tails, and no propagator self-loops."""
    G.validate()
    yellows = [i for i, (c, _) in enumerate(G.vertices) if c == YELLOW]
    greens = [i for i, (c, _) in enumerate(G.vertices) if c == GREEN]
    if len(yellows) != 1 or len(greens) != 2 * n:
        return False
    if len(G.vertices) != 2 * n + 1:
        return False
    tails = set(G.tails())
    purple_at: Dict[int, int] = {v: 0 for v in range(len(G.vertices))}
    for h, (v, flavor) in enumerate(G.half_edges):
        if flavor == PURPLE:
            if h not in tails:
                return False  # purple half-edges are never paired
            purple_at[v] += 1
        else:
            if h in tails:
                return False  # black tails die under the symbol map
    if any(purple_at[v] != 1 for v in greens):
        return False
    if purple_at[yellows[0]] != 0:
        return False
    for u, v in G.internal_edges():
        if u == v:
            return False  # the propagator pairs distinct tensor factors
    return True

def hbar_order(G: LabeledGraph, n: int) -> int:
    """l = p + g + |E|: total green genus, yellow genus, edge count."""
    if not admissible(G, n):
        raise ValueError("hbar_order requires an admissible graph")
    g = sum(genus for color, genus in G.vertices if color == YELLOW)
    p = sum(genus for color, genus in G.vertices if color == GREEN)
    return p + g + len(G.internal_edges())

def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest

def _edge_multisets(num_vertices: int, E: int,
                    caps: Sequence[int]) -> Iterator[EdgeMultiset]:
    """All multisets of E loop-free edges respecting per-vertex degree caps."""
    pairs = [(u, v) for u in range(num_vertices)
             for v in range(u + 1, num_vertices)]

    def rec(idx: int, remaining: int, degs: List[int]):
        if remaining == 0:
            yield ()
            return
        if idx == len(pairs):
            return
        u, v = pairs[idx]
        room = min(remaining, caps[u] - degs[u], caps[v] - degs[v])
        for mult in range(max(0, room) + 1):
            degs[u] += mult
            degs[v] += mult
            for rest in rec(idx + 1, remaining - mult, degs):
                yield ((u, v),) * mult + rest
            degs[u] -= mult
            degs[v] -= mult

    yield from rec(0, E, [0] * num_vertices)

def enumerate_admissible(n: int, l: int, valency_cap: int,
                         budget: int = 200_000) -> List[LabeledGraph]:
    """All admissible graphs of hbar order l, valencies <= valency_cap,
    up to half-edge relabeling (vertices stay labeled)."""
    if valency_cap < 0:
        raise ValueError("valency cap must be >= 0")
    V = 2 * n + 1
    out: List[LabeledGraph] = []
    seen = set()
    # black-degree caps: a green vertex already spends one valency on purple
    caps = [valency_cap] + [valency_cap - 1] * (2 * n)
    if caps[1] < 0:
        return []
    for g in range(l + 1):
        for p in range(l - g + 1):
            E = l - g - p
            for genera in _compositions(p, 2 * n):
                for edges in _edge_multisets(V, E, caps):
                    G = build_graph(n, g, genera, edges)
                    key = G.canonical_form()
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(G)
                    if len(out) > budget:
                        raise BudgetExceededError(
                            f"more than {budget} admissible graphs at order {l}")
    return out

def verify_locality_bound(n: int, l: int, valency_cap: int):
    """Check yellow valency <= |E| <= l over all admissible graphs at order l.

    Returns a dict with the outcome and the realized maximum.
    """
    ok = True
    max_yellow = 0
    for G in enumerate_admissible(n, l, valency_cap):
        E = len(G.internal_edges())
        yv = G.valency(0)
        max_yellow = max(max_yellow, yv)
        if not (yv <= E <= l):
            ok = False
    return {"ok": ok, "max_yellow_valency": max_yellow}
