"""Bitset graph core: independence tests, DIMACS I/O, unit-disk instance generation.

Vertices are integers 0..n-1 and every vertex set is a plain int bitmask,
so n is capped at 64. Graphs are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

MAX_VERTICES = 64


def mask_of(vertices: Iterable[int]) -> int:
    """Pack an iterable of vertex indices into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def restrict_mask(mask: int, old_to_new: dict[int, int]) -> int:
    """Re-index a bitmask through an old->new vertex map, dropping unmapped bits."""
    out = 0
    for v in iter_bits(mask):
        j = old_to_new.get(v)
        if j is not None:
            out |= 1 << j
    return out


def expand_mask(mask: int, new_to_old: tuple[int, ...]) -> int:
    """Re-index a bitmask of a subgraph back to the parent graph's indices."""
    out = 0
    for v in iter_bits(mask):
        out |= 1 << new_to_old[v]
    return out


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph over 0..n-1 with per-vertex adjacency bitmasks."""

    n: int
    adj: tuple[int, ...]
    edge_count: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex index out of range: edge ({u}, {v}) with n={n}")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        m = sum(a.bit_count() for a in adj) // 2
        return cls(n=n, adj=tuple(adj), edge_count=m)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_independent(self, s: int) -> bool:
        """True iff no edge of the graph has both endpoints in s."""
        rest = s
        while rest:
            low = rest & -rest
            if self.adj[low.bit_length() - 1] & s:
                return False
            rest ^= low
        return True

    def is_maximal_independent(self, s: int) -> bool:
        """True iff s is independent and every outside vertex has a neighbor in s."""
        if not self.is_independent(s):
            return False
        for v in iter_bits(self.full_mask ^ s):
            if not self.adj[v] & s:
                return False
        return True

    def induced_subgraph(self, keep: int) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on the kept vertices plus the order-preserving old->new map."""
        if keep == 0:
            raise ValueError("cannot induce a subgraph on an empty vertex set")
        kept = list(iter_bits(keep))
        old_to_new = {v: i for i, v in enumerate(kept)}
        adj = [0] * len(kept)
        for i, v in enumerate(kept):
            adj[i] = restrict_mask(self.adj[v] & keep, old_to_new)
        m = sum(a.bit_count() for a in adj) // 2
        return Graph(n=len(kept), adj=tuple(adj), edge_count=m), old_to_new

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.n} {self.edge_count}"]
        lines.extend(f"e {u + 1} {v + 1}" for u, v in self.edges())
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    """Parse a DIMACS edge-format graph (1-based vertices, re-indexed to 0-based)."""
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate problem header")
            if len(parts) != 4 or parts[1] != "edge":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed header {line!r}") from None
            if not 1 <= n <= MAX_VERTICES:
                raise ValueError(f"line {lineno}: vertex count {n} outside [1, {MAX_VERTICES}]")
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem header")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed edge line {line!r}")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"line {lineno}: vertex index out of range in {line!r}")
            if u == v:
                raise ValueError(f"line {lineno}: self-loop on vertex {u}")
            edges.append((u - 1, v - 1))
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise ValueError("missing problem header")
    return Graph.from_edges(n, edges)


def pairwise_distances(positions: np.ndarray) -> np.ndarray:
    d = positions[:, None, :] - positions[None, :, :]
    return np.sqrt((d * d).sum(axis=2))


def random_ud_graph(
    n: int,
    seed: int,
    radius: float = 10.0,
    box: float = 40.0,
    min_spacing: float = 4.0,
) -> tuple[Graph, np.ndarray]:
    """Sample n points uniformly in a box (rejection sampling for >= min_spacing)
    and return the unit-disk graph at the given radius plus the positions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(50):
        pts: list[np.ndarray] = []
        ok = True
        for _ in range(n):
            for _ in range(400):
                p = rng.uniform(0.0, box, size=2)
                if all(float(np.hypot(*(p - q))) >= min_spacing for q in pts):
                    pts.append(p)
                    break
            else:
                ok = False
                break
        if ok:
            positions = np.array(pts)
            dist = pairwise_distances(positions)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if dist[u, v] <= radius
            ]
            return Graph.from_edges(n, edges), positions
    raise RuntimeError(f"could not place {n} points with spacing {min_spacing} in a {box}x{box} box")


def flip_random_pairs(g: Graph, seed: int, max_flips: int = 3) -> Graph:
    """Toggle the adjacency of k random vertex pairs, k uniform in {1..max_flips}.

    Used to derive non-unit-disk instances from unit-disk ones. Graphs with a
    single vertex have no pairs and are returned unchanged.
    """
    if g.n < 2:
        return g
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_flips + 1))
    edges = set(g.edges())
    flipped: set[tuple[int, int]] = set()
    while len(flipped) < k:
        u = int(rng.integers(0, g.n))
        v = int(rng.integers(0, g.n - 1))
        if v >= u:
            v += 1
        pair = (min(u, v), max(u, v))
        if pair in flipped:
            continue
        flipped.add(pair)
        if pair in edges:
            edges.remove(pair)
        else:
            edges.add(pair)
    return Graph.from_edges(g.n, edges)


def positions_to_csv(positions: np.ndarray) -> str:
    lines = ["vertex,x_um,y_um"]
    lines.extend(f"{i},{float(x)!r},{float(y)!r}" for i, (x, y) in enumerate(positions))
    return "\n".join(lines) + "\n"


def positions_from_csv(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows or rows[0] != "vertex,x_um,y_um":
        raise ValueError("malformed positions CSV header")
    pts = []
    for row in rows[1:]:
        _, x, y = row.split(",")
        pts.append((float(x), float(y)))
    return np.array(pts)
