"""Simple undirected graphs, the edge-list text format, and test-family generators.

Vertices are 1-based in every external surface (edge lists, reports) and
0-based internally.  ``Graph.edges`` stores 0-based pairs ``(u, v)`` with
``u < v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Malformed edge-list document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ValueError):
    """Graph is not simple, connected and even."""


class GenerationError(RuntimeError):
    """Random generator ran out of attempts."""

    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(message)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded through ``SeedSequence(seed)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 substream ``index`` of ``seed`` (SeedSequence spawn key)."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(compare=False, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from 0-based pairs; rejects loops, duplicates and out-of-range ids."""
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u + 1}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u + 1}, {v + 1}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({key[0] + 1}, {key[1] + 1})")
            seen.add(key)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        return cls(n, frozenset(seen), adjacency)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: Iterable[int]) -> "Graph":
        """Graph with vertex ``i`` renamed to ``perm[i]`` (0-based permutation)."""
        p = list(perm)
        if sorted(p) != list(range(self.n)):
            raise ValueError("not a permutation of the vertex set")
        return Graph.from_edges(self.n, ((p[u], p[v]) for u, v in self.edges))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class ValidationReport:
    is_simple: bool
    is_connected: bool
    all_degrees_even: bool
    odd_vertices: list[int]
    component_count: int

    @property
    def ok(self) -> bool:
        return self.is_simple and self.is_connected and self.all_degrees_even

    def to_dict(self) -> dict:
        return {
            "is_simple": self.is_simple,
            "is_connected": self.is_connected,
            "all_degrees_even": self.all_degrees_even,
            "odd_vertices": list(self.odd_vertices),
            "component_count": self.component_count,
        }


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format (1-based ids).

    Blank lines are skipped; errors carry the 1-based line number.
    """
    rows = [(i + 1, line.split()) for i, line in enumerate(text.splitlines())]
    rows = [(no, tok) for no, tok in rows if tok]
    if not rows:
        raise GraphFormatError("empty document")
    head_no, head = rows[0]
    if len(head) != 2:
        raise GraphFormatError("expected header 'n m'", head_no)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError("header values must be integers", head_no) from None
    if n < 1 or m < 0:
        raise GraphFormatError("need n >= 1 and m >= 0", head_no)
    body = rows[1:]
    if len(body) != m:
        line = body[m][0] if len(body) > m else None
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", line)

    seen: set[tuple[int, int]] = set()
    for no, tok in body:
        if len(tok) != 2:
            raise GraphFormatError("expected 'u v'", no)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphFormatError("vertex ids must be integers", no) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", no)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", no)
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in seen:
            raise GraphFormatError(f"duplicate edge {u} {v}", no)
        seen.add(key)
    return Graph.from_edges(n, seen)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete_graph needs n >= 1")
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle_graph needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shifted = ((u + a.n, v + a.n) for u, v in b.edges)
    return Graph.from_edges(a.n + b.n, list(a.edges) + list(shifted))


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in g.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def validate(g: Graph) -> ValidationReport:
    # Graph construction already enforces simplicity; re-check the stored data anyway.
    simple = all(u != v for u, v in g.edges) and sum(map(len, g.adjacency)) == 2 * g.m
    odd = [j + 1 for j, a in enumerate(g.adjacency) if len(a) % 2]
    count = len(components(g))
    return ValidationReport(
        is_simple=simple,
        is_connected=count == 1,
        all_degrees_even=not odd,
        odd_vertices=odd,
        component_count=count,
    )


def require_eulerian(g: Graph) -> None:
    rep = validate(g)
    if not rep.is_connected:
        raise PreconditionError(f"graph is disconnected ({rep.component_count} components)")
    if not rep.all_degrees_even:
        raise PreconditionError(f"odd degrees at vertices {rep.odd_vertices}")


def random_even_graph(n: int, p: float, seed: int, max_attempts: int = 1000) -> Graph:
    """Connected simple graph with all degrees even, derived from G(n, p).

    Each attempt draws G(n, p), pairs the odd-degree vertices by a uniformly
    random perfect matching and toggles the edge of every matched pair.
    Attempts that come out disconnected are redrawn from the same stream.
    """
    if n < 3:
        raise ValueError("random_even_graph needs n >= 3")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    for _ in range(max_attempts):
        adj = np.zeros((n, n), dtype=bool)
        keep = rng.random(iu.size) < p
        adj[iu[keep], ju[keep]] = True
        adj |= adj.T
        odd = np.flatnonzero(adj.sum(axis=1) % 2)
        odd = rng.permutation(odd)
        for a, b in odd.reshape(-1, 2):
            adj[a, b] = adj[b, a] = not adj[a, b]
        u, v = np.nonzero(np.triu(adj, 1))
        g = Graph.from_edges(n, zip(u.tolist(), v.tolist()))
        if validate(g).ok:
            return g
    raise GenerationError(
        f"no connected even graph for n={n}, p={p}, seed={seed} after {max_attempts} attempts",
        max_attempts,
    )
