"""Exact ground-truth counts: Eulerian circuits, spanning trees, directed trees.

Circuits are counted up to cyclic rotation only (a circuit and its reversal
are different).  Each rotation class traverses the cut edge exactly once, so
counting the edge sequences that start by crossing the cut edge in either
direction counts every class exactly once.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np
from numba import njit

from .graph import Graph, require_eulerian

PRUNE_EVERY = 4
SPANNING_EDGE_CAP = 24
DIRECTED_VERTEX_CAP = 6


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial_count: int, nodes_explored: int):
        self.partial_count = partial_count
        self.nodes_explored = nodes_explored
        super().__init__(message)


@dataclass(frozen=True)
class ExactCount:
    count: int
    nodes_explored: int
    elapsed: float
    cut_edge: tuple[int, int]


@njit(cache=True, nogil=True)
def _remaining_connected(cur, used, remaining, nbr_v, nbr_e, deg, seen, queue):
    # Every unused edge must be reachable from `cur` through unused edges.
    n = deg.shape[0]
    for i in range(n):
        seen[i] = 0
    seen[cur] = 1
    queue[0] = cur
    head, tail, reached = 0, 1, 0
    while head < tail:
        x = queue[head]
        head += 1
        for i in range(deg[x]):
            e = nbr_e[x, i]
            if used[e] == 0:
                reached += 1
                y = nbr_v[x, i]
                if seen[y] == 0:
                    seen[y] = 1
                    queue[tail] = y
                    tail += 1
    return reached == 2 * remaining


@njit(cache=True, nogil=True)
def _dfs_count(start, used, depth0, m, nbr_v, nbr_e, deg, prune_every, budget):
    """Count completions of a partial trail ending at `start` with `depth0` edges used.

    Returns (count, nodes, exhausted).
    """
    n = deg.shape[0]
    remaining_total = m - depth0
    if remaining_total == 0:
        return 1, 0, False
    stack_v = np.empty(remaining_total + 1, np.int64)
    stack_i = np.zeros(remaining_total + 1, np.int64)
    stack_e = np.empty(remaining_total + 1, np.int64)
    seen = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    d = 0
    stack_v[0] = start
    count = 0
    nodes = 0
    while d >= 0:
        v = stack_v[d]
        i = stack_i[d]
        if i < deg[v]:
            stack_i[d] = i + 1
            e = nbr_e[v, i]
            if used[e] != 0:
                continue
            used[e] = 1
            nodes += 1
            if nodes > budget:
                used[e] = 0
                for k in range(d, 0, -1):
                    used[stack_e[k]] = 0
                return count, nodes, True
            w = nbr_v[v, i]
            if d + 1 == remaining_total:
                count += 1
                used[e] = 0
                continue
            if prune_every > 0 and (depth0 + d + 1) % prune_every == 0:
                if not _remaining_connected(
                    w, used, remaining_total - d - 1, nbr_v, nbr_e, deg, seen, queue
                ):
                    used[e] = 0
                    continue
            d += 1
            stack_v[d] = w
            stack_i[d] = 0
            stack_e[d] = e
        else:
            if d > 0:
                used[stack_e[d]] = 0
            d -= 1
    return count, nodes, False


def _neighbour_arrays(g: Graph, edge_index: dict[tuple[int, int], int]):
    deg = g.degrees
    width = max(int(deg.max(initial=0)), 1)
    nbr_v = np.zeros((g.n, width), np.int64)
    nbr_e = np.zeros((g.n, width), np.int64)
    for u in range(g.n):
        for i, v in enumerate(g.adjacency[u]):
            nbr_v[u, i] = v
            nbr_e[u, i] = edge_index[(min(u, v), max(u, v))]
    return nbr_v, nbr_e, deg.astype(np.int64)


def _prefix_tasks(g, edge_index, cut):
    """Split the search on its first two levels: cut-edge direction, then next edge."""
    a, b = cut
    ce = edge_index[cut]
    tasks = []
    for x, y in ((a, b), (b, a)):
        if g.m == 1:
            tasks.append((y, (ce,)))
            continue
        for z in g.adjacency[y]:
            e = edge_index[(min(y, z), max(y, z))]
            if e != ce:
                tasks.append((z, (ce, e)))
    return tasks


def count_eulerian_circuits(
    g: Graph,
    node_budget: int | None = None,
    cut_edge: tuple[int, int] | None = None,
    workers: int = 1,
    prune_every: int = PRUNE_EVERY,
) -> ExactCount:
    """Exact EC(G) by depth-first search over directed edge traversals.

    ``cut_edge`` is 1-based and defaults to the lexicographically smallest
    edge.  Raises ``BudgetExceeded`` when more than ``node_budget`` edge
    traversals would be needed; the partial count rides on the exception.
    """
    require_eulerian(g)
    t0 = time.perf_counter()
    edges = g.sorted_edges()
    if not edges:
        return ExactCount(1, 0, time.perf_counter() - t0, (0, 0))
    if cut_edge is None:
        cut = edges[0]
    else:
        u, v = sorted((cut_edge[0] - 1, cut_edge[1] - 1))
        cut = (u, v)
        if cut not in g.edges:
            raise ValueError(f"cut edge {cut_edge} is not an edge of the graph")
    edge_index = {e: k for k, e in enumerate(edges)}
    nbr_v, nbr_e, deg = _neighbour_arrays(g, edge_index)
    m = g.m
    budget = np.iinfo(np.int64).max if node_budget is None else int(node_budget)
    tasks = _prefix_tasks(g, edge_index, cut)

    def run(task, task_budget):
        start, prefix = task
        used = np.zeros(m, np.int64)
        used[list(prefix)] = 1
        c, nodes, stop = _dfs_count(
            start, used, len(prefix), m, nbr_v, nbr_e, deg, prune_every, task_budget
        )
        return int(c), int(nodes) + len(prefix), bool(stop)

    total = nodes = 0
    if workers <= 1:
        for task in tasks:
            c, k, stop = run(task, max(budget - nodes, 0))
            total += c
            nodes += k
            if stop or nodes > budget:
                raise BudgetExceeded(f"node budget {budget} exhausted", total, nodes)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: run(t, budget), tasks))
        for c, k, stop in results:
            total += c
            nodes += k
        if any(r[2] for r in results) or nodes > budget:
            raise BudgetExceeded(f"node budget {budget} exhausted", total, nodes)
    return ExactCount(
        count=total,
        nodes_explored=nodes,
        elapsed=time.perf_counter() - t0,
        cut_edge=(cut[0] + 1, cut[1] + 1),
    )


def find_eulerian_circuit(g: Graph) -> list[int]:
    """One Eulerian circuit as a closed 1-based vertex sequence (Hierholzer)."""
    require_eulerian(g)
    if g.m == 0:
        return [1]
    remaining = {v: list(g.adjacency[v]) for v in range(g.n)}
    used: set[tuple[int, int]] = set()
    start = min(g.edges)[0]
    stack, circuit = [start], []
    while stack:
        v = stack[-1]
        nxt = remaining[v]
        while nxt and (min(v, nxt[-1]), max(v, nxt[-1])) in used:
            nxt.pop()
        if nxt:
            w = nxt.pop()
            used.add((min(v, w), max(v, w)))
            stack.append(w)
        else:
            circuit.append(stack.pop())
    return [v + 1 for v in reversed(circuit)]


def _is_spanning_tree(n: int, chosen) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in chosen:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def brute_force_spanning_trees(g: Graph) -> int:
    """Count (n-1)-edge subsets that are acyclic (hence connected and spanning)."""
    if g.m > SPANNING_EDGE_CAP:
        raise ValueError(f"subset enumeration capped at {SPANNING_EDGE_CAP} edges, got {g.m}")
    if g.n <= 1:
        return 1
    edges = g.sorted_edges()
    return sum(1 for sub in itertools.combinations(edges, g.n - 1) if _is_spanning_tree(g.n, sub))


def brute_force_directed_trees(weights, root: int) -> Fraction:
    """Sum over arborescences toward ``root`` (1-based) of the product of arc weights.

    Enumerates every parent map on the non-root vertices and keeps those
    without cycles; ``weights[j][k]`` weights the arc j+1 -> k+1.
    """
    w = [[Fraction(x) for x in row] for row in weights]
    n = len(w)
    if n > DIRECTED_VERTEX_CAP:
        raise ValueError(f"directed-tree enumeration capped at n={DIRECTED_VERTEX_CAP}")
    r = root - 1
    if not 0 <= r < n:
        raise ValueError(f"root must be in 1..{n}")
    others = [v for v in range(n) if v != r]
    total = Fraction(0)
    for parents in itertools.product(range(n), repeat=len(others)):
        par = dict(zip(others, parents))
        if any(v == p for v, p in par.items()):
            continue
        ok = True
        for v in others:
            steps, x = 0, v
            while x != r and steps <= n:
                x = par[x]
                steps += 1
            if x != r:
                ok = False
                break
        if ok:
            total += prod((w[v][par[v]] for v in others), start=Fraction(1))
    return total
