"""Component census of an induced subgraph, plus exact counts of small
tree subgraphs used to predict how many vertices sit in small components.

Counting routes are deliberately redundant: closed forms for trees on
up to 4 vertices, and an exhaustive connected-set enumeration with a
matrix-tree determinant that works on any graph small enough to hold in
machine words.  Tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .graph_core import RegularGraph
from .percolation import PercolationSample

__all__ = [
    "ComponentCensus",
    "count_acyclic_connected_ksets",
    "count_trees_bruteforce",
    "longest_cycle_lower_bound",
    "take_census",
    "validate_cycle",
]

_BRUTE_VERTEX_LIMIT = 64


@dataclass(frozen=True)
class ComponentCensus:
    """Per-component statistics of the retained induced subgraph.

    Components are sorted by size descending, ties by smallest member.
    tree_counts[k] is the number of tree components on exactly k
    vertices for k <= k_max (index 0 unused).  Stragglers are retained
    vertices (edges) outside the largest component and outside small
    tree components.
    """

    n: int
    retained: int
    k_max: int
    sizes: np.ndarray
    edges: np.ndarray
    roots: np.ndarray
    tree_counts: np.ndarray
    largest: int
    second_largest: int
    largest_edges: int
    retained_edges: int
    straggler_vertices: int
    straggler_edges: int
    cycle_lb: int

    @property
    def num_components(self) -> int:
        return self.sizes.size

    def tree_count(self, k: int) -> int:
        if not 1 <= k <= self.k_max:
            raise ValueError(f"tree census only covers 1..{self.k_max}, got {k}")
        return int(self.tree_counts[k])

    def small_tree_vertices(self) -> int:
        ks = np.arange(self.k_max + 1, dtype=np.int64)
        return int((ks * self.tree_counts).sum())

    def to_summary(self) -> dict:
        return {
            "retained": int(self.retained),
            "components": int(self.num_components),
            "largest": int(self.largest),
            "second_largest": int(self.second_largest),
            "largest_edges": int(self.largest_edges),
            "retained_edges": int(self.retained_edges),
            "tree_counts": [int(t) for t in self.tree_counts[1:]],
            "straggler_vertices": int(self.straggler_vertices),
            "straggler_edges": int(self.straggler_edges),
            "cycle_lb": int(self.cycle_lb),
        }


def take_census(g: RegularGraph, sample: PercolationSample, k_max: int = 4) -> ComponentCensus:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    mask = sample.membership
    n = g.n
    parent = np.empty(n, dtype=np.int64)
    _kernels.union_find_components(g.neighbors, g.d, mask, parent)
    size_acc = np.zeros(n, dtype=np.int64)
    edge_acc = np.zeros(n, dtype=np.int64)
    _kernels.census_accumulate(g.neighbors, g.d, mask, parent, size_acc, edge_acc)
    roots = np.flatnonzero(mask & (parent == np.arange(n)))
    sizes = size_acc[roots]
    edges = edge_acc[roots]
    order = np.lexsort((roots, -sizes))
    roots, sizes, edges = roots[order], sizes[order], edges[order]

    tree_counts = np.zeros(k_max + 1, dtype=np.int64)
    tree_mask = (sizes <= k_max) & (edges == sizes - 1)
    if tree_mask.any():
        tree_counts += np.bincount(sizes[tree_mask], minlength=k_max + 1)[: k_max + 1]

    largest = int(sizes[0]) if sizes.size else 0
    second = int(sizes[1]) if sizes.size > 1 else 0
    largest_edges = int(edges[0]) if edges.size else 0
    retained_edges = int(edges.sum())

    # stragglers: drop the largest component, then drop small trees
    if sizes.size:
        rest_sizes, rest_edges = sizes[1:], edges[1:]
        rest_tree = (rest_sizes <= k_max) & (rest_edges == rest_sizes - 1)
        strag_v = int(rest_sizes.sum() - rest_sizes[rest_tree].sum())
        strag_e = int(rest_edges.sum() - rest_edges[rest_tree].sum())
    else:
        strag_v = strag_e = 0

    (cycle_lb, _, _), _, _ = _cycle_scan(g, mask)

    return ComponentCensus(
        n=n,
        retained=sample.retained_count,
        k_max=k_max,
        sizes=sizes,
        edges=edges,
        roots=roots,
        tree_counts=tree_counts,
        largest=largest,
        second_largest=second,
        largest_edges=largest_edges,
        retained_edges=retained_edges,
        straggler_vertices=strag_v,
        straggler_edges=strag_e,
        cycle_lb=int(cycle_lb),
    )


def _cycle_scan(g: RegularGraph, mask: np.ndarray):
    depth = np.full(g.n, -1, dtype=np.int64)
    parent = np.full(g.n, -1, dtype=np.int64)
    return _kernels.cycle_scan(g.neighbors, g.d, mask, depth, parent), depth, parent


def longest_cycle_lower_bound(g: RegularGraph, sample: PercolationSample, with_witness: bool = False):
    """Best back-edge cycle found by one depth-first sweep of the retained
    subgraph: a lower bound on the true longest cycle length (0 if the
    subgraph is a forest).  With with_witness=True also returns the
    vertex sequence of a cycle achieving the bound, or None."""
    (res, depth, parent) = _cycle_scan(g, sample.membership)
    best, deep_end, top_end = res
    if not with_witness:
        return int(best)
    if best == 0:
        return 0, None
    cycle = [int(deep_end)]
    v = int(deep_end)
    while v != int(top_end):
        v = int(parent[v])
        cycle.append(v)
    cycle.reverse()  # ancestor first; the back edge deep_end -> top_end closes it
    return int(best), cycle


def validate_cycle(g: RegularGraph, cycle, sample: PercolationSample | None = None) -> bool:
    if cycle is None or len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    if sample is not None and not all(sample.membership[v] for v in cycle):
        return False
    m = len(cycle)
    return all(g.has_edge(cycle[i], cycle[(i + 1) % m]) for i in range(m))


# ---------------------------------------------------------------------------
# exact small-subgraph counts

def _adj_masks(g: RegularGraph) -> list[int]:
    masks = [0] * g.n
    rows = g.nbrs2d
    for v in range(g.n):
        acc = 0
        for w in rows[v]:
            acc |= 1 << int(w)
        masks[v] = acc
    return masks


def _connected_ksets(masks: list[int], k: int):
    """Yields every k-vertex connected induced subgraph exactly once, as a
    bitmask (Wernicke-style extension enumeration)."""
    n = len(masks)
    for v in range(n):
        gt = ~((1 << (v + 1)) - 1)
        sub = 1 << v
        ext = masks[v] & gt
        yield from _extend(masks, sub, ext, masks[v] | sub, gt, k)


def _extend(masks, sub, ext, closure, gt, k):
    if sub.bit_count() == k:
        yield sub
        return
    while ext:
        wbit = ext & -ext
        ext &= ext - 1
        w = wbit.bit_length() - 1
        new_ext = ext | (masks[w] & ~closure & gt)
        yield from _extend(masks, sub | wbit, new_ext, closure | masks[w] | wbit, gt, k)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask &= mask - 1
    return out


def _spanning_tree_count(masks: list[int], vs: list[int]) -> int:
    """Matrix-tree theorem with exact integer arithmetic (Bareiss)."""
    k = len(vs)
    if k == 1:
        return 1
    lap = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if masks[vs[i]] >> vs[j] & 1:
                lap[i][i] += 1
                lap[j][j] += 1
                lap[i][j] -= 1
                lap[j][i] -= 1
    a = [row[: k - 1] for row in lap[: k - 1]]
    m = k - 1
    prev = 1
    for i in range(m - 1):
        if a[i][i] == 0:
            for r in range(i + 1, m):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    for row in a:
                        row[i], row[r] = row[r], row[i]  # symmetric swap keeps det sign
                    break
            else:
                return 0
        for r in range(i + 1, m):
            for c in range(i + 1, m):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return a[m - 1][m - 1]


def _induced_edge_count(masks: list[int], sub: int) -> int:
    total = 0
    for v in _bits(sub):
        total += (masks[v] & sub).bit_count()
    return total // 2


def _brute_tree_count(g: RegularGraph, k: int) -> int:
    masks = _adj_masks(g)
    return sum(_spanning_tree_count(masks, _bits(s)) for s in _connected_ksets(masks, k))


def _brute_acyclic_count(g: RegularGraph, k: int) -> int:
    masks = _adj_masks(g)
    return sum(1 for s in _connected_ksets(masks, k) if _induced_edge_count(masks, s) == k - 1)


def _codegree_sum(g: RegularGraph) -> int:
    m = g.n * g.d // 2
    p4 = int(_kernels.tree_p4_count(g.neighbors, g.d, g.n))
    return m * (g.d - 1) ** 2 - p4


def _closed_tree_count(g: RegularGraph, k: int) -> int:
    n, d = g.n, g.d
    if k == 1:
        return n
    if k == 2:
        return n * d // 2
    if k == 3:
        # every tree on 3 vertices is a path; one per center-plus-neighbor-pair
        return n * comb(d, 2)
    if k == 4:
        stars = n * comb(d, 3)
        paths = int(_kernels.tree_p4_count(g.neighbors, g.d, g.n))
        return stars + paths
    raise ValueError(f"no closed form for trees on {k} vertices")


def _closed_acyclic_count(g: RegularGraph, k: int) -> int:
    n, d = g.n, g.d
    if k == 1:
        return n
    if k == 2:
        return n * d // 2
    if k == 3:
        triangles = _codegree_sum(g) // 3
        return n * comb(d, 2) - 3 * triangles
    if k == 4:
        p4 = int(_kernels.induced_p4_count(g.neighbors, g.d, g.n))
        star = int(_kernels.induced_star_count(g.neighbors, g.d, g.n))
        return p4 + star
    raise ValueError(f"no closed form for acyclic sets on {k} vertices")


def count_trees_bruteforce(g: RegularGraph, k: int) -> int:
    """Number of (not necessarily induced) k-vertex tree subgraphs.

    Exhaustive on graphs with at most 64 vertices; closed forms cover
    k <= 4 on larger graphs.  Anything else is out of reach by design.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k > g.n:
        return 0
    if g.n <= _BRUTE_VERTEX_LIMIT:
        return _brute_tree_count(g, k)
    if k <= 4:
        return _closed_tree_count(g, k)
    raise ValueError(
        f"exact tree count needs n <= {_BRUTE_VERTEX_LIMIT} or k <= 4 (got n={g.n}, k={k})"
    )


def count_acyclic_connected_ksets(g: RegularGraph, k: int) -> int:
    """Number of k-vertex sets whose induced subgraph is a tree (connected
    and acyclic).  Same reach as count_trees_bruteforce."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > g.n:
        return 0
    if g.n <= _BRUTE_VERTEX_LIMIT:
        return _brute_acyclic_count(g, k)
    if k <= 4:
        return _closed_acyclic_count(g, k)
    raise ValueError(
        f"exact acyclic count needs n <= {_BRUTE_VERTEX_LIMIT} or k <= 4 (got n={g.n}, k={k})"
    )
