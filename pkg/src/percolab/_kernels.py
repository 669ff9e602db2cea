"""Hot loops shared by percolation, census and verify.

Every kernel is a plain function over preallocated numpy arrays,
compiled with numba when enabled (see _accel).  Keep signatures
primitive: flat int32 adjacency, bool masks, scalar ints.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

__all__ = [
    "bfs_grow",
    "census_accumulate",
    "cycle_scan",
    "dfs_explore",
    "distinct_external",
    "induced_p4_count",
    "induced_star_count",
    "tree_p4_count",
    "union_find_components",
]


# state codes used by dfs_explore
T_UNVISITED = 0
U_STACK = 1
S_DONE = 2
W_REJECTED = 3


@njit
def dfs_explore(nbrs, d, order, coins, state, comp, accepted_order, epoch_starts, queries):
    """Stack exploration driven by one coin per first-touched vertex.

    nbrs: flat (n*d) neighbor table, each row sorted by scan priority.
    order: vertex ids in root-selection priority order.
    coins: uint8 coin stream, one entry per vertex overall.
    Outputs written in place; returns (coins_used, n_epochs, n_accepted).
    """
    n = order.size
    stack = np.empty(n, dtype=np.int64)
    ptr = np.zeros(n, dtype=np.int64)
    top = -1
    cursor = 0
    coin_i = 0
    n_epochs = 0
    n_acc = 0
    while True:
        if top >= 0:
            v = stack[top]
            base = v * d
            p = ptr[v]
            while p < d and state[nbrs[base + p]] != T_UNVISITED:
                p += 1
            ptr[v] = p
            if p == d:
                top -= 1
                state[v] = S_DONE
            else:
                w = nbrs[base + p]
                heads = coins[coin_i]
                coin_i += 1
                queries[n_epochs - 1] += 1
                if heads:
                    state[w] = U_STACK
                    comp[w] = n_epochs - 1
                    accepted_order[n_acc] = w
                    n_acc += 1
                    top += 1
                    stack[top] = w
                else:
                    state[w] = W_REJECTED
        else:
            while cursor < n and state[order[cursor]] != T_UNVISITED:
                cursor += 1
            if cursor == n:
                break
            r = order[cursor]
            heads = coins[coin_i]
            if heads:
                epoch_starts[n_epochs] = coin_i
                n_epochs += 1
                queries[n_epochs - 1] = 1
                state[r] = U_STACK
                comp[r] = n_epochs - 1
                accepted_order[n_acc] = r
                n_acc += 1
                top = 0
                stack[0] = r
            else:
                state[r] = W_REJECTED
            coin_i += 1
    return coin_i, n_epochs, n_acc


@njit
def union_find_components(nbrs, d, mask, parent):
    """Union-find over induced edges; roots become component minima."""
    n = mask.size
    for i in range(n):
        parent[i] = i
    for u in range(n):
        if mask[u]:
            base = u * d
            for j in range(d):
                w = nbrs[base + j]
                if w > u and mask[w]:
                    ru = u
                    while parent[ru] != ru:
                        parent[ru] = parent[parent[ru]]
                        ru = parent[ru]
                    rw = w
                    while parent[rw] != rw:
                        parent[rw] = parent[parent[rw]]
                        rw = parent[rw]
                    if ru < rw:
                        parent[rw] = ru
                    elif rw < ru:
                        parent[ru] = rw
    for v in range(n):
        if mask[v]:
            r = v
            while parent[r] != r:
                r = parent[r]
            # full compression so parent[v] is the component minimum
            c = v
            while parent[c] != r:
                nxt = parent[c]
                parent[c] = r
                c = nxt


@njit
def census_accumulate(nbrs, d, mask, parent, sizes, edges):
    """Per-root vertex and induced-edge tallies (after union_find_components)."""
    n = mask.size
    for v in range(n):
        if mask[v]:
            sizes[parent[v]] += 1
    for u in range(n):
        if mask[u]:
            base = u * d
            for j in range(d):
                w = nbrs[base + j]
                if w > u and mask[w]:
                    edges[parent[u]] += 1


@njit
def cycle_scan(nbrs, d, mask, depth, parent):
    """DFS forest over the induced subgraph; longest back-edge cycle.

    Returns (best_len, deep_end, high_end); best_len 0 when acyclic.
    """
    n = mask.size
    visited = np.zeros(n, dtype=np.uint8)
    ptr = np.zeros(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    best = 0
    best_u = -1
    best_v = -1
    for s in range(n):
        if mask[s] and visited[s] == 0:
            visited[s] = 1
            depth[s] = 0
            parent[s] = -1
            top = 0
            stack[0] = s
            while top >= 0:
                v = stack[top]
                if ptr[v] < d:
                    w = nbrs[v * d + ptr[v]]
                    ptr[v] += 1
                    if mask[w]:
                        if visited[w] == 0:
                            visited[w] = 1
                            parent[w] = v
                            depth[w] = depth[v] + 1
                            top += 1
                            stack[top] = w
                        elif w != parent[v] and depth[w] < depth[v]:
                            cand = depth[v] - depth[w] + 1
                            if cand > best:
                                best = cand
                                best_u = v
                                best_v = w
                else:
                    top -= 1
    return best, best_u, best_v


@njit
def distinct_external(nbrs, d, members, stamp, token):
    """|N_G(S) \\ S| for S given as an index array, using a stamp scratch."""
    m = members.size
    for i in range(m):
        stamp[members[i]] = token  # member mark
    count = 0
    for i in range(m):
        base = members[i] * d
        for j in range(d):
            w = nbrs[base + j]
            if stamp[w] < token:
                stamp[w] = token + 1  # neighbor mark
                count += 1
    return count


@njit
def distinct_external_masked(nbrs, d, members, allowed, stamp, token):
    """|N(S) \\ S| restricted to vertices with allowed[w] true."""
    m = members.size
    for i in range(m):
        stamp[members[i]] = token
    count = 0
    for i in range(m):
        base = members[i] * d
        for j in range(d):
            w = nbrs[base + j]
            if stamp[w] < token and allowed[w]:
                stamp[w] = token + 1
                count += 1
    return count


@njit
def bfs_grow(nbrs, d, allowed, start, target, in_set, queue):
    """Grow a connected set inside ``allowed`` to ``target`` vertices (BFS).

    Returns the achieved size; the set is queue[:size], flagged in in_set.
    """
    qt = 0
    queue[qt] = start
    qt += 1
    in_set[start] = 1
    size = 1
    idx = 0
    while idx < qt and size < target:
        v = queue[idx]
        idx += 1
        base = v * d
        for j in range(d):
            w = nbrs[base + j]
            if allowed[w] and in_set[w] == 0:
                in_set[w] = 1
                queue[qt] = w
                qt += 1
                size += 1
                if size == target:
                    break
    return size


@njit
def _has_edge(nbrs, d, u, v):
    lo = u * d
    hi = lo + d
    while lo < hi:
        mid = (lo + hi) // 2
        x = nbrs[mid]
        if x == v:
            return True
        if x < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit
def tree_p4_count(nbrs, d, n):
    """3-edge paths: sum over edges (b<c) of (d-1)^2 - |N(b) ∩ N(c)|."""
    total = 0
    for b in range(n):
        base_b = b * d
        for jb in range(d):
            c = nbrs[base_b + jb]
            if c <= b:
                continue
            codeg = 0
            ib = 0
            ic = 0
            base_c = c * d
            while ib < d and ic < d:
                x = nbrs[base_b + ib]
                y = nbrs[base_c + ic]
                if x == y:
                    codeg += 1
                    ib += 1
                    ic += 1
                elif x < y:
                    ib += 1
                else:
                    ic += 1
            total += (d - 1) * (d - 1) - codeg
    return total


@njit
def induced_p4_count(nbrs, d, n):
    """4-sets {a,b,c,e} whose induced graph is the path a-b-c-e."""
    total = 0
    for b in range(n):
        base_b = b * d
        for jb in range(d):
            c = nbrs[base_b + jb]
            if c <= b:
                continue
            base_c = c * d
            for ja in range(d):
                a = nbrs[base_b + ja]
                if a == c or _has_edge(nbrs, d, a, c):
                    continue
                for je in range(d):
                    e = nbrs[base_c + je]
                    if e == b or e == a:
                        continue
                    if _has_edge(nbrs, d, e, b) or _has_edge(nbrs, d, e, a):
                        continue
                    total += 1
    return total


@njit
def induced_star_count(nbrs, d, n):
    """4-sets inducing a claw: center v plus 3 pairwise non-adjacent neighbors."""
    total = 0
    for v in range(n):
        base = v * d
        for i in range(d):
            a = nbrs[base + i]
            for j in range(i + 1, d):
                b = nbrs[base + j]
                if _has_edge(nbrs, d, a, b):
                    continue
                for k in range(j + 1, d):
                    c = nbrs[base + k]
                    if _has_edge(nbrs, d, a, c) or _has_edge(nbrs, d, b, c):
                        continue
                    total += 1
    return total
