"""Graph family constructors.

Families: uniform-ish random d-regular graphs via the stub-pairing
(configuration) model, hypercubes, blow-ups of a base graph, and the
disjoint-clique-union negative control.  Plus two small deterministic
graphs (cycle, Petersen) used as closed-form references in tests.

Pairing model: vertices contribute d stubs each; stubs are shuffled and
paired.  Self-loops and repeated edges are resolved by re-shuffling the
offending stubs only; a full restart happens when a round makes no
progress.  A whole-matching restart on every collision would be exactly
uniform but its success probability decays like exp(-(d^2-1)/4), which
is ~5e-44 at d=20, so the repair variant (the standard practical
sampler, asymptotically uniform for d = O(n^{1/3})) is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import RegularGraph
from .rng import TAG_GRAPH, make_generator

__all__ = [
    "FAMILIES",
    "GenSpec",
    "GenSpecError",
    "GenerationError",
    "blowup_pair_index",
    "cycle_graph",
    "generate",
    "petersen_graph",
]

FAMILIES = ("random_regular", "hypercube", "blowup", "clique_union")

RESTART_CAP = 1000
_STALL_ROUNDS = 50


class GenSpecError(ValueError):
    """Infeasible or inconsistent generation spec."""


class GenerationError(RuntimeError):
    """Sampler failed within its restart budget."""


@dataclass(frozen=True)
class GenSpec:
    """What to build: family, size, degree, seed, optional blow-up base."""

    family: str
    n: int = 0
    d: int = 0
    seed: int = 0
    blowup_factor: int | None = None
    base: "GenSpec | None" = None

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise GenSpecError(f"unknown family {self.family!r}")
        if self.family == "random_regular":
            if self.d < 1 or self.d >= self.n:
                raise GenSpecError(f"need 1 <= d < n, got n={self.n} d={self.d}")
            if self.n * self.d % 2 != 0:
                raise GenSpecError(f"n*d must be even, got n={self.n} d={self.d}")
        elif self.family == "hypercube":
            if self.d < 1 or self.n != 2**self.d:
                raise GenSpecError(f"hypercube needs n = 2^d, got n={self.n} d={self.d}")
        elif self.family == "clique_union":
            if self.d < 1 or self.n % (self.d + 1) != 0:
                raise GenSpecError(
                    f"clique_union needs (d+1) | n, got n={self.n} d={self.d}"
                )
        elif self.family == "blowup":
            if self.base is None:
                raise GenSpecError("blowup requires a base GenSpec")
            if self.base.family == "blowup":
                raise GenSpecError("blowup base must be a concrete family")
            if self.blowup_factor is None or self.blowup_factor < 2:
                raise GenSpecError("blowup_factor must be an integer >= 2")
            self.base.validate()
            s = self.blowup_factor
            if self.n not in (0, s * self.base.n) or self.d not in (0, s * self.base.d):
                raise GenSpecError(
                    "blowup n,d must be blank (0) or equal s*base.n, s*base.d"
                )


def generate(spec: GenSpec) -> RegularGraph:
    """Build the graph described by ``spec``; deterministic given seed."""
    spec.validate()
    if spec.family == "random_regular":
        return _random_regular(spec.n, spec.d, spec.seed)
    if spec.family == "hypercube":
        return _hypercube(spec.d)
    if spec.family == "clique_union":
        return _clique_union(spec.n, spec.d)
    base = generate(spec.base)
    return _blowup(base, spec.blowup_factor)


# ----------------------------------------------------------------------
# random regular: stub pairing with per-round repair
# ----------------------------------------------------------------------
def _try_pairing(n: int, d: int, rng: np.random.Generator):
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    accepted = np.empty(n * d // 2, dtype=np.int64)  # edge keys lo*n+hi
    n_acc = 0
    pending = stubs
    stall = 0
    while pending.size:
        u = pending[0::2]
        v = pending[1::2]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        key = lo * n + hi
        good = lo != hi
        if n_acc:
            acc_sorted = np.sort(accepted[:n_acc])
            pos = np.searchsorted(acc_sorted, key)
            pos[pos == n_acc] = 0
            good &= acc_sorted[pos] != key
        # keep only the first occurrence of each key within this round
        _, first = np.unique(key, return_index=True)
        first_mask = np.zeros(key.size, dtype=bool)
        first_mask[first] = True
        good &= first_mask
        n_new = int(np.count_nonzero(good))
        if n_new:
            accepted[n_acc : n_acc + n_new] = key[good]
            n_acc += n_new
            stall = 0
        else:
            stall += 1
            if stall >= _STALL_ROUNDS:
                return None  # dead end; caller restarts
        bad = ~good
        pending = np.concatenate([u[bad], v[bad]])
        rng.shuffle(pending)
    return accepted


def _random_regular(n: int, d: int, seed: int) -> RegularGraph:
    rng = make_generator(seed, TAG_GRAPH)
    for _ in range(RESTART_CAP):
        keys = _try_pairing(n, d, rng)
        if keys is not None:
            return RegularGraph.from_edges(n, d, keys // n, keys % n)
    raise GenerationError(
        f"pairing model failed after {RESTART_CAP} restarts for n={n} d={d}"
    )


# ----------------------------------------------------------------------
# deterministic families
# ----------------------------------------------------------------------
def _hypercube(d: int) -> RegularGraph:
    n = 2**d
    verts = np.arange(n, dtype=np.int64)
    nbrs = verts[:, None] ^ (1 << np.arange(d, dtype=np.int64))[None, :]
    nbrs = np.sort(nbrs, axis=1)
    rows = np.repeat(verts, d)
    cols = nbrs.ravel()
    keep = cols > rows
    return RegularGraph.from_edges(n, d, rows[keep], cols[keep])


def _clique_union(n: int, d: int) -> RegularGraph:
    k = d + 1
    base = np.arange(n, dtype=np.int64) // k * k
    within = np.arange(n, dtype=np.int64) % k
    others = np.arange(k, dtype=np.int64)
    nbrs = base[:, None] + others[None, :]
    # drop the diagonal (self) entry of each row
    mask = others[None, :] != within[:, None]
    nbrs = nbrs[mask].reshape(n, d)
    rows = np.repeat(np.arange(n, dtype=np.int64), d)
    cols = nbrs.ravel()
    keep = cols > rows
    return RegularGraph.from_edges(n, d, rows[keep], cols[keep])


def _blowup(base: RegularGraph, s: int) -> RegularGraph:
    """Replace every base vertex b by the independent block {s*b..s*b+s-1}."""
    n0, d0 = base.n, base.d
    n, d = s * n0, s * d0
    base_rows = base.nbrs2d.astype(np.int64)  # (n0, d0), sorted
    # block-expanded neighbor row for each base vertex, shared by its block
    expanded = (base_rows[:, :, None] * s + np.arange(s, dtype=np.int64)).reshape(n0, d)
    nbrs = np.repeat(expanded, s, axis=0)  # (n, d), rows stay sorted
    rows = np.repeat(np.arange(n, dtype=np.int64), d)
    cols = nbrs.ravel()
    keep = cols > rows
    return RegularGraph.from_edges(n, d, rows[keep], cols[keep], blowup_factor=s)


def blowup_pair_index(g: RegularGraph, v: int) -> int:
    """Base vertex whose independent block contains ``v``."""
    if g.blowup_factor is None:
        raise ValueError("blowup_pair_index requires a blow-up graph")
    if not 0 <= v < g.n:
        raise ValueError(f"vertex id {v} out of range for n={g.n}")
    return v // g.blowup_factor


# ----------------------------------------------------------------------
# small closed-form references
# ----------------------------------------------------------------------
def cycle_graph(n: int) -> RegularGraph:
    if n < 3:
        raise GenSpecError("cycle needs n >= 3")
    verts = np.arange(n, dtype=np.int64)
    return RegularGraph.from_edges(
        n,
        2,
        np.concatenate([verts[:-1], [0]]),
        np.concatenate([verts[1:], [n - 1]]),
    )


def petersen_graph() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    edges = outer + inner + spokes
    u = np.array([min(e) for e in edges], dtype=np.int64)
    v = np.array([max(e) for e in edges], dtype=np.int64)
    return RegularGraph.from_edges(10, 3, u, v)
