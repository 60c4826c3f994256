"""Graph traversal kernels over CSR adjacency.

The two hot operations of the whole package live here: breadth-first level
assignment capped at a small depth (degree classes) and common-neighbor
counting from one source against many targets. Both exist in two
interchangeable implementations:

  * numba ``@njit`` kernels (default whenever numba imports), and
  * pure-numpy fallbacks using vectorized CSR gathers.

Set ``FRIENDSIM_BACKEND=numpy`` or ``FRIENDSIM_BACKEND=numba`` to force one.
Both backends are exact integer computations and return identical arrays;
``benchmarks/bench_kernels.py`` compares their throughput.

CSR convention: ``indptr`` has length n+1, ``indices[indptr[v]:indptr[v+1]]``
lists the neighbors of vertex ``v``. Vertices are dense ints ``0..n-1``.
"""

from __future__ import annotations

import os

import numpy as np

ENV_BACKEND = "FRIENDSIM_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def active_backend() -> str:
    """Resolve the backend name, honoring the environment override."""
    choice = os.environ.get(ENV_BACKEND, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("FRIENDSIM_BACKEND=numba but numba is not importable")
        return "numba"
    if choice:
        raise RuntimeError(f"unrecognized FRIENDSIM_BACKEND value: {choice!r}")
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _bfs_levels_nb(indptr, indices, source, cap):  # pragma: no cover - jitted
    n = indptr.shape[0] - 1
    unreached = cap + 1
    level = np.full(n, unreached, dtype=np.int32)
    level[source] = 0
    frontier = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    frontier[0] = source
    fsize = 1
    for depth in range(1, cap + 1):
        nsize = 0
        for i in range(fsize):
            v = frontier[i]
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if level[w] == unreached:
                    level[w] = depth
                    nxt[nsize] = w
                    nsize += 1
        if nsize == 0:
            break
        frontier, nxt = nxt, frontier
        fsize = nsize
    return level


@njit(cache=True)
def _common_counts_nb(indptr, indices, source, targets):  # pragma: no cover
    n = indptr.shape[0] - 1
    mark = np.zeros(n, dtype=np.bool_)
    for j in range(indptr[source], indptr[source + 1]):
        mark[indices[j]] = True
    out = np.zeros(targets.shape[0], dtype=np.int64)
    for t in range(targets.shape[0]):
        v = targets[t]
        c = 0
        for j in range(indptr[v], indptr[v + 1]):
            if mark[indices[j]]:
                c += 1
        out[t] = c
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks


def _gather_neighbors(indptr, indices, vertices):
    """Concatenated neighbor lists of `vertices` plus per-vertex segment ids."""
    starts = indptr[vertices]
    counts = indptr[vertices + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype), np.empty(0, dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pos = np.arange(total, dtype=np.int64) - np.repeat(offsets, counts) + np.repeat(starts, counts)
    seg = np.repeat(np.arange(vertices.shape[0], dtype=np.int64), counts)
    return indices[pos], seg


def _bfs_levels_np(indptr, indices, source, cap):
    n = indptr.shape[0] - 1
    unreached = cap + 1
    level = np.full(n, unreached, dtype=np.int32)
    level[source] = 0
    frontier = np.array([source], dtype=np.int64)
    for depth in range(1, cap + 1):
        neigh, _ = _gather_neighbors(indptr, indices, frontier)
        if neigh.size == 0:
            break
        fresh = np.unique(neigh[level[neigh] == unreached])
        if fresh.size == 0:
            break
        level[fresh] = depth
        frontier = fresh.astype(np.int64)
    return level


def _common_counts_np(indptr, indices, source, targets):
    n = indptr.shape[0] - 1
    mark = np.zeros(n, dtype=bool)
    mark[indices[indptr[source] : indptr[source + 1]]] = True
    neigh, seg = _gather_neighbors(indptr, indices, targets)
    if neigh.size == 0:
        return np.zeros(targets.shape[0], dtype=np.int64)
    hits = np.bincount(seg[mark[neigh]], minlength=targets.shape[0])
    return hits.astype(np.int64)


# ---------------------------------------------------------------------------
# dispatch


def bfs_levels(indptr, indices, source: int, cap: int = 3) -> np.ndarray:
    """BFS distance of every vertex from `source`, capped at `cap`.

    Returns int32 array: 0 for the source, 1..cap for reachable vertices
    within the cap, cap+1 for everything farther (or unreachable).
    """
    if active_backend() == "numba":
        return _bfs_levels_nb(indptr, indices, np.int64(source), np.int64(cap))
    return _bfs_levels_np(indptr, indices, int(source), int(cap))


def common_neighbor_counts(indptr, indices, source: int, targets: np.ndarray) -> np.ndarray:
    """Number of common neighbors between `source` and each of `targets`."""
    targets = np.asarray(targets, dtype=np.int64)
    if active_backend() == "numba":
        return _common_counts_nb(indptr, indices, np.int64(source), targets)
    return _common_counts_np(indptr, indices, int(source), targets)


def warmup() -> None:
    """Trigger jit compilation on a tiny graph so later calls run at speed."""
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int64)
    bfs_levels(indptr, indices, 0, 3)
    common_neighbor_counts(indptr, indices, 0, np.array([1], dtype=np.int64))
