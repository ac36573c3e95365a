"""Short low-degree paths from uninformed vertices into an informed set."""

from __future__ import annotations

from collections import deque

import numpy as np

__all__ = ["find_short_path", "short_path_failures"]


def _mask(informed, n: int) -> np.ndarray:
    arr = np.asarray(informed)
    if arr.dtype == bool and arr.size == n:
        return arr
    mask = np.zeros(n, dtype=bool)
    if arr.size:
        mask[np.asarray(list(informed), dtype=np.int64)] = True
    return mask


def find_short_path(g, informed, v: int, max_len: int, max_deg: int) -> list[int] | None:
    """Breadth-first search for ``v, v_1, ..., v_k`` with ``v_k`` informed.

    Every ``v_i`` (``i >= 1``) must have degree at most ``max_deg`` and
    ``k <= max_len``. Returns the path or ``None``.
    """
    mask = _mask(informed, g.n)
    if mask[v]:
        raise ValueError("start vertex is already informed")
    parent = {v: -1}
    depth = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if depth[u] >= max_len:
            continue
        for w in g.neighbors(u).tolist():
            if w in parent or g.degrees[w] > max_deg:
                continue
            parent[w] = u
            depth[w] = depth[u] + 1
            if mask[w]:
                path = [w]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    return None


def _stubs_of(g, vertices: np.ndarray) -> np.ndarray:
    deg = g.degrees[vertices]
    starts = np.repeat(g.offsets[vertices], deg)
    within = np.arange(int(deg.sum())) - np.repeat(np.cumsum(deg) - deg, deg)
    return starts + within


def short_path_failures(g, informed, max_len: int, max_deg: int) -> np.ndarray:
    """Uninformed vertices for which :func:`find_short_path` would return ``None``.

    Runs one multi-source search from the low-degree informed vertices through
    low-degree vertices, instead of one search per vertex.
    """
    n = g.n
    mask = _mask(informed, n)
    low = g.degrees <= max_deg
    dist = np.full(n, -1, dtype=np.int64)
    frontier = np.flatnonzero(mask & low)
    dist[frontier] = 0
    for k in range(1, max_len):
        if frontier.size == 0:
            break
        nb = g.stub_target[_stubs_of(g, frontier)]
        nb = np.unique(nb[low[nb] & (dist[nb] < 0)])
        dist[nb] = k
        frontier = nb
    # v succeeds iff some low-degree neighbour reaches the informed set within max_len - 1 hops
    reach = (dist >= 0) & (dist <= max_len - 1)
    stub_ok = reach[g.stub_target]
    ok = np.zeros(n, dtype=bool)
    np.logical_or.at(ok, g.owner, stub_ok)
    return np.flatnonzero(~mask & ~ok)
