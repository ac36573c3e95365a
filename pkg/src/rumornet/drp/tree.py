"""
The (delta-1)-ary tree process used as a lower bound for phase 2.

Every tree vertex carries ``delta`` stubs, each free or used. A vertex's state
is fully described by its number of free stubs, so the process is stored as
class counts ``classes[f]`` (vertices with ``f`` free stubs). One round picks
one stub per vertex uniformly; a vertex with ``f`` free stubs hits a free one
with probability ``f/delta``, which spawns a newborn with ``delta-1`` free
stubs. Per class this is a binomial draw, so the count form is exact in
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["TreeState", "tree_step", "GrowthReport", "verify_tree_growth"]


@dataclass(frozen=True)
class TreeState:
    delta: int
    round: int
    classes: tuple[int, ...]
    newborns: int = 0
    selected_free: int = 0

    @classmethod
    def seeded(cls, delta: int, vertices: int, round: int = 0) -> "TreeState":
        """``vertices`` fresh vertices, each with one used and ``delta-1`` free stubs."""
        if delta < 2:
            raise ValueError("delta must be >= 2")
        classes = [0] * delta
        classes[delta - 1] = int(vertices)
        return cls(delta, round, tuple(classes), newborns=int(vertices), selected_free=0)

    @classmethod
    def from_free_stubs(cls, delta: int, free: int, round: int = 0) -> "TreeState":
        """Start from about ``free`` free stubs (rounded up to whole vertices)."""
        return cls.seeded(delta, -(-int(free) // (delta - 1)), round)

    @property
    def free(self) -> int:
        """``P_i``: number of free stubs."""
        return int(sum(f * c for f, c in enumerate(self.classes)))

    @property
    def vertices(self) -> int:
        return int(sum(self.classes))


def tree_step(t: TreeState, rng: np.random.Generator) -> TreeState:
    d = t.delta
    old = np.asarray(t.classes, dtype=np.int64)
    hits = np.zeros(d, dtype=np.int64)
    for f in range(1, d):
        if old[f]:
            hits[f] = rng.binomial(old[f], f / d)
    new = old - hits
    new[:-1] += hits[1:]
    born = int(hits.sum())
    new[d - 1] += born
    return TreeState(d, t.round + 1, tuple(int(x) for x in new), newborns=born, selected_free=born)


@dataclass
class GrowthReport:
    delta: int
    growth_target: float
    newborn_target: float
    growth_ratios: list[float]
    newborn_ratios: list[float]
    max_growth_dev: float
    max_newborn_dev: float
    samples: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_growth_dev <= self.tol and self.max_newborn_dev <= self.tol


def verify_tree_growth(history: Sequence[TreeState] | Sequence[Sequence[TreeState]],
                       tol: float = 0.02) -> GrowthReport:
    """Compare per-round growth of free stubs and newborns with ``2(1-1/delta)`` and ``1/delta``.

    ``history`` is one run (a list of snapshots) or several runs of equal
    length; in the latter case the per-round ratios are averaged across runs
    before comparison. Deviations are relative.
    """
    runs = [history] if isinstance(history[0], TreeState) else list(history)
    d = runs[0][0].delta
    g_target = 2.0 * (1.0 - 1.0 / d)
    n_target = 1.0 / d
    length = min(len(r) for r in runs)
    growth, newborn = [], []
    for i in range(1, length):
        g = [r[i].free / r[i - 1].free for r in runs if r[i - 1].free]
        b = [r[i].newborns / r[i - 1].free for r in runs if r[i - 1].free]
        if g:
            growth.append(float(np.mean(g)))
            newborn.append(float(np.mean(b)))
    gd = max((abs(x / g_target - 1.0) for x in growth), default=0.0)
    nd = max((abs(x / n_target - 1.0) for x in newborn), default=0.0)
    return GrowthReport(d, g_target, n_target, growth, newborn, gd, nd, len(growth), tol)
