"""
Synchronous push, pull and push-pull rumor spreading on a fixed graph.

Every round reads the informed set as it stood at the start of the round, so
vertices informed during round ``i`` act from round ``i+1`` on. Contacts are
drawn per stub: a double edge is picked twice as often as a single edge, and a
vertex that picks a loop contacts itself (a wasted round for that vertex).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RunResult",
    "run_push",
    "run_pull",
    "run_push_pull",
    "run_protocol",
    "time_to_fraction",
    "PROTOCOLS",
]

DEFAULT_EPS = (0.01, 0.05)


def time_to_fraction(result: "RunResult | list[int]", eps: float, n: int | None = None) -> int | None:
    """First round with at least ``ceil((1-eps) n)`` informed vertices, or ``None``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    if isinstance(result, RunResult):
        traj, n = result.trajectory, result.n
    else:
        traj = result
    # guard against 0.95 * 20 = 19.000000000000004
    need = math.ceil(round((1.0 - eps) * n, 9))
    for i, k in enumerate(traj):
        if k >= need:
            return i
    return None


@dataclass
class RunResult:
    protocol: str
    n: int
    init: int
    trajectory: list[int]
    seed: int | None = None
    eps: tuple[float, ...] = DEFAULT_EPS
    t_eps: dict[float, int | None] = field(init=False)

    def __post_init__(self):
        self.t_eps = {e: time_to_fraction(self.trajectory, e, self.n) for e in self.eps}

    @property
    def T(self) -> int | None:
        """Rounds until every vertex is informed; ``None`` if that never happened."""
        return time_to_fraction(self.trajectory, 0.0, self.n)

    @property
    def rounds(self) -> int:
        return len(self.trajectory) - 1

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "n": self.n,
            "init": self.init,
            "seed": self.seed,
            "T": self.T,
            "t_eps": {f"{e:g}": t for e, t in self.t_eps.items()},
            "rounds": list(self.trajectory),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def trajectory_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "informed_count"])
        w.writerows(enumerate(self.trajectory))
        return buf.getvalue()


def _is_closed(g, informed: np.ndarray) -> bool:
    """No edge leaves the informed set (so no protocol can make progress)."""
    target = getattr(g, "stub_target", None)
    if target is None:
        return bool(informed.all())
    stub_informed = np.repeat(informed, g.degrees)
    return bool(np.all(informed[target[stub_informed]]))


def _run(g, init, max_rounds, rng, push, pull, stop_at, name, eps, seed):
    n = g.n
    if init is None:
        init = int(rng.integers(n))
    if not 0 <= init < n:
        raise ValueError(f"initial vertex {init} out of range")
    target = n if stop_at is None else min(stop_at, n)

    informed = np.zeros(n, dtype=bool)
    informed[init] = True
    count = 1
    traj = [1]
    for _ in range(max_rounds):
        if count >= target:
            break
        fresh = []
        if push:
            src = np.flatnonzero(informed)
            hit = g.sample_neighbors(src, rng)
            fresh.append(hit[~informed[hit]])
        if pull:
            ask = np.flatnonzero(~informed)
            ans = g.sample_neighbors(ask, rng)
            fresh.append(ask[informed[ans]])
        new = np.unique(np.concatenate(fresh)) if len(fresh) > 1 else np.unique(fresh[0])
        informed[new] = True
        count += int(new.size)
        traj.append(count)
        if new.size == 0 and _is_closed(g, informed):
            break
    return RunResult(name, n, int(init), traj, seed=seed, eps=tuple(eps))


def run_push(g, init: int | None = None, max_rounds: int = 10_000, rng=None, *,
             stop_at: int | None = None, eps=DEFAULT_EPS, seed: int | None = None) -> RunResult:
    """Push: every informed vertex informs the far end of one uniformly chosen stub.

    ``init=None`` draws the initial vertex uniformly. The run stops once all
    vertices (or ``stop_at`` of them) are informed, after ``max_rounds``
    rounds, or as soon as no edge leaves the informed set.
    """
    rng = np.random.default_rng(seed if rng is None else rng)
    return _run(g, init, max_rounds, rng, True, False, stop_at, "push", eps, seed)


def run_pull(g, init: int | None = None, max_rounds: int = 10_000, rng=None, *,
             stop_at: int | None = None, eps=DEFAULT_EPS, seed: int | None = None) -> RunResult:
    """Pull: every uninformed vertex asks the far end of one uniformly chosen stub."""
    rng = np.random.default_rng(seed if rng is None else rng)
    return _run(g, init, max_rounds, rng, False, True, stop_at, "pull", eps, seed)


def run_push_pull(g, init: int | None = None, max_rounds: int = 10_000, rng=None, *,
                  stop_at: int | None = None, eps=DEFAULT_EPS, seed: int | None = None) -> RunResult:
    """Push and pull in the same round, both against the start-of-round informed set."""
    rng = np.random.default_rng(seed if rng is None else rng)
    return _run(g, init, max_rounds, rng, True, True, stop_at, "push_pull", eps, seed)


PROTOCOLS = {"push": run_push, "pull": run_pull, "push_pull": run_push_pull}


def run_protocol(name: str, g, init=None, max_rounds: int = 10_000, rng=None, **kw) -> RunResult:
    try:
        fn = PROTOCOLS[name]
    except KeyError:
        raise ValueError(f"unknown protocol {name!r}") from None
    return fn(g, init, max_rounds, rng, **kw)
