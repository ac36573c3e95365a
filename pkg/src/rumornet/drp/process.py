"""
The delayed random-graph push (DRP) process.

Push and stub matching run together: a stub is matched (to a uniform unmatched
stub) only when the push process selects it, and pushes may be delayed. A run
has three phases:

1. A tree is grown from the initial vertex, level by level, with every level
   delaying its pushes for ``t_j`` rounds and matching at most two selected
   stubs per vertex (three at the root).
2. The informed low-degree vertices are coupled to the tree process so that
   each round informs exactly as many of them as the tree creates newborns.
   Matches that land on a bad stub are compensated by a reserved *twin*.
3. All delays are released and plain push runs until a ``1-eps`` fraction
   is informed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..confmodel import StubSpace
from ..degseq import DegreeSequence, ProtocolConstants, delta as eff_delta, protocol_constants
from ..errors import CouplingBroken, Exhausted, PhaseFailed, RoundCapExceeded
from .tree import TreeState, tree_step

__all__ = [
    "PhaseSchedule",
    "DrpAudit",
    "DrpState",
    "Phase1Result",
    "DrpOverrides",
    "DrpReport",
    "phase1_build_tree",
    "coupled_drp_round",
    "phase3_round",
    "run_drp",
]


def _loglog2(n: int) -> float:
    return math.log2(max(math.log2(n), 2.0))


@dataclass(frozen=True)
class PhaseSchedule:
    """Phase boundaries and delays. All logarithms in phase 1 are base 2."""

    n: int
    seed_target: int
    level_delays: tuple[int, ...]
    height: int
    alpha: float
    eps: float
    phase2_cap: int

    @staticmethod
    def uncapped_seed_target(n: int) -> int:
        return math.ceil(math.log2(n) ** 5)

    @staticmethod
    def tree_height(n: int) -> int:
        return math.ceil(5.0 * _loglog2(n) / math.log2(4.0 / 3.0)) + 2

    @classmethod
    def for_n(cls, n: int, alpha: float, eps: float, *, c: float,
              bounded: bool = False, seed_target: int | None = None) -> "PhaseSchedule":
        """Build the schedule for ``n`` vertices.

        ``bounded`` selects the bounded-degree delays ``36 log n / (j^2 log 1.5)``
        instead of the constant ``3 log log n / (2 log 1.5)``. The default seed
        target is ``ceil(log^5 n)`` capped at ``ceil(sqrt n)``; the uncapped value
        exceeds ``n`` below ``n ~ 2^23``.
        """
        h = cls.tree_height(n)
        if bounded:
            delays = tuple(math.ceil(36.0 * math.log2(n) / (j * j * math.log2(1.5)))
                           for j in range(1, h + 1))
        else:
            tj = math.ceil(3.0 * _loglog2(n) / (2.0 * math.log2(1.5)))
            delays = (tj,) * h
        if seed_target is None:
            seed_target = min(cls.uncapped_seed_target(n), math.ceil(math.sqrt(n)))
        cap = math.ceil(c * math.log(n))
        return cls(n, int(seed_target), delays, h, float(alpha), float(eps), cap)


@dataclass
class DrpAudit:
    back_matches: int = 0
    high_degree_targets: int = 0
    twins_used: int = 0
    twins_triggered: int = 0
    twins_lost: int = 0
    good_matches: int = 0
    coupling_breaks: int = 0
    pool_entered: int = 0
    pool_popped: int = 0
    pool_removed_as_target: int = 0
    pool_delayed: int = 0
    # per phase-2 round: (round, nbar, tree_newborns, aborted)
    rounds: list[tuple[int, int, int, bool]] = field(default_factory=list)
    m_delta: list[float] = field(default_factory=list)
    phase1_deaths: Counter = field(default_factory=Counter)
    phase1_branches: int = 0
    phase1_admitted: int = 0

    @property
    def matches(self) -> int:
        return self.good_matches + self.back_matches + self.high_degree_targets

    @property
    def good_match_rate(self) -> float:
        return self.good_matches / self.matches if self.matches else 1.0

    def twin_balance(self) -> bool:
        """Every bad match consumed exactly one twin."""
        return self.twins_used == self.back_matches + self.high_degree_targets

    def pool_balance(self) -> bool:
        """Stubs entering the selected pool are popped, hit as targets, or left delayed."""
        return self.pool_entered == self.pool_popped + self.pool_removed_as_target + self.pool_delayed

    def coupling_held(self) -> bool:
        return all(nb == nt for _, nb, nt, aborted in self.rounds if not aborted)

    def phase1_balance(self) -> bool:
        dead = sum(self.phase1_deaths.values())
        return dead == self.phase1_branches - self.phase1_admitted

    def to_json(self) -> dict[str, Any]:
        return {
            "back_matches": self.back_matches,
            "high_degree_targets": self.high_degree_targets,
            "twins_used": self.twins_used,
            "twins_triggered": self.twins_triggered,
            "twins_lost": self.twins_lost,
            "coupling_breaks": self.coupling_breaks,
            "good_match_rate": self.good_match_rate,
            "phase1_deaths": dict(self.phase1_deaths),
        }


class DrpState:
    """Mutable state of one DRP run over a shared :class:`StubSpace`."""

    def __init__(self, degrees, delta: int, M: int):
        self.space = StubSpace(degrees)
        self.degrees = self.space.degrees
        self.n = self.space.n
        self.delta = int(delta)
        self.M = int(M)
        self.informed = np.zeros(self.n, dtype=bool)
        self.informed_count = 0
        # vertices that select stubs in phase 2 (the union of all nbar sets)
        self.active: list[int] = []
        # stub has been selected at least once, or is the stub a vertex was informed through
        self.selected = np.zeros(self.space.total_stubs, dtype=bool)
        self.twin: dict[int, int] = {}
        self.sleeping: set[int] = set()
        self.pending: list[int] = []
        self.phase = 1
        self.round = 0
        self.audit = DrpAudit()
        self.rows: list[tuple[int, int, int, int, int, int]] = []

    def inform(self, v: int, via: int | None = None) -> None:
        if not self.informed[v]:
            self.informed[v] = True
            self.informed_count += 1
        if via is not None:
            self.selected[via] = True

    def record(self, nbar: int = 0, newborns: int = 0, free: int = 0) -> None:
        self.rows.append((self.round, self.phase, self.informed_count, nbar, newborns, free))

    def is_good(self, stub: int) -> bool:
        v = int(self.space.owner[stub])
        return not self.informed[v] and self.degrees[v] <= self.M


@dataclass
class Phase1Result:
    t1: int
    levels: list[int]
    seeds: list[int]


def phase1_build_tree(state: DrpState, schedule: PhaseSchedule, rng: np.random.Generator,
                      root: int) -> Phase1Result:
    """Grow the phase-1 tree from ``root`` until a level holds enough low-degree vertices.

    Level ``T_j`` has at most ``ceil((4/3)^(j-1))`` vertices. Each vertex of a
    level selects stubs for ``t_j`` rounds; the first two distinct unmatched
    stubs selected (three at the root) are matched. A branch dies on a back
    match (into the tree, or onto a vertex already claimed on this level), on
    under-selection, or when the level cap is full.
    """
    if state.informed_count:
        raise ValueError("phase 1 needs an uninformed state")
    sp, rng_random = state.space, rng.random
    owner, offsets, partner = sp.owner, sp.offsets, sp.partner
    audit = state.audit
    state.phase = 1
    state.inform(root)
    state.record()
    level = [root]
    sizes = [1]
    for j in range(1, schedule.height):
        tj = schedule.level_delays[j - 1]
        quota = 3 if j == 1 else 2
        claimed: set[int] = set()
        candidates: list[tuple[int, int]] = []
        for v in level:
            d = int(state.degrees[v])
            base = int(offsets[v])
            picks = (rng_random(tj) * d).astype(np.int64).tolist()
            chosen: list[int] = []
            for slot in picks:
                s = base + slot
                if partner[s] < 0 and s not in chosen:
                    chosen.append(s)
                    if len(chosen) == quota:
                        break
            audit.phase1_branches += quota
            audit.phase1_deaths["under_selection"] += quota - len(chosen)
            for s in chosen:
                state.selected[s] = True
                if partner[s] >= 0:
                    # consumed as the target of a match made earlier on this level
                    audit.phase1_deaths["back_match"] += 1
                    continue
                try:
                    e2 = sp.match_uniform(s, rng)
                except Exhausted:
                    audit.phase1_deaths["back_match"] += 1
                    continue
                u = int(owner[e2])
                if state.informed[u] or u in claimed:
                    audit.phase1_deaths["back_match"] += 1
                else:
                    claimed.add(u)
                    candidates.append((u, e2))
        cap = math.ceil((4.0 / 3.0) ** j)
        admitted = candidates[:cap]
        audit.phase1_deaths["level_cap"] += len(candidates) - len(admitted)
        audit.phase1_admitted += len(admitted)
        for _ in range(tj - 1):
            state.round += 1
            state.record()
        for u, e2 in admitted:
            state.inform(u, via=e2)
        state.round += 1
        level = [u for u, _ in admitted]
        sizes.append(len(level))
        good = [u for u in level if state.degrees[u] <= state.M]
        state.record(nbar=len(good))
        if len(good) >= schedule.seed_target:
            return Phase1Result(state.round, sizes, good[:schedule.seed_target])
        if not level:
            break
    raise PhaseFailed(f"tree reached level sizes {sizes} without {schedule.seed_target} low-degree vertices")


def coupled_drp_round(state: DrpState, tree: TreeState, rng: np.random.Generator,
                      admit_triggered_now: bool = True) -> TreeState:
    """One phase-2 round: step the tree, then inform exactly as many good vertices.

    Returns the new tree state. The DRP state is updated in place. Raises
    :class:`CouplingBroken` (after recording it) if the selected-stub pool runs
    dry before the tree's newborn count is matched.
    """
    tree = tree_step(tree, rng)
    target = tree.newborns
    state.round += 1
    state.phase = 2
    sp = state.space
    owner, partner, selected = sp.owner, sp.partner, state.selected
    audit = state.audit

    # every active vertex selects one stub
    # twins triggered last round may have been consumed as match targets since
    pool: list[int] = []
    for t in state.pending:
        if partner[t] >= 0:
            audit.twins_lost += 1
        else:
            pool.append(t)
    state.pending = []
    if state.active:
        act = np.asarray(state.active, dtype=np.int64)
        picks = sp.offsets[act] + (rng.random(act.size) * state.degrees[act]).astype(np.int64)
        first = picks[~selected[picks]]
        first = np.unique(first)
        selected[first] = True
        free = first[partner[first] < 0]
        pool.extend(free.tolist())
        for s in first[partner[first] >= 0].tolist():
            t = state.twin.get(s)
            if t is None:
                continue
            audit.twins_triggered += 1
            if partner[t] >= 0:
                audit.twins_lost += 1
            elif admit_triggered_now:
                pool.append(t)
            else:
                state.pending.append(t)
    pool.sort()
    audit.pool_entered += len(pool)
    live = set(pool)
    cursor = 0

    def pop() -> int | None:
        nonlocal cursor
        while cursor < len(pool):
            s = pool[cursor]
            cursor += 1
            if s in live:
                live.discard(s)
                audit.pool_popped += 1
                return s
        return None

    newly: list[int] = []
    broken = False
    while len(newly) < target:
        e = pop()
        if e is None:
            broken = True
            break
        e2 = sp.match_uniform(e, rng)
        if e2 in live:
            live.discard(e2)
            audit.pool_removed_as_target += 1
        v = int(owner[e2])
        if not state.informed[v] and state.degrees[v] <= state.M:
            state.inform(v, via=e2)
            newly.append(v)
            audit.good_matches += 1
            continue
        if state.informed[v]:
            audit.back_matches += 1
        else:
            # uninformed but above M: the push along this edge stays delayed
            audit.high_degree_targets += 1
        et = pop()
        if et is None:
            broken = True
            break
        state.sleeping.add(et)
        state.twin[e2] = et
        audit.twins_used += 1
    audit.pool_delayed += len(live)

    state.active.extend(newly)
    audit.rounds.append((state.round, len(newly), target, broken))
    if newly:
        audit.m_delta.append(sum(1 for v in newly if state.degrees[v] == state.delta) / len(newly))
    state.record(nbar=len(newly), newborns=target, free=tree.free)
    if broken:
        audit.coupling_breaks += 1
        raise CouplingBroken(f"pool exhausted in round {state.round} at {len(newly)}/{target}")
    return tree


def phase3_round(state: DrpState, rng: np.random.Generator) -> int:
    """One round of undelayed push by every informed vertex; stubs are matched on demand."""
    sp = state.space
    partner, owner = sp.partner, sp.owner
    src = np.flatnonzero(state.informed)
    picks = sp.offsets[src] + (rng.random(src.size) * state.degrees[src]).astype(np.int64)
    for s in picks[partner[picks] < 0].tolist():
        # an earlier match this round may already have consumed s
        if partner[s] < 0:
            sp.match_uniform(s, rng)
    hit = owner[partner[picks]]
    new = np.unique(hit[~state.informed[hit]])
    state.informed[new] = True
    state.informed_count += int(new.size)
    state.selected[picks] = True
    state.round += 1
    state.phase = 3
    state.record()
    return int(new.size)


@dataclass
class DrpOverrides:
    alpha: float | None = None
    gamma: float | None = None
    seed_target: int | None = None
    bounded_schedule: bool = False
    admit_triggered_now: bool = True
    max_retries: int = 5
    round_cap: int = 20_000
    phase2_c: float | None = None
    init: int | None = None


@dataclass
class DrpReport:
    n: int
    seed: int | None
    constants: ProtocolConstants
    alpha_used: float
    schedule: PhaseSchedule
    t1: int
    t2: int
    t3: int
    retries: int
    phase1: Phase1Result
    audit: DrpAudit
    rows: list[tuple[int, int, int, int, int, int]]
    coupling_broken: bool
    seq_spec: dict | None = None

    @property
    def T_eps(self) -> int:
        return self.t3

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "seq_spec": self.seq_spec,
            "seed": self.seed,
            "alpha_used": self.alpha_used,
            "gamma_used": self.constants.gamma,
            "M": self.constants.M,
            "t1": self.t1,
            "t2": self.t2,
            "t3": self.t3,
            "retries": self.retries,
            "seed_target": self.schedule.seed_target,
            "audit": self.audit.to_json(),
        }

    def rows_csv(self) -> str:
        out = ["round,phase,informed,nbar,tree_newborns,free_tree_stubs"]
        out += [",".join(map(str, r)) for r in self.rows]
        return "\n".join(out) + "\n"


def _attempt(seq, consts, alpha, schedule, ov, rng):
    state = DrpState(seq.degrees, consts.delta, consts.M)
    n = state.n
    root = ov.init if ov.init is not None else int(rng.integers(n))
    p1 = phase1_build_tree(state, schedule, rng, root)
    t1 = p1.t1
    state.active = list(p1.seeds)

    tree = TreeState.seeded(consts.delta, len(p1.seeds), round=t1)
    need = alpha * n
    broken = False
    while state.informed_count < need:
        if state.round - t1 >= schedule.phase2_cap:
            raise RoundCapExceeded(f"phase 2 exceeded {schedule.phase2_cap} rounds")
        try:
            tree = coupled_drp_round(state, tree, rng, ov.admit_triggered_now)
        except CouplingBroken:
            broken = True
            break
    t2 = state.round

    goal = (1.0 - schedule.eps) * n
    while not state.informed_count > goal:
        if state.round >= ov.round_cap:
            raise RoundCapExceeded(f"phase 3 exceeded the cap of {ov.round_cap} rounds")
        phase3_round(state, rng)
    return state, p1, t1, t2, state.round, broken


def run_drp(seq: DegreeSequence, eps: float = 0.05, overrides: DrpOverrides | None = None,
            rng=None, seed: int | None = None) -> DrpReport:
    """Run all three phases of the DRP process on a fresh configuration.

    Phase-1 failures are retried with an independent child generator up to
    ``overrides.max_retries`` times; the number of retries is reported.
    """
    ov = overrides or DrpOverrides()
    if rng is None:
        rng = np.random.default_rng(seed)
    consts = protocol_constants(seq, ov.gamma)
    alpha = consts.alpha if ov.alpha is None else float(ov.alpha)
    c = ov.phase2_c if ov.phase2_c is not None else 4.0 * consts.c_D
    schedule = PhaseSchedule.for_n(seq.n, alpha, eps, c=c, bounded=ov.bounded_schedule,
                                   seed_target=ov.seed_target)
    children = rng.spawn(ov.max_retries + 1)
    last = None
    for attempt, child in enumerate(children):
        try:
            state, p1, t1, t2, t3, broken = _attempt(seq, consts, alpha, schedule, ov, child)
        except PhaseFailed as exc:
            last = exc
            continue
        spec = seq.family.to_json() if seq.family is not None else None
        return DrpReport(seq.n, seed, consts, alpha, schedule, t1, t2, t3, attempt, p1,
                         state.audit, state.rows, broken, spec)
    raise PhaseFailed(f"phase 1 failed {ov.max_retries + 1} times") from last
