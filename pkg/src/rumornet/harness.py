"""
Ensemble experiments: seeded trials, sweeps over ``n``, slope fits, Monte Carlo helpers.

Trial ``(n_idx, t_idx)`` of a sweep draws all of its randomness from
:func:`derive_seed`, so any single row of the output can be replayed and the
sweep result does not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import stats

from .broadcast import PROTOCOLS, run_pull, time_to_fraction
from .confmodel import CompleteGraph, janson_simple_prob, sample_simple, simple_fraction, uniform_pairing
from .degseq import DegreeSequence, SequenceFamily, c_D, c_d_regular, delta
from .drp import DrpOverrides, run_drp
from .errors import DegenerateFit, PhaseFailed, RoundCapExceeded

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "SlopeFit",
    "SweepResult",
    "derive_seed",
    "run_trial",
    "run_ensemble",
    "fit_slope",
    "simplicity_montecarlo",
    "ProbeReport",
    "find_bad_start",
    "pull_bad_start_probe",
]

PROTOCOL_NAMES = ("push", "pull", "push_pull", "drp")


def derive_seed(master_seed: int, n_index: int, trial_index: int) -> int:
    """Stable 64-bit seed for one trial (numpy ``SeedSequence`` hashing)."""
    ss = np.random.SeedSequence([int(master_seed), int(n_index), int(trial_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class ExperimentConfig:
    family: SequenceFamily | None
    protocol: str = "push"
    eps: tuple[float, ...] = (0.01,)
    n_list: tuple[int, ...] = (1024,)
    trials: int = 10
    master_seed: int = 0
    round_cap: int = 10_000
    out: str | None = None
    graph_model: str = "configuration"
    simple: bool = False
    init: int | None = None
    alpha: float | None = None
    gamma: float | None = None
    seed_target: int | None = None

    def __post_init__(self):
        self.eps = tuple(float(e) for e in self.eps)
        self.n_list = tuple(int(n) for n in self.n_list)
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if not self.eps or any(not 0.0 <= e <= 1.0 for e in self.eps):
            raise ValueError("eps values must lie in [0, 1]")
        if self.protocol not in PROTOCOL_NAMES:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.graph_model not in ("configuration", "complete"):
            raise ValueError(f"unknown graph model {self.graph_model!r}")
        if self.graph_model == "configuration" and self.family is None:
            raise ValueError("configuration model needs a sequence family")
        if self.protocol == "drp" and self.graph_model != "configuration":
            raise ValueError("drp runs on the configuration model only")
        if self.round_cap < 1:
            raise ValueError("round_cap must be >= 1")

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d["family"] = None if self.family is None else self.family.to_json()
        d["eps"] = list(self.eps)
        d["n_list"] = list(self.n_list)
        return d

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ExperimentConfig":
        obj = dict(obj)
        fam = obj.pop("family", None) or obj.pop("sequence", None)
        overrides = obj.pop("overrides", None) or {}
        obj.update(overrides)
        family = None if fam is None else SequenceFamily.from_json(fam)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(family=family, **obj)


@dataclass
class TrialRecord:
    n: int
    trial: int
    seed: int
    protocol: str
    t_eps: dict[float, int | None]
    T_full: int | None
    cap_hit: bool
    rounds: int
    error: str | None = None

    def flagged(self, eps: float) -> bool:
        return self.error is not None or self.t_eps.get(eps) is None


def _sequence(cfg: ExperimentConfig, n: int) -> DegreeSequence:
    return cfg.family.with_n(n).build()


def run_trial(cfg: ExperimentConfig, n_index: int, trial_index: int) -> TrialRecord:
    """Run one seeded trial of the sweep."""
    n = cfg.n_list[n_index]
    seed = derive_seed(cfg.master_seed, n_index, trial_index)
    rng = np.random.default_rng(seed)
    if cfg.protocol == "drp":
        seq = _sequence(cfg, n)
        ov = DrpOverrides(alpha=cfg.alpha, gamma=cfg.gamma, seed_target=cfg.seed_target,
                          round_cap=cfg.round_cap, init=cfg.init)
        try:
            rep = run_drp(seq, eps=min(cfg.eps), overrides=ov, rng=rng, seed=seed)
        except (PhaseFailed, RoundCapExceeded) as exc:
            return TrialRecord(n, trial_index, seed, "drp", {e: None for e in cfg.eps}, None,
                               isinstance(exc, RoundCapExceeded), 0, type(exc).__name__)
        traj = [row[2] for row in rep.rows]
        t_eps = {e: time_to_fraction(traj, e, n) for e in cfg.eps}
        return TrialRecord(n, trial_index, seed, "drp", t_eps, time_to_fraction(traj, 0.0, n),
                           False, len(traj) - 1)

    if cfg.graph_model == "complete":
        g = CompleteGraph(n)
    else:
        seq = _sequence(cfg, n)
        g = sample_simple(seq, rng, 1000) if cfg.simple else uniform_pairing(seq, rng)
    res = PROTOCOLS[cfg.protocol](g, cfg.init, cfg.round_cap, rng, eps=cfg.eps, seed=seed)
    cap_hit = res.T is None and res.rounds >= cfg.round_cap
    return TrialRecord(n, trial_index, seed, cfg.protocol, dict(res.t_eps), res.T, cap_hit, res.rounds)


def _trial_job(args):
    cfg, i, t = args
    return run_trial(cfg, i, t)


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    ci: tuple[float, float]
    stderr: float
    points: int

    def to_json(self) -> dict[str, Any]:
        return {"slope": self.slope, "intercept": self.intercept, "ci": list(self.ci),
                "stderr": self.stderr, "points": self.points}


def fit_slope(points: Sequence[tuple[float, float]], confidence: float = 0.95) -> SlopeFit:
    """Least-squares fit of ``T`` against ``ln n`` for ``(n, T)`` pairs."""
    pts = [(float(n), float(t)) for n, t in points]
    if len({n for n, _ in pts}) < 3:
        raise DegenerateFit("need at least three distinct n values")
    x = np.log([n for n, _ in pts])
    y = np.array([t for _, t in pts])
    res = stats.linregress(x, y)
    dof = len(pts) - 2
    half = float(stats.t.ppf(0.5 + confidence / 2.0, dof) * res.stderr) if dof > 0 else math.inf
    return SlopeFit(float(res.slope), float(res.intercept),
                    (float(res.slope) - half, float(res.slope) + half), float(res.stderr), len(pts))


@dataclass
class SweepResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    fits: dict[float, SlopeFit | None] = field(default_factory=dict)
    excluded: dict[float, int] = field(default_factory=dict)
    c_D: float | None = None
    c_d: float | None = None

    def means(self, eps: float) -> list[tuple[int, float]]:
        """Mean ``T_eps`` per ``n`` over unflagged trials."""
        out = []
        for n in self.config.n_list:
            vals = [r.t_eps[eps] for r in self.records if r.n == n and not r.flagged(eps)]
            if vals:
                out.append((n, float(np.mean(vals))))
        return out

    def quantiles(self, eps: float, qs=(0.05, 0.5, 0.95)) -> dict[int, list[float]]:
        out = {}
        for n in self.config.n_list:
            vals = [r.t_eps[eps] for r in self.records if r.n == n and not r.flagged(eps)]
            if vals:
                out[n] = [float(v) for v in np.quantile(vals, qs)]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "trial", "seed", "protocol", "eps", "T_eps", "T_full", "rounds_cap_hit"])
        for r in self.records:
            for e in self.config.eps:
                t = r.t_eps.get(e)
                w.writerow([r.n, r.trial, r.seed, r.protocol, f"{e:g}",
                            "" if t is None else t, "" if r.T_full is None else r.T_full,
                            int(r.cap_hit or r.error is not None)])
        return buf.getvalue()

    def summary(self) -> dict[str, Any]:
        return {
            "config": self.config.to_json(),
            "c_D": self.c_D,
            "c_d": self.c_d,
            "fits": {f"{e:g}": (None if f is None else f.to_json()) for e, f in self.fits.items()},
            "excluded": {f"{e:g}": k for e, k in self.excluded.items()},
            "means": {f"{e:g}": self.means(e) for e in self.config.eps},
        }


def run_ensemble(cfg: ExperimentConfig, threads: int = 1) -> SweepResult:
    """Run every ``(n, trial)`` pair of the config and fit mean ``T_eps`` against ``ln n``."""
    cfg.validate()
    jobs = [(cfg, i, t) for i in range(len(cfg.n_list)) for t in range(cfg.trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_trial_job, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        records = [_trial_job(j) for j in jobs]

    result = SweepResult(cfg, records)
    for e in cfg.eps:
        result.excluded[e] = sum(r.flagged(e) for r in records)
        pts = result.means(e)
        try:
            result.fits[e] = fit_slope(pts)
        except DegenerateFit:
            result.fits[e] = None
    if cfg.family is not None:
        seq = _sequence(cfg, max(cfg.n_list))
        d = delta(seq)
        result.c_D = c_D(d) if d >= 3 else None
        if cfg.family.kind == "regular" and cfg.family.d >= 3:
            result.c_d = c_d_regular(cfg.family.d)
    return result


def simplicity_montecarlo(seq: DegreeSequence, samples: int, seed: int = 0) -> dict[str, float]:
    """Empirical simple fraction over independent configurations, next to the asymptotic formula."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    return {"empirical": simple_fraction(seq, samples, rng), "formula": janson_simple_prob(seq),
            "samples": samples}


def find_bad_start(g, threshold: int) -> int | None:
    """Lowest-index minimum-degree vertex all of whose neighbours have degree >= ``threshold``."""
    dmin = int(g.degrees.min())
    for v in np.flatnonzero(g.degrees == dmin).tolist():
        nb = g.neighbors(v)
        if np.all(nb != v) and np.all(g.degrees[nb] >= threshold):
            return v
    return None


@dataclass
class ProbeReport:
    trials: int
    threshold: int
    graphs_with_bad_start: int
    mean_bad: float | None
    mean_uniform: float | None
    not_reached: int

    @property
    def found(self) -> bool:
        return self.graphs_with_bad_start > 0

    @property
    def ratio(self) -> float | None:
        if self.mean_bad is None or not self.mean_uniform:
            return None
        return self.mean_bad / self.mean_uniform

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d["ratio"] = self.ratio
        d["status"] = "measured" if self.found else "none found"
        return d


def pull_bad_start_probe(seq: DegreeSequence, trials: int, threshold: int = 100, seed: int = 0,
                         max_rounds: int = 100_000) -> ProbeReport:
    """Compare pull's time to inform a second vertex from a bad start and from a uniform start.

    A bad start is a minimum-degree vertex whose neighbours all have degree at
    least ``threshold``. Each trial samples a fresh configuration; trials
    without a bad start contribute nothing.
    """
    rng = np.random.default_rng(seed)
    bad, uni = [], []
    missed = 0
    found = 0
    for _ in range(trials):
        g = uniform_pairing(seq, rng)
        v = find_bad_start(g, threshold)
        if v is None:
            continue
        found += 1
        rb = run_pull(g, v, max_rounds, rng, stop_at=2)
        ru = run_pull(g, None, max_rounds, rng, stop_at=2)
        for res, bucket in ((rb, bad), (ru, uni)):
            if res.trajectory[-1] >= 2:
                bucket.append(res.rounds)
            else:
                missed += 1
    return ProbeReport(trials, threshold, found,
                       float(np.mean(bad)) if bad else None,
                       float(np.mean(uni)) if uni else None, missed)


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_json(json.load(fh))
