"""
Degree sequences and the closed-form constants attached to them.

A :class:`DegreeSequence` is a finite list of vertex degrees together with the
empirical histogram used by every downstream constant. Sequences are built from
a :class:`SequenceFamily` (regular, power law, or an explicit list), which also
carries the analytic degree distribution used by :func:`smoothness_report`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import zeta

from .errors import DomainError, InfeasibleConstants, InfeasibleNormalization, OddStubSum

__all__ = [
    "DegreeSequence",
    "SequenceFamily",
    "ProtocolConstants",
    "build_regular",
    "build_power_law",
    "default_cutoff",
    "delta",
    "smoothness_report",
    "c_D",
    "c_d_regular",
    "gamma_supremum",
    "protocol_constants",
]


@dataclass(frozen=True)
class DegreeSequence:
    """Immutable degree list ``degrees[v]`` for vertices ``0..n-1``."""

    degrees: np.ndarray
    family: "SequenceFamily | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        deg = np.array(self.degrees, dtype=np.int64).reshape(-1)
        if deg.size == 0:
            raise ValueError("degree sequence must be nonempty")
        if deg.min() < 1:
            raise ValueError("all degrees must be >= 1")
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @property
    def total_stubs(self) -> int:
        return int(self.degrees.sum())

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min())

    @property
    def is_matchable(self) -> bool:
        return self.total_stubs % 2 == 0

    @property
    def counts(self) -> dict[int, int]:
        """Number of vertices of each degree (only degrees that occur)."""
        values, cnt = np.unique(self.degrees, return_counts=True)
        return {int(k): int(c) for k, c in zip(values, cnt)}

    @property
    def histogram(self) -> dict[int, float]:
        """Empirical fraction of vertices of each degree."""
        n = self.n
        return {k: c / n for k, c in self.counts.items()}

    def fraction(self, k: int) -> float:
        return self.counts.get(int(k), 0) / self.n

    @property
    def mean_degree(self) -> float:
        return self.total_stubs / self.n

    def __len__(self) -> int:
        return self.n

    def to_list(self) -> list[int]:
        return [int(d) for d in self.degrees]


@dataclass(frozen=True)
class SequenceFamily:
    """Recipe for a degree sequence.

    ``kind`` is ``"regular"``, ``"power_law"`` or ``"explicit"``. The JSON form
    is what the command line and the sweep configs consume.
    """

    kind: str
    n: int | None = None
    d: int | None = None
    beta: float | None = None
    d_min: int | None = None
    cutoff: int | None = None
    degrees: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "regular":
            if self.d is None or self.d < 1:
                raise ValueError("regular family requires d >= 1")
        elif self.kind == "power_law":
            if self.beta is None or self.beta <= 2:
                raise ValueError("power_law family requires beta > 2")
            if self.d_min is None or self.d_min < 1:
                raise ValueError("power_law family requires d_min >= 1")
        elif self.kind == "explicit":
            if not self.degrees:
                raise ValueError("explicit family requires a degree list")
            object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
            object.__setattr__(self, "n", len(self.degrees))
        else:
            raise ValueError(f"unknown sequence kind {self.kind!r}")

    @classmethod
    def regular(cls, n: int, d: int) -> "SequenceFamily":
        return cls("regular", n=n, d=d)

    @classmethod
    def power_law(cls, n: int, beta: float, d_min: int, cutoff: int | None = None) -> "SequenceFamily":
        return cls("power_law", n=n, beta=beta, d_min=d_min, cutoff=cutoff)

    @classmethod
    def explicit(cls, degrees) -> "SequenceFamily":
        return cls("explicit", degrees=tuple(degrees))

    def with_n(self, n: int) -> "SequenceFamily":
        """Same family at a different size (explicit lists cannot be resized)."""
        if self.kind == "explicit":
            if n != self.n:
                raise ValueError("cannot resize an explicit degree list")
            return self
        return SequenceFamily(self.kind, n=n, d=self.d, beta=self.beta, d_min=self.d_min, cutoff=self.cutoff)

    def build(self) -> DegreeSequence:
        if self.kind == "regular":
            return build_regular(self.n, self.d)
        if self.kind == "power_law":
            return build_power_law(self.n, self.beta, self.d_min, self.cutoff)
        seq = DegreeSequence(np.array(self.degrees), family=self)
        if not seq.is_matchable:
            raise OddStubSum(f"degree sum {seq.total_stubs} is odd")
        return seq

    def to_json(self) -> dict[str, Any]:
        if self.kind == "regular":
            return {"kind": "regular", "n": self.n, "d": self.d}
        if self.kind == "power_law":
            return {"kind": "power_law", "n": self.n, "beta": self.beta,
                    "d_min": self.d_min, "cutoff": self.cutoff}
        return {"kind": "explicit", "degrees": list(self.degrees)}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "SequenceFamily":
        kind = obj.get("kind")
        if kind == "regular":
            return cls.regular(obj.get("n"), int(obj["d"]))
        if kind == "power_law":
            cutoff = obj.get("cutoff")
            return cls.power_law(obj.get("n"), float(obj["beta"]), int(obj["d_min"]),
                                 None if cutoff is None else int(cutoff))
        if kind == "explicit":
            return cls.explicit(obj["degrees"])
        raise ValueError(f"unknown sequence kind {kind!r}")

    def analytic_mean(self) -> float:
        """Mean degree of the family's defining distribution."""
        if self.kind == "regular":
            return float(self.d)
        if self.kind == "explicit":
            return float(np.mean(self.degrees))
        cutoff = self.cutoff if self.cutoff is not None else default_cutoff(self.n, self.beta)
        k = np.arange(self.d_min, cutoff + 1, dtype=float)
        w = k ** -self.beta
        return float((k * w).sum() / w.sum())


def build_regular(n: int, d: int) -> DegreeSequence:
    """All ``n`` vertices get degree ``d``."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if (n * d) % 2:
        raise OddStubSum(f"n*d = {n * d} is odd")
    return DegreeSequence(np.full(n, d, dtype=np.int64), family=SequenceFamily.regular(n, d))


def default_cutoff(n: int, beta: float) -> int:
    """Natural cutoff ``n^(1/(beta-1))``, capped at ``n^0.49`` to keep the max degree o(sqrt n)."""
    return int(min(math.floor(n ** (1.0 / (beta - 1.0))), math.floor(n ** 0.49)))


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    exact = weights / weights.sum() * total
    counts = np.floor(exact).astype(np.int64)
    short = total - int(counts.sum())
    if short:
        # stable sort keeps ties going to the smaller degree
        order = np.argsort(-(exact - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def build_power_law(n: int, beta: float, d_min: int, cutoff: int | None = None) -> DegreeSequence:
    """Deterministic power-law sequence with ``count(k)`` proportional to ``k^-beta``.

    Counts on ``[d_min, cutoff]`` are rounded with the largest-remainder rule so
    they sum to exactly ``n``. If the stub total comes out odd, one vertex of the
    most populated degree class gets one extra stub.
    """
    if beta <= 2:
        raise ValueError("beta must be > 2")
    if d_min < 1:
        raise ValueError("d_min must be >= 1")
    if n < 1:
        raise InfeasibleNormalization("n must be >= 1")
    if cutoff is None:
        cutoff = default_cutoff(n, beta)
    if cutoff < d_min:
        raise InfeasibleNormalization(f"cutoff {cutoff} < d_min {d_min} at n={n}")

    k = np.arange(d_min, cutoff + 1, dtype=np.int64)
    counts = _largest_remainder(k.astype(float) ** -beta, n)
    if int(counts.sum()) != n:
        raise InfeasibleNormalization("rounding did not reproduce n")
    degrees = np.repeat(k, counts)
    if int(degrees.sum()) % 2:
        target = k[int(np.argmax(counts))]
        # degrees are sorted, so the last vertex of the class is easy to find
        idx = int(np.searchsorted(degrees, target, side="right")) - 1
        degrees[idx] += 1
        degrees.sort()
    fam = SequenceFamily.power_law(n, beta, d_min, cutoff)
    return DegreeSequence(degrees, family=fam)


def delta(seq: DegreeSequence) -> int:
    """Effective minimum degree: ``d-1`` for an exactly ``d``-regular sequence, else the minimum."""
    lo, hi = seq.min_degree, seq.max_degree
    if lo == hi:
        return lo - 1
    return lo


def smoothness_report(family: SequenceFamily) -> dict[str, Any]:
    """Sparseness and 2-smoothness of the family's limiting degree distribution.

    Power laws are judged on their infinite-support law ``k^-beta`` for
    ``k >= d_min`` (Hurwitz zeta normalisation); finite-support families are
    always 2-smooth.
    """
    if family.kind == "regular":
        m2 = float(family.d) ** 2
        return {"is_sparse": True, "is_two_smooth": True, "second_moment": m2}
    if family.kind == "explicit":
        deg = np.asarray(family.degrees, dtype=float)
        return {"is_sparse": True, "is_two_smooth": True, "second_moment": float((deg ** 2).mean())}
    beta, k0 = family.beta, family.d_min
    norm = zeta(beta, k0)
    sparse = beta > 2
    if beta > 3:
        m2 = float(zeta(beta - 2, k0) / norm)
    else:
        m2 = math.inf
    return {"is_sparse": sparse, "is_two_smooth": beta > 3, "second_moment": m2}


def c_D(delta: int) -> float:
    """Growth constant ``1 / ln(2 (1 - 1/delta))``; defined for ``delta >= 3``."""
    if delta < 3:
        raise DomainError(f"c_D needs delta >= 3, got {delta}")
    return 1.0 / math.log(2.0 * (1.0 - 1.0 / delta))


def c_d_regular(d: int) -> float:
    """Full-broadcast constant for push on random ``d``-regular graphs."""
    if d <= 2:
        raise DomainError(f"c_d needs d >= 3, got {d}")
    return 1.0 / math.log(2.0 * (1.0 - 1.0 / d)) - 1.0 / (d * math.log(1.0 - 1.0 / d))


@dataclass(frozen=True)
class ProtocolConstants:
    delta: int
    gamma: float
    M: int
    alpha: float
    c_D: float
    mean_degree: float

    def to_json(self) -> dict[str, Any]:
        return {"delta": self.delta, "gamma": self.gamma, "M": self.M,
                "alpha": self.alpha, "c_D": self.c_D, "mean_degree": self.mean_degree}


def _gamma_margin(lam_delta: float, d: int) -> float:
    return (1.0 - lam_delta) / (64.0 * d * d)


def gamma_supremum(seq: DegreeSequence) -> float:
    """Supremum of admissible gamma; the admissible set is open at this value."""
    d = delta(seq)
    a = _gamma_margin(seq.fraction(d), d)
    # 2g/(1-g) < a  <=>  g < a/(2+a)
    return min(a / (2.0 + a), 1.0 / 6.0, 1.0 / d)


def _gamma_ok(gamma: float, lam_delta: float, d: int) -> bool:
    if not 0 < gamma <= 1.0 / 6.0 or gamma >= 1.0 / d:
        return False
    return _gamma_margin(lam_delta, d) > 2.0 * gamma / (1.0 - gamma)


def protocol_constants(seq: DegreeSequence, gamma: float | None = None) -> ProtocolConstants:
    """Compute delta, gamma, M, alpha and c_D from the empirical histogram.

    ``gamma=None`` picks 90% of :func:`gamma_supremum`; a float is validated
    against the constraints and used as given.
    """
    d = delta(seq)
    if d < 3:
        raise InfeasibleConstants(f"delta = {d} < 3")
    lam_d = seq.fraction(d)
    if gamma is None:
        sup = gamma_supremum(seq)
        if sup <= 0:
            raise InfeasibleConstants("no positive gamma satisfies the constraints")
        gamma = 0.9 * sup
    if not _gamma_ok(gamma, lam_d, d):
        raise InfeasibleConstants(f"gamma = {gamma} violates the constraints for delta = {d}")

    counts = seq.counts
    ks = sorted(k for k in counts if k >= d)
    mass = np.array([k * counts[k] / seq.n for k in ks])
    total = mass.sum()
    cum = np.cumsum(mass) / total
    i = int(np.searchsorted(cum, 1.0 - gamma / 4.0 - 1e-15))
    M = max(int(ks[min(i, len(ks) - 1)]), d)

    alpha = min(gamma * total / (2.0 * M),
                (1.0 - lam_d) / (1.0 + lam_d),
                (d - 1) / (4.0 * d * (1.0 - 1.0 / d)))
    return ProtocolConstants(delta=d, gamma=float(gamma), M=M, alpha=float(alpha),
                             c_D=c_D(d), mean_degree=seq.mean_degree)
