"""
Configuration model: random multigraphs with a prescribed degree sequence.

Stubs are numbered ``0..total_stubs-1`` vertex by vertex, so vertex ``v`` owns
the contiguous block ``offsets[v]:offsets[v+1]``. A :class:`StubSpace` holds a
partial matching and the set ``U`` of unmatched stubs; stubs can be matched one
at a time (deferred decisions) or all remaining stubs can be paired at once.
Both routes produce a uniform random configuration.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .degseq import DegreeSequence
from .errors import AlreadyMatched, Exhausted, OddStubSum, TriesExhausted

__all__ = [
    "StubSpace",
    "Multigraph",
    "CompleteGraph",
    "new_stub_space",
    "match_uniform",
    "complete_matching",
    "complete_by_deferred",
    "uniform_pairing",
    "pairing_batch",
    "is_simple",
    "janson_simple_prob",
    "sample_simple",
    "enumerate_pairings",
    "count_pairings",
    "simple_fraction",
]


def _offsets(degrees: np.ndarray) -> np.ndarray:
    off = np.zeros(degrees.size + 1, dtype=np.int64)
    np.cumsum(degrees, out=off[1:])
    return off


class StubSpace:
    """Stub indexing plus a partial matching.

    ``partner[s]`` is the stub matched to ``s`` or ``-1``. The unmatched set is
    kept in a swap-remove list with a position index, giving O(1) uniform
    sampling and deletion.
    """

    def __init__(self, degrees):
        deg = np.asarray(degrees, dtype=np.int64)
        total = int(deg.sum())
        if total % 2:
            raise OddStubSum(f"degree sum {total} is odd")
        self.degrees = deg
        self.n = int(deg.size)
        self.total_stubs = total
        self.offsets = _offsets(deg)
        self.owner = np.repeat(np.arange(self.n, dtype=np.int64), deg)
        self.slot = np.arange(total, dtype=np.int64) - self.offsets[self.owner]
        self.partner = np.full(total, -1, dtype=np.int64)
        self._free = list(range(total))
        self._pos = list(range(total))

    @property
    def unmatched_count(self) -> int:
        return len(self._free)

    def unmatched(self) -> list[int]:
        return sorted(self._free)

    def is_unmatched(self, s: int) -> bool:
        return self._pos[s] >= 0

    def stub(self, v: int, slot: int) -> int:
        return int(self.offsets[v]) + slot

    def _remove(self, s: int) -> None:
        free, pos = self._free, self._pos
        i = pos[s]
        last = free.pop()
        if last != s:
            free[i] = last
            pos[last] = i
        pos[s] = -1

    def pair(self, a: int, b: int) -> None:
        """Record the match ``a``--``b`` (both must be unmatched and distinct)."""
        if a == b or self._pos[a] < 0 or self._pos[b] < 0:
            raise AlreadyMatched(f"cannot pair stubs {a} and {b}")
        self._remove(a)
        self._remove(b)
        self.partner[a] = b
        self.partner[b] = a

    def match_uniform(self, e: int, rng: np.random.Generator) -> int:
        """Match ``e`` to a stub drawn uniformly from ``U \\ {e}``; return the partner."""
        pos = self._pos
        if pos[e] < 0:
            raise AlreadyMatched(f"stub {e} is already matched")
        size = len(self._free)
        if size < 2:
            raise Exhausted("fewer than two unmatched stubs")
        # float draw is uniform to within size/2**53, far below any test resolution
        j = int(rng.random() * (size - 1))
        if j >= pos[e]:
            j += 1
        f = self._free[j]
        self._remove(e)
        self._remove(f)
        self.partner[e] = f
        self.partner[f] = e
        return f

    def to_multigraph(self) -> "Multigraph":
        if self._free:
            raise ValueError(f"{len(self._free)} stubs are still unmatched")
        return Multigraph(self.degrees, self.partner.copy())


def new_stub_space(seq: DegreeSequence | np.ndarray | list) -> StubSpace:
    degrees = seq.degrees if isinstance(seq, DegreeSequence) else seq
    return StubSpace(degrees)


def match_uniform(space: StubSpace, e: int, rng: np.random.Generator) -> int:
    return space.match_uniform(e, rng)


def complete_matching(space: StubSpace, rng: np.random.Generator) -> "Multigraph":
    """Pair every remaining unmatched stub uniformly at random (one shot)."""
    rest = np.array(space.unmatched(), dtype=np.int64)
    rest = rng.permutation(rest)
    for a, b in zip(rest[0::2].tolist(), rest[1::2].tolist()):
        space.pair(a, b)
    return space.to_multigraph()


def complete_by_deferred(space: StubSpace, rng: np.random.Generator, order=None) -> "Multigraph":
    """Finish the matching by repeatedly matching a stub to a uniform partner.

    ``order`` fixes which stub is matched next (the first still-unmatched stub
    of the sequence); the default is ascending stub index.
    """
    if order is None:
        order = range(space.total_stubs)
    for e in order:
        if space.is_unmatched(e):
            space.match_uniform(e, rng)
    return space.to_multigraph()


class Multigraph:
    """A completed configuration.

    ``partner`` is the stub involution; neighbours are sampled per stub, so a
    double edge is twice as likely as a single one and a loop points back at
    its own vertex.
    """

    def __init__(self, degrees, partner):
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self.n = int(self.degrees.size)
        self.offsets = _offsets(self.degrees)
        self.owner = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        self.partner = np.asarray(partner, dtype=np.int64)
        # neighbour reached through each stub
        self.stub_target = self.owner[self.partner]

    @property
    def m(self) -> int:
        return int(self.partner.size // 2)

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of endpoints, one row per edge, loops as ``(v, v)``."""
        s = np.arange(self.partner.size)
        keep = s < self.partner
        e = np.stack([self.owner[s[keep]], self.owner[self.partner[keep]]], axis=1)
        e.sort(axis=1)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Neighbour of every stub of ``v`` (with multiplicity)."""
        return self.stub_target[self.offsets[v]:self.offsets[v + 1]]

    def sample_neighbors(self, vertices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One uniformly chosen stub per vertex, returned as the vertex at its other end."""
        deg = self.degrees[vertices]
        pick = (rng.random(vertices.size) * deg).astype(np.int64)
        return self.stub_target[self.offsets[vertices] + pick]

    def edge_multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple(map(tuple, self.edges.tolist()))

    def to_edgelist(self) -> str:
        lines = [f"# n={self.n} m={self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "Multigraph":
        n = None
        pairs = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "n":
                        n = int(val)
                continue
            u, v = map(int, line.split())
            pairs.append((u, v))
        return cls.from_edges(n, pairs)

    @classmethod
    def from_edges(cls, n: int, pairs) -> "Multigraph":
        """Build from an edge list; stubs are assigned in edge order."""
        degrees = np.zeros(n, dtype=np.int64)
        for u, v in pairs:
            degrees[u] += 1
            degrees[v] += 1
        offsets = _offsets(degrees)
        fill = offsets[:-1].copy()
        partner = np.empty(int(degrees.sum()), dtype=np.int64)
        for u, v in pairs:
            a = fill[u]
            fill[u] += 1
            b = fill[v]
            fill[v] += 1
            partner[a] = b
            partner[b] = a
        return cls(degrees, partner)


class CompleteGraph:
    """The complete simple graph ``K_n`` with the neighbour-sampling interface of :class:`Multigraph`."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("K_n needs n >= 2")
        self.n = n
        self.degrees = np.full(n, n - 1, dtype=np.int64)

    def sample_neighbors(self, vertices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        r = rng.integers(0, self.n - 1, size=vertices.size)
        return r + (r >= vertices)

    def neighbors(self, v: int) -> np.ndarray:
        return np.delete(np.arange(self.n), v)


def uniform_pairing(seq: DegreeSequence | np.ndarray | list, rng: np.random.Generator) -> Multigraph:
    """Sample a uniform configuration by pairing a random permutation of all stubs."""
    degrees = np.asarray(seq.degrees if isinstance(seq, DegreeSequence) else seq, dtype=np.int64)
    total = int(degrees.sum())
    if total % 2:
        raise OddStubSum(f"degree sum {total} is odd")
    perm = rng.permutation(total)
    partner = np.empty(total, dtype=np.int64)
    partner[perm[0::2]] = perm[1::2]
    partner[perm[1::2]] = perm[0::2]
    return Multigraph(degrees, partner)


def is_simple(g: Multigraph) -> bool:
    """True iff the multigraph has no loops and no repeated edges."""
    e = g.edges
    if e.size == 0:
        return True
    if np.any(e[:, 0] == e[:, 1]):
        return False
    return not np.any(np.all(e[1:] == e[:-1], axis=1))


def janson_simple_prob(seq: DegreeSequence) -> float:
    """Asymptotic probability that the configuration is simple (o(1) term dropped)."""
    deg = np.asarray(seq.degrees, dtype=float)
    m = deg.sum() / 2.0
    if m <= 0:
        raise ValueError("need at least one edge")
    s2 = float((deg ** 2).sum())
    return math.exp(-(s2 ** 2) / (16.0 * m * m) + 0.25)


def sample_simple(seq: DegreeSequence, rng: np.random.Generator, max_tries: int = 1000) -> Multigraph:
    """Rejection-sample configurations until one is simple."""
    if max_tries < 1:
        raise ValueError("max_tries must be >= 1")
    for _ in range(max_tries):
        g = uniform_pairing(seq, rng)
        if is_simple(g):
            return g
    raise TriesExhausted(f"no simple sample in {max_tries} tries")


def pairing_batch(seq, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform configurations as an array of shape ``(size, m, 2)``.

    Row ``i`` holds the edges of sample ``i`` as ``(u, v)`` with ``u <= v``,
    sorted lexicographically, so equal multigraphs give equal rows.
    """
    degrees = np.asarray(seq.degrees if isinstance(seq, DegreeSequence) else seq, dtype=np.int64)
    total = int(degrees.sum())
    if total % 2:
        raise OddStubSum(f"degree sum {total} is odd")
    owner = np.repeat(np.arange(degrees.size, dtype=np.int64), degrees)
    n = max(int(degrees.size), 1)
    perms = rng.permuted(np.tile(np.arange(total), (size, 1)), axis=1)
    ends = owner[perms]
    a, b = ends[:, 0::2], ends[:, 1::2]
    keys = np.sort(np.minimum(a, b) * n + np.maximum(a, b), axis=1)
    return np.stack([keys // n, keys % n], axis=2)


def simple_fraction(seq: DegreeSequence, samples: int, rng: np.random.Generator,
                    chunk: int = 2000) -> float:
    """Fraction of ``samples`` independent uniform configurations that are simple."""
    simple = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        e = pairing_batch(seq, k, rng)
        has_loop = np.any(e[:, :, 0] == e[:, :, 1], axis=1)
        has_multi = np.any(np.all(e[:, 1:] == e[:, :-1], axis=2), axis=1)
        simple += int(np.count_nonzero(~(has_loop | has_multi)))
        done += k
    return simple / samples


def count_pairings(total_stubs: int) -> int:
    """``(total_stubs - 1)!!``, the number of perfect matchings of the stubs."""
    if total_stubs % 2:
        return 0
    return math.prod(range(total_stubs - 1, 0, -2)) if total_stubs else 1


def enumerate_pairings(total_stubs: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect matchings of ``0..total_stubs-1`` (brute force, small inputs only)."""

    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            for tail in rec(rest[1:i] + rest[i + 1:]):
                yield ((a, b),) + tail

    yield from rec(tuple(range(total_stubs)))
