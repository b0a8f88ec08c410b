"""Shared domain types: design spaces, individuals, and the cumulative archive.

All distances and proximities are computed on coordinates normalized to the
unit hypercube so that density thresholds and proximity weights behave the
same way on anisotropic domains. The one deliberate exception is the
benchmark convergence metric, which reports raw-unit distances (see
``cmnga.metrics``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Below this normalized distance two points are treated as coincident and the
# proximity is capped instead of diverging.
PROXIMITY_EPS = 1e-12
PROXIMITY_CAP = 1.0 / PROXIMITY_EPS


def make_rng(seed: int | None = None) -> np.random.Generator:
    """Deterministic random stream: the same seed yields the same deviates."""
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class DesignSpace:
    """Box-bounded continuous design space."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or upper.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be 1-d vectors of equal length")
        if lower.size < 1:
            raise ValueError("design space needs at least one dimension")
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ValueError("bounds must be finite")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def extent(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, point: np.ndarray) -> bool:
        p = np.asarray(point, dtype=float)
        if p.shape != self.lower.shape:
            return False
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))

    def sample_uniform(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)


def normalize(point: np.ndarray, space: DesignSpace) -> np.ndarray:
    """Map a point to [0, 1]^n; raises on out-of-bounds input."""
    p = np.asarray(point, dtype=float)
    if not space.contains(p):
        raise ValueError(f"point {p!r} lies outside the design space bounds")
    return (p - space.lower) / space.extent


def distance(a: np.ndarray, b: np.ndarray, space: DesignSpace) -> float:
    """Euclidean distance between two genomes in normalized coordinates."""
    return float(np.linalg.norm(normalize(a, space) - normalize(b, space)))


def proximity(a: np.ndarray, b: np.ndarray, space: DesignSpace) -> float:
    """Inverse normalized distance, capped at 1/PROXIMITY_EPS for coincident points."""
    d = distance(a, b, space)
    if d < PROXIMITY_EPS:
        return PROXIMITY_CAP
    return 1.0 / d


@dataclass(eq=False)
class Individual:
    """One evaluated design point. Ids are dense insertion indices."""

    id: int
    genome: np.ndarray
    raw_fitness: float
    birth_generation: int


class Archive:
    """Append-only population with normalized-coordinate caches.

    Nothing is ever removed, so ids are stable forever and equal the insertion
    order. An optional incremental k-nearest-neighbor cache (``neighbor_k``)
    keeps each member's nearest neighbors current as the archive grows, which
    the local-optimum test relies on; without it, neighbor queries fall back
    to a full scan.
    """

    def __init__(self, space: DesignSpace, neighbor_k: int | None = None):
        if neighbor_k is not None and neighbor_k < 1:
            raise ValueError("neighbor_k must be >= 1")
        self.space = space
        self._neighbor_k = neighbor_k
        self._size = 0
        cap = 64
        n = space.n
        self._genomes = np.empty((cap, n))
        self._norm = np.empty((cap, n))
        self._fitness = np.empty(cap)
        self._thresholds = np.empty(cap)
        self._birth = np.empty(cap, dtype=np.int64)
        if neighbor_k is not None:
            self._nb_d = np.full((cap, neighbor_k), np.inf)
            self._nb_i = np.full((cap, neighbor_k), -1, dtype=np.int64)
            self._nb_len = np.zeros(cap, dtype=np.int64)

    def __len__(self) -> int:
        return self._size

    @property
    def size(self) -> int:
        return self._size

    @property
    def genomes(self) -> np.ndarray:
        return self._genomes[: self._size]

    @property
    def normalized_genomes(self) -> np.ndarray:
        return self._norm[: self._size]

    @property
    def raw_fitness(self) -> np.ndarray:
        return self._fitness[: self._size]

    @property
    def insertion_thresholds(self) -> np.ndarray:
        return self._thresholds[: self._size]

    @property
    def birth_generations(self) -> np.ndarray:
        return self._birth[: self._size]

    def individual(self, i: int) -> Individual:
        if not 0 <= i < self._size:
            raise IndexError(f"no individual with id {i}")
        return Individual(
            id=i,
            genome=self._genomes[i].copy(),
            raw_fitness=float(self._fitness[i]),
            birth_generation=int(self._birth[i]),
        )

    def _grow(self) -> None:
        cap = self._genomes.shape[0] * 2
        self._genomes = np.concatenate([self._genomes, np.empty_like(self._genomes)])
        self._norm = np.concatenate([self._norm, np.empty_like(self._norm)])
        self._fitness = np.concatenate([self._fitness, np.empty_like(self._fitness)])
        self._thresholds = np.concatenate([self._thresholds, np.empty_like(self._thresholds)])
        self._birth = np.concatenate([self._birth, np.empty_like(self._birth)])
        if self._neighbor_k is not None:
            k = self._neighbor_k
            half = cap // 2
            self._nb_d = np.concatenate([self._nb_d, np.full((half, k), np.inf)])
            self._nb_i = np.concatenate([self._nb_i, np.full((half, k), -1, dtype=np.int64)])
            self._nb_len = np.concatenate([self._nb_len, np.zeros(half, dtype=np.int64)])

    def append(
        self,
        genome: np.ndarray,
        raw_fitness: float,
        birth_generation: int = 0,
        insertion_threshold: float = 0.0,
    ) -> Individual:
        g = np.asarray(genome, dtype=float)
        if not self.space.contains(g):
            raise ValueError(f"genome {g!r} lies outside the design space bounds")
        if not np.isfinite(raw_fitness):
            raise ValueError("raw fitness must be finite")
        if self._size == self._genomes.shape[0]:
            self._grow()
        gid = self._size
        q = (g - self.space.lower) / self.space.extent
        self._genomes[gid] = g
        self._norm[gid] = q
        self._fitness[gid] = raw_fitness
        self._thresholds[gid] = insertion_threshold
        self._birth[gid] = birth_generation
        if self._neighbor_k is not None:
            self._update_neighbors(gid, q)
        self._size = gid + 1
        return Individual(gid, g.copy(), float(raw_fitness), int(birth_generation))

    def _update_neighbors(self, gid: int, q: np.ndarray) -> None:
        k = self._neighbor_k
        m = gid
        if m == 0:
            return
        dvec = np.sqrt(((self._norm[:m] - q) ** 2).sum(axis=1))
        # Own list: the k smallest by (distance, id). Selecting everything at
        # or below the k-th distance and stable-sorting keeps exact distance
        # ties in ascending-id order.
        kk = min(k, m)
        thr = np.partition(dvec, kk - 1)[kk - 1]
        cand = np.flatnonzero(dvec <= thr)
        order = np.argsort(dvec[cand], kind="stable")[:kk]
        sel = cand[order]
        self._nb_d[gid, :kk] = dvec[sel]
        self._nb_i[gid, :kk] = sel
        self._nb_len[gid] = kk
        # Existing lists: the newcomer has the largest id, so on an exact
        # distance tie the incumbent entry wins and no update happens.
        lens = self._nb_len[:m]
        has_room = lens < k
        worst = self._nb_d[:m, k - 1]
        needs = has_room | (dvec < worst)
        for i in np.flatnonzero(needs):
            li = int(lens[i])
            row_d = self._nb_d[i]
            row_i = self._nb_i[i]
            d = dvec[i]
            pos = int(np.searchsorted(row_d[:li], d, side="right"))
            end = min(li + 1, k)
            row_d[pos + 1 : end] = row_d[pos : end - 1].copy()
            row_i[pos + 1 : end] = row_i[pos : end - 1].copy()
            row_d[pos] = d
            row_i[pos] = gid
            self._nb_len[i] = end

    def distances_to(self, point: np.ndarray) -> np.ndarray:
        """Normalized distances from a point to every archive member."""
        p = np.asarray(point, dtype=float)
        if not self.space.contains(p):
            raise ValueError(f"point {p!r} lies outside the design space bounds")
        q = (p - self.space.lower) / self.space.extent
        return np.sqrt(((self._norm[: self._size] - q) ** 2).sum(axis=1))

    def nearest(self, point: np.ndarray) -> tuple[int, float]:
        """(id, normalized distance) of the nearest member; ties go to the lower id."""
        if self._size == 0:
            raise ValueError("archive is empty")
        d = self.distances_to(point)
        idx = int(np.argmin(d))
        return idx, float(d[idx])

    def neighbor_ids(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-member nearest-neighbor ids.

        Returns ``(ids, counts)`` where ``ids`` has shape (size, k), padded
        with -1, and ``counts[i] = min(k, size - 1)``. Ordering within a row
        is ascending by (distance, id). Served from the incremental cache
        when ``k`` matches ``neighbor_k``, otherwise recomputed by full scan.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        n = self._size
        if n == 0:
            raise ValueError("archive is empty")
        if self._neighbor_k is not None and k == self._neighbor_k:
            return self._nb_i[:n].copy(), self._nb_len[:n].copy()
        ids = np.full((n, k), -1, dtype=np.int64)
        counts = np.full(n, min(k, n - 1), dtype=np.int64)
        norm = self._norm[:n]
        for i in range(n):
            d = np.sqrt(((norm - norm[i]) ** 2).sum(axis=1))
            d[i] = np.inf
            order = np.argsort(d, kind="stable")[: counts[i]]
            ids[i, : counts[i]] = order
        return ids, counts


def k_nearest(archive: Archive, point: np.ndarray, k: int) -> list[Individual]:
    """The min(k, size) members nearest to ``point``, ascending by (distance, id)."""
    if len(archive) == 0:
        raise ValueError("archive is empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    d = archive.distances_to(point)
    order = np.argsort(d, kind="stable")[: min(k, len(archive))]
    return [archive.individual(int(i)) for i in order]
