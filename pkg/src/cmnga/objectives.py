"""Benchmark objective functions, reference optima, and evaluation counting.

All objectives use a maximization convention. F1 and F2 live on [0, 1]; F3 is
a two-dimensional Shekel-foxholes-style function on [-65.536, 65.536]^2 with a
5x5 grid of peaks spaced 16 units apart; F4 is a sum of five rational peaks of
different heights and widths on [-40, 40]^2.

F3 note: the sum with a constant `1 +` in every denominator yields 25 peaks of
nearly equal height. The classic foxholes variant with an `i +` term (unequal
heights) is available behind ``unequal_heights=True``; the constant-term form
is the default and is never substituted silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .core import DesignSpace

F1_SPACE = DesignSpace(np.array([0.0]), np.array([1.0]))
F2_SPACE = DesignSpace(np.array([0.0]), np.array([1.0]))
F3_SPACE = DesignSpace(np.array([-65.536, -65.536]), np.array([65.536, 65.536]))
F4_SPACE = DesignSpace(np.array([-40.0, -40.0]), np.array([40.0, 40.0]))

# x and y coordinates of the 25 F3 foxholes: a 5x5 grid in row-major order.
_F3_NODES = np.array(
    [(a, b) for b in (-32.0, -16.0, 0.0, 16.0, 32.0) for a in (-32.0, -16.0, 0.0, 16.0, 32.0)]
)


@dataclass(frozen=True)
class PeakSpec:
    """Center, height, and width of one rational peak of F4."""

    a: float
    b: float
    h: float
    w: float

    def __post_init__(self) -> None:
        if self.h <= 0 or self.w <= 0:
            raise ValueError("peak height and width must be positive")


F4_PEAKS: tuple[PeakSpec, ...] = (
    PeakSpec(-20.0, -20.0, 0.4, 0.02),
    PeakSpec(-5.0, -25.0, 0.2, 0.5),
    PeakSpec(0.0, 30.0, 0.7, 0.01),
    PeakSpec(30.0, 0.0, 1.0, 2.0),
    PeakSpec(30.0, -30.0, 0.05, 0.1),
)


def f1_values(x) -> np.ndarray:
    """Vectorized F1 (no bounds check): sin^6(5.1*pi*x + 0.5), five equal peaks."""
    x = np.asarray(x, dtype=float)
    return np.sin(5.1 * np.pi * x + 0.5) ** 6


def f2_values(x) -> np.ndarray:
    """Vectorized F2: F1 under a Gaussian envelope centered at x = 0.0667."""
    x = np.asarray(x, dtype=float)
    envelope = np.exp(-4.0 * np.log(2.0) * (x - 0.0667) ** 2 / 0.64)
    return envelope * f1_values(x)


def f3_values(x, y, unequal_heights: bool = False) -> np.ndarray:
    """Vectorized F3: 0.002 plus 25 sixth-power foxhole terms on a 16-unit grid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.full(np.broadcast(x, y).shape, 0.002)
    for i, (a, b) in enumerate(_F3_NODES, start=1):
        const = float(i) if unequal_heights else 1.0
        dx2 = (x - a) ** 2
        dy2 = (y - b) ** 2
        total = total + 1.0 / (const + dx2**3 + dy2**3)
    return total


def f4_values(x, y) -> np.ndarray:
    """Vectorized F4: five rational peaks with the tabulated heights and widths."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape)
    for p in F4_PEAKS:
        total = total + p.h / (1.0 + p.w * ((x - p.a) ** 2 + (y - p.b) ** 2))
    return total


def _check_1d(x: float, space: DesignSpace, name: str) -> None:
    if not space.lower[0] <= x <= space.upper[0]:
        raise ValueError(f"{name} is defined on [{space.lower[0]}, {space.upper[0]}], got {x}")


def _check_2d(x: float, y: float, space: DesignSpace, name: str) -> None:
    if not space.contains(np.array([x, y])):
        raise ValueError(f"({x}, {y}) lies outside the {name} domain")


def f1(x: float) -> float:
    _check_1d(x, F1_SPACE, "F1")
    return float(f1_values(x))


def f2(x: float) -> float:
    _check_1d(x, F2_SPACE, "F2")
    return float(f2_values(x))


def f3(x: float, y: float, unequal_heights: bool = False) -> float:
    _check_2d(x, y, F3_SPACE, "F3")
    return float(f3_values(x, y, unequal_heights=unequal_heights))


def f4(x: float, y: float) -> float:
    _check_2d(x, y, F4_SPACE, "F4")
    return float(f4_values(x, y))


class Objective:
    """Named objective with a design space and an evaluation counter.

    ``evaluate`` increments the counter by exactly one per call. The counter
    is not synchronized: one optimizer run owns one counter.
    """

    def __init__(self, name: str, space: DesignSpace, fn):
        self.name = name
        self.space = space
        self._fn = fn
        self.eval_count = 0

    def evaluate(self, genome: np.ndarray) -> float:
        g = np.asarray(genome, dtype=float)
        if not self.space.contains(g):
            raise ValueError(f"genome {g!r} lies outside the {self.name} domain")
        value = float(self._fn(g))
        if not math.isfinite(value):
            raise ValueError(f"{self.name} returned a non-finite value at {g!r}")
        self.eval_count += 1
        return value

    def reset_count(self) -> None:
        self.eval_count = 0


def counting_wrapper(obj: Objective) -> Objective:
    """A view of the same objective with a fresh, independent counter."""
    return Objective(obj.name, obj.space, obj._fn)


_REGISTRY: dict[str, tuple[DesignSpace, object]] = {}


def register_objective(name: str, space: DesignSpace, fn, replace: bool = False) -> None:
    """Register a user objective by name: ``fn`` maps a genome vector to a float."""
    if name in _REGISTRY and not replace:
        raise ValueError(f"objective {name!r} is already registered")
    _REGISTRY[name] = (space, fn)


def objective_names() -> list[str]:
    return ["F1", "F2", "F3", "F4"] + sorted(_REGISTRY)


def get_objective(name: str, f3_unequal_heights: bool = False) -> Objective:
    """A fresh Objective (with its own counter) for a registered name."""
    if name == "F1":
        return Objective("F1", F1_SPACE, lambda g: f1_values(g[0]))
    if name == "F2":
        return Objective("F2", F2_SPACE, lambda g: f2_values(g[0]))
    if name == "F3":
        if f3_unequal_heights:
            return Objective("F3", F3_SPACE, lambda g: f3_values(g[0], g[1], unequal_heights=True))
        return Objective("F3", F3_SPACE, lambda g: f3_values(g[0], g[1]))
    if name == "F4":
        return Objective("F4", F4_SPACE, lambda g: f4_values(g[0], g[1]))
    if name in _REGISTRY:
        space, fn = _REGISTRY[name]
        return Objective(name, space, fn)
    raise KeyError(f"unknown objective {name!r}; known: {objective_names()}")


@dataclass(frozen=True, eq=False)
class ReferenceOptima:
    """Known local maximizers of an objective plus per-point capture radii.

    Radii are raw-unit distances used only for peaks-found bookkeeping, never
    for the convergence metric itself.
    """

    points: np.ndarray  # (m, n), raw units
    radii: np.ndarray  # (m,)
    values: np.ndarray  # (m,) objective values at the points

    @property
    def count(self) -> int:
        return self.points.shape[0]


def f1_maximizer_locations() -> np.ndarray:
    """The five F1 peak locations, solved analytically from the sine argument."""
    k = np.arange(5)
    return (np.pi / 2.0 + k * np.pi - 0.5) / (5.1 * np.pi)


def _refine_1d(fn_vec, center: float, half_width: float, space: DesignSpace) -> float:
    lo = max(float(space.lower[0]), center - half_width)
    hi = min(float(space.upper[0]), center + half_width)
    res = optimize.minimize_scalar(
        lambda x: -float(fn_vec(x)), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x)


def _refine_2d(fn_vec, start: np.ndarray, space: DesignSpace) -> np.ndarray:
    res = optimize.minimize(
        lambda p: -float(fn_vec(p[0], p[1])),
        np.asarray(start, dtype=float),
        method="Nelder-Mead",
        bounds=list(zip(space.lower, space.upper)),
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
    )
    return np.asarray(res.x, dtype=float)


_OPTIMA_CACHE: dict[tuple[str, bool], ReferenceOptima] = {}


def reference_optima(name: str, f3_unequal_heights: bool = False) -> ReferenceOptima:
    """Local maximizers for F1..F4, refined by hill climbing from seed points.

    F1 is analytic; F2 refines from the F1 peaks; F3 refines from its grid
    nodes; F4 refines from the tabulated peak centers (cross terms shift the
    true maximizers slightly). Results are cached per process.
    """
    key = (name, bool(f3_unequal_heights and name == "F3"))
    if key in _OPTIMA_CACHE:
        return _OPTIMA_CACHE[key]
    if name == "F1":
        pts = f1_maximizer_locations().reshape(-1, 1)
        vals = f1_values(pts[:, 0])
        radii = np.full(len(pts), 0.01)
    elif name == "F2":
        xs = np.array([_refine_1d(f2_values, c, 0.09, F2_SPACE) for c in f1_maximizer_locations()])
        pts = xs.reshape(-1, 1)
        vals = f2_values(xs)
        radii = np.full(len(pts), 0.01)
    elif name == "F3":
        fn = lambda x, y: f3_values(x, y, unequal_heights=key[1])  # noqa: E731
        pts = np.array([_refine_2d(fn, node, F3_SPACE) for node in _F3_NODES])
        vals = fn(pts[:, 0], pts[:, 1])
        radii = np.full(len(pts), 1.0)
    elif name == "F4":
        starts = np.array([(p.a, p.b) for p in F4_PEAKS])
        pts = np.array([_refine_2d(f4_values, s, F4_SPACE) for s in starts])
        vals = f4_values(pts[:, 0], pts[:, 1])
        radii = np.full(len(pts), 1.0)
    else:
        raise KeyError(f"no reference optima for objective {name!r}")
    ref = ReferenceOptima(points=pts, radii=radii, values=np.asarray(vals, dtype=float))
    _OPTIMA_CACHE[key] = ref
    return ref
