"""Core geometric types and exact sup-norm point/segment computations.

All coordinates are double precision.  The probe objects (segments, windows,
aligned boxes) are immutable after construction and all operations here are
pure functions of their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

UNIT_NORM_TOL = 1e-12


def _vector(values, name):
    arr = np.atleast_1d(np.asarray(values, dtype=float)).copy()
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a one-dimensional vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must have finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Point:
    """A point in R^n with finite coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _vector(self.coords, "coords"))

    @property
    def dim(self) -> int:
        return self.coords.size

    def __repr__(self):
        return f"Point({tuple(self.coords)})"


def point_coords(p) -> np.ndarray:
    """Coordinates of ``p``, which may be a Point or any coordinate sequence."""
    if isinstance(p, Point):
        return p.coords
    return np.atleast_1d(np.asarray(p, dtype=float))


@dataclass(frozen=True, eq=False)
class Segment:
    """The directed segment {base + t*direction : 0 <= t <= length}.

    The direction is normalized on construction, so its Euclidean norm is 1
    to within floating-point accuracy.
    """

    base: np.ndarray
    direction: np.ndarray
    length: float

    def __post_init__(self):
        base = _vector(self.base, "base")
        direction = np.atleast_1d(np.asarray(self.direction, dtype=float))
        if direction.shape != base.shape:
            raise ValueError("base and direction must have the same dimension")
        norm = float(np.linalg.norm(direction))
        if not np.isfinite(norm) or norm <= 0.0:
            raise ValueError("direction must be a nonzero finite vector")
        direction = direction / norm
        direction.setflags(write=False)
        length = float(self.length)
        if not (length >= 0.0) or not np.isfinite(length):
            raise ValueError("length must be a finite nonnegative real")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "length", length)

    @property
    def dim(self) -> int:
        return self.base.size

    def point_at(self, t: float) -> np.ndarray:
        return self.base + t * self.direction

    def translated(self, offset) -> "Segment":
        return Segment(self.base + np.asarray(offset, dtype=float),
                       self.direction, self.length)

    def __repr__(self):
        return (f"Segment(base={tuple(self.base)}, "
                f"direction={tuple(self.direction)}, length={self.length})")


@dataclass(frozen=True, eq=False)
class Window:
    """Half-open axis-aligned region [lo, hi) used to truncate infinite sets."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _vector(self.lo, "lo")
        hi = _vector(self.hi, "hi")
        if lo.shape != hi.shape:
            raise ValueError("lo and hi must have the same dimension")
        if not np.all(lo < hi):
            raise ValueError("window must satisfy lo[i] < hi[i] on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, radius: float, dim: int) -> "Window":
        """The centered cube [-radius, radius)^dim."""
        r = float(radius)
        return cls(np.full(dim, -r), np.full(dim, r))

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def extent(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def volume(self) -> float:
        return float(np.prod(self.extent))

    def contains(self, points) -> np.ndarray:
        """Half-open membership mask for an (N, dim) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all((pts >= self.lo) & (pts < self.hi), axis=1)

    def corners(self) -> np.ndarray:
        """All 2^dim corners as an array of shape (2^dim, dim)."""
        choices = np.stack([self.lo, self.hi])
        idx = np.indices((2,) * self.dim).reshape(self.dim, -1).T
        return choices[idx, np.arange(self.dim)]

    def __repr__(self):
        return f"Window(lo={tuple(self.lo)}, hi={tuple(self.hi)})"


@dataclass(frozen=True, eq=False)
class AlignedBox:
    """A closed aligned box prod_i [a_i, b_i]."""

    intervals: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.intervals, dtype=float).copy()
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("intervals must be an array of (a_i, b_i) pairs")
        if not np.all(np.isfinite(arr)):
            raise ValueError("interval endpoints must be finite")
        if not np.all(arr[:, 0] <= arr[:, 1]):
            raise ValueError("each interval needs a_i <= b_i")
        arr.setflags(write=False)
        object.__setattr__(self, "intervals", arr)

    @classmethod
    def from_bounds(cls, lo, hi) -> "AlignedBox":
        return cls(np.stack([np.atleast_1d(np.asarray(lo, dtype=float)),
                             np.atleast_1d(np.asarray(hi, dtype=float))], axis=1))

    @property
    def dim(self) -> int:
        return self.intervals.shape[0]

    @property
    def lo(self) -> np.ndarray:
        return self.intervals[:, 0]

    @property
    def hi(self) -> np.ndarray:
        return self.intervals[:, 1]

    @property
    def volume(self) -> float:
        return float(np.prod(self.intervals[:, 1] - self.intervals[:, 0]))

    def contains(self, points, strict: bool = False) -> np.ndarray:
        """Closed membership mask (open-interior membership when strict)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if strict:
            return np.all((pts > self.lo) & (pts < self.hi), axis=1)
        return np.all((pts >= self.lo) & (pts <= self.hi), axis=1)

    def __repr__(self):
        pairs = ", ".join(f"[{a}, {b}]" for a, b in self.intervals)
        return f"AlignedBox({pairs})"


def supnorm_segment_distances(points, segment: Segment) -> np.ndarray:
    """Exact min over t in [0, L] of ||base + t*direction - p||_inf, per point.

    The map t -> ||base + t*direction - p||_inf is convex piecewise linear;
    its minimum over [0, L] is attained at an endpoint, at a root of one of
    the coordinate terms |a_i + t*alpha_i|, or at a crossing of two terms,
    so evaluating those candidate parameters is exact.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != segment.dim:
        raise ValueError("point dimension does not match segment dimension")
    alpha = segment.direction
    a = segment.base[None, :] - pts
    d = alpha.size
    candidates = [np.zeros(pts.shape[0]), np.full(pts.shape[0], segment.length)]
    # Divisions by near-zero components may overflow to +-inf; such
    # candidates clip to the endpoints below, which are already listed.
    with np.errstate(over="ignore"):
        for i in range(d):
            if alpha[i] != 0.0:
                candidates.append(-a[:, i] / alpha[i])
        for i in range(d):
            for j in range(i + 1, d):
                diff = alpha[j] - alpha[i]
                if diff != 0.0:
                    candidates.append((a[:, i] - a[:, j]) / diff)
                total = alpha[i] + alpha[j]
                if total != 0.0:
                    candidates.append(-(a[:, i] + a[:, j]) / total)
    ts = np.clip(np.stack(candidates, axis=1), 0.0, segment.length)
    residuals = a[:, None, :] + ts[:, :, None] * alpha[None, None, :]
    return np.abs(residuals).max(axis=2).min(axis=1)


def supnorm_point_segment_distance(p, segment: Segment) -> float:
    """Exact sup-norm distance from a point to a segment."""
    coords = point_coords(p)
    if coords.size != segment.dim:
        raise ValueError("point dimension does not match segment dimension")
    return float(supnorm_segment_distances(coords[None, :], segment)[0])


def tube_bounding_window(segment: Segment, eps: float) -> Window:
    """Smallest window containing every point within sup-norm eps of the segment."""
    if not (eps > 0.0):
        raise ValueError("eps must be positive")
    ends = np.stack([segment.base, segment.point_at(segment.length)])
    return Window(ends.min(axis=0) - eps, ends.max(axis=0) + eps)


def _primitive_directions_2d(max_index: int) -> np.ndarray:
    """Unit vectors along (p, q) with |p|, |q| <= max_index and gcd(p, q) = 1."""
    dirs = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    for p in range(-max_index, max_index + 1):
        for q in range(-max_index, max_index + 1):
            if p == 0 or q == 0 or math.gcd(abs(p), abs(q)) != 1:
                continue
            norm = math.hypot(p, q)
            dirs.append((p / norm, q / norm))
    return np.asarray(dirs)


def _stratified_directions(dim: int) -> np.ndarray:
    if dim == 2:
        return _primitive_directions_2d(8)
    axes = np.concatenate([np.eye(dim), -np.eye(dim)])
    return axes


def sample_segments(window: Window, length: float, count: int, seed: int):
    """Deterministic probe segments with bases in the window.

    Half of the probes pair a stratified direction grid (all axis directions
    and, in dimension 2, every rational slope p/q with |p|, |q| <= 8) with a
    low-discrepancy grid of base points; the rest use seeded uniform random
    directions and bases.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    dim = window.dim
    rng = np.random.default_rng(seed)
    n_strat = count // 2
    segments = []
    if n_strat:
        directions = _stratified_directions(dim)
        grid = qmc.Halton(d=dim, scramble=False).random(n_strat)
        bases = window.lo + grid * window.extent
        for i in range(n_strat):
            segments.append(Segment(bases[i], directions[i % len(directions)], length))
    for _ in range(count - n_strat):
        vec = rng.standard_normal(dim)
        while np.linalg.norm(vec) < 1e-9:
            vec = rng.standard_normal(dim)
        base = window.lo + rng.random(dim) * window.extent
        segments.append(Segment(base, vec, length))
    return segments
