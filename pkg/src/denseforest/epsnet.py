"""Construction and verification of epsilon-nets for boxes in the unit cube."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .generators import D2Sheet
from .geometry import AlignedBox, Window

MAX_NET_SIZE = 10 ** 7
ASPECT_CAP = 2.0 ** 10


@dataclass(frozen=True, eq=False)
class Net:
    """A finite point set in [0,1]^d built to meet every box of volume epsilon."""

    points: np.ndarray
    epsilon: float
    method: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError("net points must form an (N, d) array")
        if pts.size and (np.any(pts < -1e-12) or np.any(pts > 1.0 + 1e-12)):
            raise ValueError("net points must lie in the unit cube")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.method not in ("HausslerWelzl", "D2Aligned"):
            raise ValueError(f"unknown net method: {self.method!r}")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class NetReport:
    """Outcome of probing a net with boxes of one fixed volume."""

    boxes_tested: int
    hit_fraction: float
    worst_missed_box: object = None

    def to_json(self) -> dict:
        worst = None
        if self.worst_missed_box is not None:
            box = self.worst_missed_box
            if hasattr(box, "angle"):
                worst = {"angle": box.angle, "intervals": box.box.intervals.tolist()}
            else:
                worst = {"intervals": box.intervals.tolist()}
        return {"boxes_tested": self.boxes_tested,
                "hit_fraction": self.hit_fraction,
                "worst_missed_box": worst}


def hw_net(eps: float, d: int, C: float, seed: int) -> Net:
    """Uniform random net of ceil(C * (1/eps) * ln(1/eps)) points in [0,1]^d."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if C <= 0:
        raise ValueError("C must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    size = math.ceil(C * (1.0 / eps) * math.log(1.0 / eps))
    if size > MAX_NET_SIZE:
        raise ResourceLimitError(f"net size {size} exceeds the limit {MAX_NET_SIZE}")
    pts = np.random.default_rng(seed).random((size, d))
    return Net(points=pts, epsilon=float(eps), method="HausslerWelzl")


def d2_aligned_net(eps: float) -> Net:
    """Scaled bit-reversal net (sqrt(eps) * D2) restricted to the closed unit square.

    Any aligned box of volume eps inside [0,1]^2, rescaled by 1/sqrt(eps),
    has volume 1 and therefore meets the bit-reversal set; scaling back shows
    the net meets the original box.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    scale = math.sqrt(eps)
    reach = 1.0 / scale
    raw = D2Sheet().enumerate(Window([-1e-9, -1e-9], [reach + 1e-9, reach + 1e-9]))
    scaled = raw * scale
    keep = np.all((scaled >= 0.0) & (scaled <= 1.0), axis=1)
    return Net(points=scaled[keep], epsilon=float(eps), method="D2Aligned")


def _feasible_aspect(volume: float, rng) -> float:
    lo = max(1.0 / ASPECT_CAP, volume)
    hi = min(ASPECT_CAP, 1.0 / volume)
    if hi < lo:
        raise ValueError("volume admits no box within the aspect cap")
    if hi == lo:
        return lo
    return float(np.exp(rng.uniform(math.log(lo), math.log(hi))))


def sample_aligned_box(volume: float, rng) -> AlignedBox:
    """One aligned box of exactly `volume` inside [0,1]^2.

    Aspect is log-uniform over the ratios that fit in the unit square and
    the center is uniform over the placements keeping the box unclipped.
    """
    ratio = _feasible_aspect(volume, rng)
    w = math.sqrt(volume * ratio)
    h = math.sqrt(volume / ratio)
    cx = rng.uniform(w / 2.0, 1.0 - w / 2.0) if w < 1.0 else 0.5
    cy = rng.uniform(h / 2.0, 1.0 - h / 2.0) if h < 1.0 else 0.5
    return AlignedBox.from_bounds([cx - w / 2.0, cy - h / 2.0],
                                  [cx + w / 2.0, cy + h / 2.0])


class _SampledRotatedBox:
    """A rectangle of fixed area rotated by `angle` about its center."""

    def __init__(self, center, half_sides, angle):
        self.center = np.asarray(center, dtype=float)
        self.half_sides = np.asarray(half_sides, dtype=float)
        self.angle = float(angle)
        self.box = AlignedBox.from_bounds(-self.half_sides, self.half_sides)

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - self.center
        c, s = math.cos(self.angle), math.sin(self.angle)
        rot = np.array([[c, -s], [s, c]])
        return self.box.contains(pts @ rot)


def sample_rotated_box(volume: float, rng, max_attempts: int = 10000):
    """One rotated rectangle of exactly `volume` inside [0,1]^2."""
    for _ in range(max_attempts):
        angle = float(rng.uniform(0.0, math.pi))
        ratio = _feasible_aspect(volume, rng)
        w = math.sqrt(volume * ratio)
        h = math.sqrt(volume / ratio)
        c, s = abs(math.cos(angle)), abs(math.sin(angle))
        ex = (w * c + h * s) / 2.0
        ey = (w * s + h * c) / 2.0
        if 2.0 * ex > 1.0 or 2.0 * ey > 1.0:
            continue
        cx = rng.uniform(ex, 1.0 - ex) if ex < 0.5 else 0.5
        cy = rng.uniform(ey, 1.0 - ey) if ey < 0.5 else 0.5
        return _SampledRotatedBox([cx, cy], [w / 2.0, h / 2.0], angle)
    raise ValueError("could not fit a rotated box of the requested volume")


def verify_net(net: Net, box_sampler: str, volume: float, trials: int,
               seed: int) -> NetReport:
    """Fraction of sampled volume-`volume` boxes containing a net point.

    box_sampler is "aligned" or "rotated"; boxes are closed and always lie
    inside the unit square.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0.0 < volume <= 1.0:
        raise ValueError("volume must lie in (0, 1]")
    if box_sampler not in ("aligned", "rotated"):
        raise ValueError("box_sampler must be 'aligned' or 'rotated'")
    if net.dim != 2:
        raise ValueError("net verification is implemented for dimension 2")
    rng = np.random.default_rng(seed)
    hits = 0
    worst = None
    for _ in range(trials):
        if box_sampler == "aligned":
            box = sample_aligned_box(volume, rng)
        else:
            box = sample_rotated_box(volume, rng)
        if net.size and bool(np.any(box.contains(net.points))):
            hits += 1
        elif worst is None:
            worst = box
    return NetReport(boxes_tested=int(trials),
                     hit_fraction=hits / trials,
                     worst_missed_box=worst)


def slab_lower_bound(points, dim: int | None = None) -> AlignedBox:
    """A point-free axis slab of volume at least 1/(k+1) for k input points.

    Sorting each coordinate (with 0/1 sentinels) splits the cube into k+1
    slabs along that axis; the best axis's largest gap is returned.  The
    slab is open in its interior, so boundary points do not intersect it.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        if dim is None:
            raise ValueError("dim is required for an empty point list")
        pts = np.empty((0, dim))
    if pts.ndim == 1:
        pts = pts[:, None]
    d = pts.shape[1]
    if dim is not None and d != dim:
        raise ValueError("points do not match the requested dimension")
    best_axis, best_gap, best_lo = 0, -1.0, 0.0
    for axis in range(d):
        vals = np.concatenate([[0.0], np.sort(pts[:, axis]), [1.0]])
        gaps = np.diff(vals)
        j = int(np.argmax(gaps))
        if gaps[j] > best_gap:
            best_axis, best_gap, best_lo = axis, float(gaps[j]), float(vals[j])
    lo = np.zeros(d)
    hi = np.ones(d)
    lo[best_axis] = best_lo
    hi[best_axis] = best_lo + best_gap
    return AlignedBox.from_bounds(lo, hi)
