"""Points, axis-aligned boxes, polylines and the metric predicates the rest
of the package is built on.

Everything here is immutable and pure.  All lengths are in dimensionless
model units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, slots=True)
class Point3:
    """A point of 3-space with finite coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"non-finite coordinates: {(self.x, self.y, self.z)}")

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Point3":
        return Point3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Point3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(a: np.ndarray) -> "Point3":
        return Point3(float(a[0]), float(a[1]), float(a[2]))


def lerp(a: Point3, b: Point3, t: float) -> Point3:
    return Point3(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t)


def distance(a: Point3, b: Point3) -> float:
    """Euclidean distance between two points."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


@dataclass(frozen=True, slots=True)
class Box:
    """A closed axis-aligned box given by its min and max corners."""

    lo: Point3
    hi: Point3

    def __post_init__(self) -> None:
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y or self.lo.z > self.hi.z:
            raise ValueError(f"box min corner exceeds max corner: {self.lo} > {self.hi}")

    @staticmethod
    def from_center(center: Point3, half_extents: Point3) -> "Box":
        return Box(center - half_extents, center + half_extents)

    @staticmethod
    def cube(center: Point3, side: float) -> "Box":
        h = side / 2.0
        return Box.from_center(center, Point3(h, h, h))

    @property
    def center(self) -> Point3:
        return lerp(self.lo, self.hi, 0.5)

    @property
    def half_extents(self) -> Point3:
        return (self.hi - self.lo).scaled(0.5)

    def diameter(self) -> float:
        return distance(self.lo, self.hi)

    def corners(self) -> list[Point3]:
        lo, hi = self.lo, self.hi
        return [
            Point3(x, y, z)
            for x in (lo.x, hi.x)
            for y in (lo.y, hi.y)
            for z in (lo.z, hi.z)
        ]

    def corner_array(self) -> np.ndarray:
        return np.array([c.as_array() for c in self.corners()])

    def contains(self, p: Point3, strict: bool = False) -> bool:
        if strict:
            return (
                self.lo.x < p.x < self.hi.x
                and self.lo.y < p.y < self.hi.y
                and self.lo.z < p.z < self.hi.z
            )
        return (
            self.lo.x <= p.x <= self.hi.x
            and self.lo.y <= p.y <= self.hi.y
            and self.lo.z <= p.z <= self.hi.z
        )

    def contains_array(self, pts: np.ndarray, strict: bool = False) -> np.ndarray:
        lo = self.lo.as_array()
        hi = self.hi.as_array()
        if strict:
            return np.all((pts > lo) & (pts < hi), axis=-1)
        return np.all((pts >= lo) & (pts <= hi), axis=-1)

    def contains_box(self, other: "Box", strict: bool = False) -> bool:
        return self.contains(other.lo, strict) and self.contains(other.hi, strict)

    def intersects(self, other: "Box") -> bool:
        return (
            self.lo.x <= other.hi.x
            and other.lo.x <= self.hi.x
            and self.lo.y <= other.hi.y
            and other.lo.y <= self.hi.y
            and self.lo.z <= other.hi.z
            and other.lo.z <= self.hi.z
        )

    def scaled_about_center(self, factor: float) -> "Box":
        return Box.from_center(self.center, self.half_extents.scaled(factor))

    def wall_distance(self, p: Point3) -> float:
        """Distance from an interior point to the nearest face plane."""
        return min(
            p.x - self.lo.x,
            self.hi.x - p.x,
            p.y - self.lo.y,
            self.hi.y - p.y,
            p.z - self.lo.z,
            self.hi.z - p.z,
        )

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        lo = self.lo.as_array()
        hi = self.hi.as_array()
        return lo + rng.random((n, 3)) * (hi - lo)


def box_diameter(b: Box) -> float:
    """Corner-to-corner diameter of a box."""
    return b.diameter()


def union_diameter(boxes: Sequence[Box]) -> float:
    """Diameter of the union of a non-empty family of boxes.

    The supremum of pairwise distances over a union of boxes is attained at
    box corners, so the exact value is the max distance over all corner
    pairs.
    """
    if not boxes:
        raise ValueError("union_diameter of empty box list")
    corners = np.concatenate([b.corner_array() for b in boxes])
    diff = corners[:, None, :] - corners[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).max())


def _segment_closest_points(
    p1: np.ndarray, p2: np.ndarray, q1: np.ndarray, q2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Closest points between segments p1p2 and q1q2 (scalar version)."""
    d1 = p2 - p1
    d2 = q2 - q1
    r = p1 - q1
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    eps = 1e-300
    if a <= eps and e <= eps:
        return p1, q1
    if a <= eps:
        t = min(1.0, max(0.0, f / e))
        return p1, q1 + t * d2
    c = float(d1 @ r)
    if e <= eps:
        s = min(1.0, max(0.0, -c / a))
        return p1 + s * d1, q1
    b = float(d1 @ d2)
    denom = a * e - b * b
    if denom > 1e-14 * a * e:
        s = min(1.0, max(0.0, (b * f - c * e) / denom))
    else:
        s = 0.0  # near-parallel: pick an endpoint and clamp the other leg
    t = (b * s + f) / e
    if t < 0.0:
        t = 0.0
        s = min(1.0, max(0.0, -c / a))
    elif t > 1.0:
        t = 1.0
        s = min(1.0, max(0.0, (b - c) / a))
    return p1 + s * d1, q1 + t * d2


def segment_distance(p1: Point3, p2: Point3, q1: Point3, q2: Point3) -> tuple[float, Point3]:
    """Minimal distance between two segments and the midpoint of the
    closest-point pair."""
    cp, cq = _segment_closest_points(
        p1.as_array(), p2.as_array(), q1.as_array(), q2.as_array()
    )
    mid = Point3.from_array((cp + cq) / 2.0)
    return float(np.linalg.norm(cp - cq)), mid


def segments_intersect(
    p1: Point3, p2: Point3, q1: Point3, q2: Point3, tol: float
) -> tuple[bool, Point3 | None]:
    """True iff the minimal distance between the segments is below tol.

    The witness is the midpoint of the closest-point pair.
    """
    d, mid = segment_distance(p1, p2, q1, q2)
    if d < tol:
        return True, mid
    return False, None


@dataclass(frozen=True)
class PLCurve:
    """A finite polyline in 3-space, open arc or closed loop."""

    vertices: tuple[Point3, ...]
    closed: bool = False

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if self.closed and n < 3:
            raise ValueError("closed curve needs at least 3 vertices")
        if not self.closed and n < 2:
            raise ValueError("open curve needs at least 2 vertices")
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")
        if self.closed and self.vertices[0] == self.vertices[-1]:
            raise ValueError("closed curve must not repeat its first vertex")

    @property
    def n_segments(self) -> int:
        return len(self.vertices) if self.closed else len(self.vertices) - 1

    def segment(self, i: int) -> tuple[Point3, Point3]:
        n = len(self.vertices)
        return self.vertices[i], self.vertices[(i + 1) % n]

    def as_array(self) -> np.ndarray:
        return np.array([v.as_array() for v in self.vertices])

    def segment_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = self.as_array()
        if self.closed:
            a = pts
            b = np.roll(pts, -1, axis=0)
        else:
            a = pts[:-1]
            b = pts[1:]
        return a, b

    def densified(self, max_seg_len: float) -> "PLCurve":
        """Insert evenly spaced vertices so no segment exceeds max_seg_len."""
        if max_seg_len <= 0:
            raise ValueError("max_seg_len must be positive")
        out: list[Point3] = []
        a_arr, b_arr = self.segment_arrays()
        for a, b in zip(a_arr, b_arr):
            length = float(np.linalg.norm(b - a))
            k = max(1, int(math.ceil(length / max_seg_len)))
            for j in range(k):
                out.append(Point3.from_array(a + (b - a) * (j / k)))
        if not self.closed:
            out.append(self.vertices[-1])
        return PLCurve(tuple(out), closed=self.closed)

    def bounding_box(self, margin: float = 0.0) -> Box:
        pts = self.as_array()
        lo = pts.min(axis=0) - margin
        hi = pts.max(axis=0) + margin
        return Box(Point3.from_array(lo), Point3.from_array(hi))


def _segment_pair_distances(
    a: np.ndarray, b: np.ndarray, idx_i: np.ndarray, idx_j: np.ndarray
) -> np.ndarray:
    """Vectorized segment-segment distances for index pairs (i, j)."""
    p1 = a[idx_i]
    p2 = b[idx_i]
    q1 = a[idx_j]
    q2 = b[idx_j]
    d1 = p2 - p1
    d2 = q2 - q1
    r = p1 - q1
    A = (d1 * d1).sum(-1)
    E = (d2 * d2).sum(-1)
    B = (d1 * d2).sum(-1)
    C = (d1 * r).sum(-1)
    F = (d2 * r).sum(-1)
    denom = A * E - B * B
    safe = denom > 1e-14 * np.maximum(A * E, 1e-300)
    s = np.where(safe, (B * F - C * E) / np.where(safe, denom, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    t = (B * s + F) / np.where(E > 0, E, 1.0)
    tc = np.clip(t, 0.0, 1.0)
    # re-clamp s where t was clamped
    s = np.where(tc != t, np.clip((B * tc - C) / np.where(A > 0, A, 1.0), 0.0, 1.0), s)
    cp = p1 + s[:, None] * d1
    cq = q1 + tc[:, None] * d2
    return np.sqrt(((cp - cq) ** 2).sum(-1))


def multiscale_close_pairs(
    mids: np.ndarray, half: np.ndarray, margin: float
) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i < j) of segments whose hulls can come within margin.

    Segments are bucketed by log2 half-length class (curves here are
    strongly multiscale, so a single KD radius degenerates to all pairs)
    and each class pair is searched with radius = the sum of the classes'
    maximum half lengths plus the margin.
    """
    from scipy.spatial import cKDTree

    cls = np.floor(np.log2(np.maximum(half, 1e-300))).astype(int)
    classes = sorted(set(cls.tolist()))
    groups = {c: np.nonzero(cls == c)[0] for c in classes}
    trees = {c: cKDTree(mids[groups[c]]) for c in classes}
    pair_list = []
    for i1, c1 in enumerate(classes):
        g1 = groups[c1]
        pairs = trees[c1].query_pairs(2.0 ** (c1 + 2) + margin, output_type="ndarray")
        if len(pairs):
            pair_list.append(np.stack([g1[pairs[:, 0]], g1[pairs[:, 1]]], axis=1))
        for c2 in classes[i1 + 1 :]:
            g2 = groups[c2]
            r = 2.0 ** (c1 + 1) + 2.0 ** (c2 + 1) + margin
            hits = trees[c1].query_ball_tree(trees[c2], r)
            rows = [
                np.stack([np.full(len(h), g1[k]), g2[h]], axis=1)
                for k, h in enumerate(hits)
                if h
            ]
            if rows:
                pair_list.append(np.concatenate(rows))
    if not pair_list:
        empty = np.empty(0, dtype=int)
        return empty, empty
    pairs = np.concatenate(pair_list)
    pairs = np.unique(np.sort(pairs, axis=1), axis=0)
    return pairs[:, 0], pairs[:, 1]


def curve_is_simple(curve: PLCurve, tol: float) -> bool:
    """True iff no pair of non-adjacent segments comes within tol."""
    a, b = curve.segment_arrays()
    n = curve.n_segments
    if n < 3:
        return True
    if n <= 1500:
        ii, jj = np.triu_indices(n, k=2)
        if curve.closed:
            keep = ~((ii == 0) & (jj == n - 1))
            ii, jj = ii[keep], jj[keep]
    else:
        # spatial prefilter: only segment pairs whose midpoints are close
        # enough to possibly come within tol need the exact test
        mids = (a + b) / 2.0
        half = np.sqrt(((b - a) ** 2).sum(-1)) / 2.0
        ii, jj = multiscale_close_pairs(mids, half, tol)
        if len(ii) == 0:
            return True
        adj = (jj - ii) <= 1
        if curve.closed:
            adj |= (ii == 0) & (jj == n - 1)
        keep = ~adj
        ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return True
    chunk = 500_000
    for start in range(0, len(ii), chunk):
        d = _segment_pair_distances(a, b, ii[start : start + chunk], jj[start : start + chunk])
        if (d < tol).any():
            return False
    return True


# -- curve file format -------------------------------------------------------
#
# line 1: "open N" or "closed N"
# then N lines "x y z" (decimal literals; written with 17 significant digits)


def write_curve(curve: PLCurve, path) -> None:
    kind = "closed" if curve.closed else "open"
    lines = [f"{kind} {len(curve.vertices)}"]
    for v in curve.vertices:
        lines.append(f"{v.x:.17g} {v.y:.17g} {v.z:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_curve(path) -> PLCurve:
    with open(path) as fh:
        tokens = fh.read().split("\n")
    header = tokens[0].split()
    if len(header) != 2 or header[0] not in ("open", "closed"):
        raise ValueError(f"bad curve file header: {tokens[0]!r}")
    n = int(header[1])
    verts = []
    for line in tokens[1 : 1 + n]:
        x, y, z = (float(t) for t in line.split())
        verts.append(Point3(x, y, z))
    if len(verts) != n:
        raise ValueError(f"expected {n} vertices, found {len(verts)}")
    return PLCurve(tuple(verts), closed=header[0] == "closed")
