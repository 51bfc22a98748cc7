"""From sensor shapes in the plane to a zone model.

Zones are found by sampling: every candidate point is mapped to the set of
shapes whose open interior contains it, and each distinct non-empty set is
a zone.  Candidates are

* one deep point per shape (disk centre, polygon centroid),
* every pairwise boundary crossing, pushed by ``epsilon`` into each of the
  four quadrants formed by the two boundary normals,
* points sampled along every boundary, pushed ``epsilon`` inwards and outwards,
* a regular grid of spacing ``resolution`` over the bounding box.

Every face of an arrangement of convex boundaries either touches a crossing
or is bounded by whole boundaries, so the first three families find thin
faces the grid would miss as long as ``epsilon`` is small compared with
them.  Nearly tangent boundaries make the result depend on ``epsilon``; a
:class:`TangencyWarning` is issued for them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import StaticModel

BOUNDARY_SAMPLES = 48


class GeometryError(ValueError):
    pass


class TangencyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise GeometryError(f"disk radius must be positive, got {self.r}")

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d2 = (pts[:, 0] - self.cx) ** 2 + (pts[:, 1] - self.cy) ** 2
        return d2 < self.r * self.r

    def deep_point(self) -> tuple[float, float]:
        return (self.cx, self.cy)

    def bbox(self) -> tuple[float, float, float, float]:
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)

    def boundary_samples(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        ang = 2 * np.pi * np.arange(n) / n
        normals = np.column_stack([np.cos(ang), np.sin(ang)])
        return np.array([self.cx, self.cy]) + self.r * normals, normals


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise GeometryError("a polygon needs at least three vertices")
        v = np.array(verts)
        e = np.roll(v, -1, axis=0) - v
        turns = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if not np.all(turns > 0):
            raise GeometryError("polygon must be strictly convex with counter-clockwise vertices")

    @property
    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = np.array(self.vertices)
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, pts: np.ndarray) -> np.ndarray:
        inside = np.ones(len(pts), dtype=bool)
        for a, b in self.edges:
            d = b - a
            inside &= d[0] * (pts[:, 1] - a[1]) - d[1] * (pts[:, 0] - a[0]) > 0
        return inside

    def deep_point(self) -> tuple[float, float]:
        v = np.array(self.vertices)
        return tuple(v.mean(axis=0))

    def bbox(self) -> tuple[float, float, float, float]:
        v = np.array(self.vertices)
        return (*v.min(axis=0), *v.max(axis=0))

    def min_edge(self) -> float:
        return min(float(np.linalg.norm(b - a)) for a, b in self.edges)

    def boundary_samples(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        pts, normals = [], []
        per_edge = max(1, n // len(self.vertices))
        for a, b in self.edges:
            d = b - a
            normal = np.array([d[1], -d[0]]) / np.linalg.norm(d)
            for k in range(per_edge):
                pts.append(a + d * (k + 0.5) / per_edge)
                normals.append(normal)
        v = np.array(self.vertices)
        centre = v.mean(axis=0)
        for p in v:
            out = (p - centre) / np.linalg.norm(p - centre)
            pts.append(p)
            normals.append(out)
        return np.array(pts), np.array(normals)


Shape = Disk | ConvexPolygon


@dataclass(frozen=True)
class GeomSensor:
    id: str
    shape: Shape


@dataclass(frozen=True)
class Scene:
    sensors: tuple[GeomSensor, ...]
    targets: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        object.__setattr__(self, "targets", tuple((float(x), float(y)) for x, y in self.targets))
        ids = [s.id for s in self.sensors]
        if len(set(ids)) != len(ids):
            raise GeometryError("sensor ids must be unique")
        if any(not isinstance(i, str) or not i for i in ids):
            raise GeometryError("sensor ids must be non-empty strings")

    def bbox(self) -> tuple[float, float, float, float]:
        boxes = np.array([s.shape.bbox() for s in self.sensors])
        return (*boxes[:, :2].min(axis=0), *boxes[:, 2:].max(axis=0))

    def min_feature(self) -> float:
        sizes = []
        for s in self.sensors:
            sizes.append(s.shape.r if isinstance(s.shape, Disk) else s.shape.min_edge())
        return min(sizes)


# -- boundary crossings -------------------------------------------------------------


def _circle_circle(a: Disk, b: Disk):
    d = math.hypot(b.cx - a.cx, b.cy - a.cy)
    if d == 0 or d > a.r + b.r or d < abs(a.r - b.r):
        return []
    along = (a.r * a.r - b.r * b.r + d * d) / (2 * d)
    h = math.sqrt(max(a.r * a.r - along * along, 0.0))
    ux, uy = (b.cx - a.cx) / d, (b.cy - a.cy) / d
    mx, my = a.cx + along * ux, a.cy + along * uy
    pts = [(mx - h * uy, my + h * ux), (mx + h * uy, my - h * ux)]
    out = []
    for p in pts:
        na = np.array([p[0] - a.cx, p[1] - a.cy]) / a.r
        nb = np.array([p[0] - b.cx, p[1] - b.cy]) / b.r
        out.append((np.array(p), na, nb))
    return out


def _circle_segment(c: Disk, p0: np.ndarray, p1: np.ndarray):
    d = p1 - p0
    f = p0 - np.array([c.cx, c.cy])
    qa, qb, qc = d @ d, 2 * (f @ d), f @ f - c.r * c.r
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return []
    root = math.sqrt(disc)
    normal = np.array([d[1], -d[0]]) / math.sqrt(qa)
    out = []
    for t in {(-qb - root) / (2 * qa), (-qb + root) / (2 * qa)}:
        if 0 <= t <= 1:
            p = p0 + t * d
            out.append((p, (p - np.array([c.cx, c.cy])) / c.r, normal))
    return out


def _segment_segment(p0, p1, q0, q1):
    r, s = p1 - p0, q1 - q0
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0:
        return []
    qp = q0 - p0
    t = (qp[0] * s[1] - qp[1] * s[0]) / denom
    u = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        p = p0 + t * r
        return [(p, np.array([r[1], -r[0]]) / np.linalg.norm(r), np.array([s[1], -s[0]]) / np.linalg.norm(s))]
    return []


def _crossings(a: Shape, b: Shape):
    if isinstance(a, Disk) and isinstance(b, Disk):
        return _circle_circle(a, b)
    if isinstance(a, ConvexPolygon) and isinstance(b, Disk):
        return [(p, nb, na) for p, na, nb in _crossings(b, a)]
    if isinstance(a, Disk):
        return [x for p0, p1 in b.edges for x in _circle_segment(a, p0, p1)]
    return [x for p0, p1 in a.edges for q0, q1 in b.edges for x in _segment_segment(p0, p1, q0, q1)]


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    t = np.clip((p - a) @ d / (d @ d), 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * d)))


def _near_tangent(a: Shape, b: Shape, eps: float) -> bool:
    if isinstance(a, Disk) and isinstance(b, Disk):
        d = math.hypot(b.cx - a.cx, b.cy - a.cy)
        return abs(d - (a.r + b.r)) < eps or (d > 0 and abs(d - abs(a.r - b.r)) < eps) or (d < eps and abs(a.r - b.r) < eps)
    if isinstance(a, ConvexPolygon) and isinstance(b, Disk):
        a, b = b, a
    if isinstance(a, Disk):
        centre = np.array([a.cx, a.cy])
        return any(abs(_segment_distance(centre, p0, p1) - a.r) < eps for p0, p1 in b.edges)
    for v in a.vertices:
        if any(abs(_segment_distance(np.array(v), q0, q1)) < eps for q0, q1 in b.edges):
            return True
    for v in b.vertices:
        if any(abs(_segment_distance(np.array(v), p0, p1)) < eps for p0, p1 in a.edges):
            return True
    return False


# -- zone discovery ------------------------------------------------------------------


def default_resolution(scene: Scene) -> float:
    x0, y0, x1, y1 = scene.bbox()
    return 0.05 * math.hypot(x1 - x0, y1 - y0)


def default_epsilon(scene: Scene) -> float:
    radii = [s.shape.r for s in scene.sensors if isinstance(s.shape, Disk)]
    return 1e-4 * (min(radii) if radii else scene.min_feature())


def candidate_points(scene: Scene, resolution: float, epsilon: float) -> np.ndarray:
    shapes = [s.shape for s in scene.sensors]
    chunks = [np.array([s.deep_point() for s in shapes], dtype=float)]
    signs = np.array([(1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            if _near_tangent(shapes[i], shapes[j], epsilon):
                warnings.warn(
                    f"boundaries of {scene.sensors[i].id} and {scene.sensors[j].id} pass within "
                    f"epsilon={epsilon:g}; zones near their contact may depend on epsilon",
                    TangencyWarning,
                    stacklevel=3,
                )
            for p, n1, n2 in _crossings(shapes[i], shapes[j]):
                chunks.append(p + epsilon * (signs[:, :1] * n1 + signs[:, 1:] * n2))
    for s in shapes:
        pts, normals = s.boundary_samples(BOUNDARY_SAMPLES)
        chunks.append(pts + epsilon * normals)
        chunks.append(pts - epsilon * normals)
    x0, y0, x1, y1 = scene.bbox()
    nx = max(1, math.ceil((x1 - x0) / resolution))
    ny = max(1, math.ceil((y1 - y0) / resolution))
    gx = x0 + np.arange(nx + 1) * resolution
    gy = y0 + np.arange(ny + 1) * resolution
    xx, yy = np.meshgrid(gx, gy)
    chunks.append(np.column_stack([xx.ravel(), yy.ravel()]))
    return np.concatenate(chunks)


def coverage_signatures(scene: Scene, pts: np.ndarray) -> set[frozenset]:
    """Distinct non-empty sets of sensors strictly covering some point of ``pts``."""
    ids = [s.id for s in scene.sensors]
    cover = np.array([s.shape.contains(pts) for s in scene.sensors])
    columns = np.unique(cover.T, axis=0)
    return {frozenset(ids[i] for i in np.flatnonzero(col)) for col in columns if col.any()}


def discover_zones(scene: Scene, resolution: float | None = None, epsilon: float | None = None) -> set[frozenset]:
    if not scene.sensors:
        return set()
    resolution = default_resolution(scene) if resolution is None else resolution
    epsilon = default_epsilon(scene) if epsilon is None else epsilon
    if not resolution > 0 or not epsilon > 0:
        raise GeometryError("resolution and epsilon must be positive")
    limit = 0.01 * scene.min_feature()
    if epsilon >= limit:
        raise GeometryError(f"epsilon={epsilon:g} is too coarse; it must be below {limit:g}")
    return coverage_signatures(scene, candidate_points(scene, resolution, epsilon))


def extract_topology(scene: Scene, resolution: float | None = None, epsilon: float | None = None) -> StaticModel:
    """The zone model of ``scene``.

    Raises :class:`GeometryError` if some sensor ends up in no zone.
    """
    zones = discover_zones(scene, resolution, epsilon)
    sensors = frozenset(s.id for s in scene.sensors)
    covered = frozenset().union(*zones) if zones else frozenset()
    lost = sorted(sensors - covered)
    if lost:
        raise GeometryError(f"no zone found for sensor(s) {', '.join(lost)}")
    return StaticModel(sensors, frozenset(zones))


def verify_resolution(scene: Scene, resolution: float | None = None, epsilon: float | None = None) -> dict:
    """Compare the zones found at ``resolution`` with those at a 4x denser grid."""
    resolution = default_resolution(scene) if resolution is None else resolution
    coarse = discover_zones(scene, resolution, epsilon)
    fine = discover_zones(scene, resolution / 4, epsilon)

    def listing(zs):
        return sorted((sorted(z) for z in zs), key=lambda z: (len(z), z))

    return {
        "resolution": resolution,
        "stable": coarse == fine,
        "only_fine": listing(fine - coarse),
        "only_coarse": listing(coarse - fine),
    }


def count_targets(scene: Scene, targets: Sequence[tuple[float, float]] | None = None) -> dict[str, int]:
    """Ideal readings: targets strictly inside each range (boundary points do not count)."""
    pts = np.array(scene.targets if targets is None else targets, dtype=float).reshape(-1, 2)
    return {s.id: int(s.shape.contains(pts).sum()) for s in scene.sensors}


def target_signatures(scene: Scene) -> list[frozenset]:
    pts = np.array(scene.targets, dtype=float).reshape(-1, 2)
    cover = np.array([s.shape.contains(pts) for s in scene.sensors]).reshape(len(scene.sensors), -1)
    ids = [s.id for s in scene.sensors]
    return [frozenset(ids[i] for i in np.flatnonzero(cover[:, k])) for k in range(pts.shape[0])]
