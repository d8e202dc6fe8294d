"""Mesh generators for the built-in manifold families.

Families (kind strings):
  ball-flat                n-ball of radius delta in R^n, n = 2 or 3
  annulus-flat             {eps < |x| < delta} in R^n, n = 2 or 3; the inner
                           sphere is tagged steklov, the outer one neumann
  cylinder-surface         S^1_radius x [0, L] lateral surface in R^3
  sphere-boundary          round sphere S^(n-1)_eps in R^n (closed, no boundary)
  torus-surface            standard torus of revolution in R^3 (closed)
  revolution-closure       the annulus closed up through a half-torus collar
                           and a disk cap; one boundary circle of radius eps
  product-annulus-circle   A(eps, delta) x S^1_R as a 3-manifold in R^4 (n = 2)

All generators place vertices exactly on the family geometry and derive the
boundary faces from the cell facets, so the meshes always pass
EmbeddedMesh.validate().  `h` is the target edge length; `h_boundary`
optionally grades the mesh toward the Steklov boundary (tangential spacing
h_boundary, normal spacing from 9x that), which the packing pipeline needs
when its radius is much smaller than h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, Delaunay

from .errors import ResolutionError, UsageError
from .euclidean import unit_sphere_area
from .mesh import NEUMANN, STEKLOV, EmbeddedMesh, boundary_facets

KINDS = (
    "ball-flat",
    "annulus-flat",
    "cylinder-surface",
    "sphere-boundary",
    "torus-surface",
    "revolution-closure",
    "product-annulus-circle",
)

_GRADING_RATIO = 1.3
_MIN_ANGULAR = 8
# Graded meshes keep the tangential spacing at h_boundary but start normal
# steps at 9x that.  With the plain quad split below, every band triangle
# has two vertices on one ring: the tangential gradient of an interpolated
# 1/r-Lipschitz test function is then at most 1/r and the normal one at
# most 1/(9 h_boundary), so the interpolant stays within a few percent of
# the exact Lipschitz bound (isotropic cells would inflate apex-cell
# gradients up to sqrt(2)).
_NORMAL_TO_TANGENT = 9.0


@dataclass(frozen=True)
class FamilyDescriptor:
    """Parameters selecting one member of a family plus mesh density."""

    kind: str
    h: float
    n: int = 2
    eps: Optional[float] = None
    delta: Optional[float] = None
    radius: Optional[float] = None
    length: Optional[float] = None
    circle_radius: Optional[float] = None
    major_radius: Optional[float] = None
    minor_radius: Optional[float] = None
    h_boundary: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown family kind {self.kind!r}")
        if not self.h or self.h <= 0:
            raise UsageError("h must be positive")
        if self.h_boundary is not None and self.h_boundary <= 0:
            raise UsageError("h_boundary must be positive")
        need = {
            "ball-flat": ("delta",),
            "annulus-flat": ("eps", "delta"),
            "cylinder-surface": ("radius", "length"),
            "sphere-boundary": ("eps",),
            "torus-surface": ("major_radius", "minor_radius"),
            "revolution-closure": ("eps", "delta"),
            "product-annulus-circle": ("eps", "delta", "circle_radius"),
        }[self.kind]
        for name in need:
            value = getattr(self, name)
            if value is None or value <= 0:
                raise UsageError(f"{self.kind} requires positive {name}")
        if self.eps is not None and self.delta is not None and not self.eps < self.delta:
            raise UsageError("need 0 < eps < delta")
        if self.kind in ("ball-flat", "annulus-flat", "sphere-boundary") and self.n not in (2, 3):
            raise UsageError(f"{self.kind} is meshed for n = 2, 3 only")
        if self.kind in ("revolution-closure", "product-annulus-circle") and self.n != 2:
            raise UsageError(f"{self.kind} is meshed for n = 2 only")


@dataclass(frozen=True)
class GeometricSummary:
    """Measured volumes plus analytic injectivity radius where available."""

    volume_m: float
    volume_sigma: float
    isoperimetric_ratio: Optional[float]
    injectivity_radius: Optional[float] = None

    def to_payload(self) -> dict:
        return {
            "volume_m": self.volume_m,
            "volume_sigma": self.volume_sigma,
            "isoperimetric_ratio": self.isoperimetric_ratio,
            "injectivity_radius": self.injectivity_radius,
        }


# ---------------------------------------------------------------------------
# helpers


def _angular_count(circumference: float, h: float) -> int:
    return max(_MIN_ANGULAR, int(math.ceil(circumference / h)))


def _require_resolved(radius: float, h: float, label: str) -> None:
    if int(math.ceil(2.0 * math.pi * radius / h)) < _MIN_ANGULAR:
        raise ResolutionError(
            f"h = {h} is too coarse to resolve the {label} of radius {radius} "
            f"(fewer than {_MIN_ANGULAR} boundary vertices)"
        )


def _graded_offsets(length: float, h: float, h_fine: Optional[float]) -> np.ndarray:
    """Node offsets on [0, length], spacing h_fine at 0 growing to h."""
    if h_fine is None or h_fine >= h:
        count = max(1, int(math.ceil(length / h)))
        return np.linspace(0.0, length, count + 1)
    steps = []
    s = h_fine
    total = 0.0
    while total < length:
        steps.append(s)
        total += s
        s = min(h, s * _GRADING_RATIO)
    steps = np.array(steps) * (length / total)
    return np.concatenate([[0.0], np.cumsum(steps)])


def _two_sided_offsets(length: float, h: float, h_fine: Optional[float]) -> np.ndarray:
    """Offsets graded fine at both endpoints of [0, length]."""
    half = _graded_offsets(length / 2.0, h, h_fine)
    back = length - half[::-1]
    return np.concatenate([half, back[1:]])


def _fibonacci_sphere(count: int, radius: float) -> np.ndarray:
    """Roughly uniform points on a sphere via the golden-angle spiral."""
    i = np.arange(count)
    golden = math.pi * (3.0 - math.sqrt(5.0))
    z = 1.0 - 2.0 * (i + 0.5) / count
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = golden * i
    return radius * np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def _tag_all(faces: list[tuple], tag: str):
    width = len(faces[0]) if faces else 1
    bf = np.array(faces, dtype=np.int64).reshape(len(faces), width)
    tags = np.array([tag] * len(faces), dtype=object)
    return bf, tags


def _band_cells(ring_ids: list[np.ndarray], wrap: bool) -> list[tuple]:
    """Two triangles per quad over a ring lattice (consistent diagonals).

    ring_ids[k] are the vertex ids of ring k, all the same length.
    """
    cells = []
    ntheta = len(ring_ids[0])
    last = ntheta if wrap else ntheta - 1
    for k in range(len(ring_ids) - 1):
        lo, hi = ring_ids[k], ring_ids[k + 1]
        for j in range(last):
            jn = (j + 1) % ntheta
            a, b, c, d = lo[j], hi[j], hi[jn], lo[jn]
            cells.extend([(a, b, c), (a, c, d)])
    return cells


# ---------------------------------------------------------------------------
# planar building blocks


def _polar_rings(eps: float, delta: float, h: float, h_fine: Optional[float], ntheta=None):
    """Radii for a structured polar lattice graded fine at radius eps."""
    h_radial = None if h_fine is None else min(h, _NORMAL_TO_TANGENT * h_fine)
    offsets = _graded_offsets(delta - eps, h, h_radial)
    radii = eps + offsets
    if ntheta is None:
        ntheta = max(
            _angular_count(2.0 * math.pi * delta, h),
            _angular_count(2.0 * math.pi * eps, h_fine if h_fine else h),
        )
    return radii, ntheta


def _structured_annulus(eps, delta, h, h_fine=None, ntheta=None):
    """Structured ring-lattice triangle mesh of the planar annulus.

    Returns (points, triangles, inner_ring_ids, outer_ring_ids, ntheta).
    """
    radii, ntheta = _polar_rings(eps, delta, h, h_fine, ntheta)
    angles = 2.0 * math.pi * np.arange(ntheta) / ntheta
    pts, ring_ids = [], []
    offset = 0
    for r in radii:
        pts.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
        ring_ids.append(np.arange(offset, offset + ntheta))
        offset += ntheta
    points = np.vstack(pts)
    cells = np.array(_band_cells(ring_ids, wrap=True), dtype=np.int64)
    return points, cells, ring_ids[0], ring_ids[-1], ntheta


def _delaunay_disk(delta: float, h: float, boundary_count: Optional[int] = None):
    """Ring-based Delaunay triangulation of the disk of radius delta.

    The outer ring has boundary_count points when prescribed (for seam
    matching); ring counts step down smoothly toward the center.
    """
    nr = max(1, int(math.ceil(delta / h)))
    radii = delta * (1.0 - np.arange(nr + 1) / nr)  # decreasing to 0
    pts = []
    prev_count = None
    for k, r in enumerate(radii):
        if r <= 1e-12 * delta:
            pts.append(np.zeros((1, 2)))
            continue
        count = max(6, int(round(2.0 * math.pi * r / h)))
        if k == 0 and boundary_count is not None:
            count = boundary_count
        if prev_count is not None:
            count = max(count, prev_count // 2)  # avoid abrupt fans
        prev_count = count
        stagger = 0.5 * (k % 2)
        angles = 2.0 * math.pi * (np.arange(count) + stagger) / count
        if k == 0:
            angles = 2.0 * math.pi * np.arange(count) / count
        pts.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
    points = np.vstack(pts)
    tris = Delaunay(points).simplices.astype(np.int64)
    first_ring = len(pts[0])
    return points, tris, first_ring


def _structured_disk(delta: float, h: float, h_fine: float):
    """Structured polar disk graded fine at the boundary, fan at the center."""
    offsets = _graded_offsets(delta, h, min(h, _NORMAL_TO_TANGENT * h_fine))
    radii = (delta - offsets)[:-1]  # skip the exact center, fan closes it
    ntheta = _angular_count(2.0 * math.pi * delta, h_fine)
    angles = 2.0 * math.pi * np.arange(ntheta) / ntheta
    pts, ring_ids = [], []
    offset = 0
    for r in radii:
        pts.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
        ring_ids.append(np.arange(offset, offset + ntheta))
        offset += ntheta
    center = offset
    pts.append(np.zeros((1, 2)))
    points = np.vstack(pts)
    cells = _band_cells(ring_ids, wrap=True)
    inner = ring_ids[-1]
    for j in range(ntheta):
        cells.append((inner[j], inner[(j + 1) % ntheta], center))
    return points, np.array(cells, dtype=np.int64), ring_ids[0]


# ---------------------------------------------------------------------------
# family generators


def _mesh_ball(desc: FamilyDescriptor) -> EmbeddedMesh:
    delta = desc.delta
    _require_resolved(delta, desc.h, "boundary sphere")
    if desc.n == 2:
        if desc.h_boundary is not None and desc.h_boundary < desc.h:
            points, tris, _ = _structured_disk(delta, desc.h, desc.h_boundary)
        else:
            points, tris, _ = _delaunay_disk(delta, desc.h)
        bf, tags = _tag_all(boundary_facets(tris), STEKLOV)
        return EmbeddedMesh(points, tris, bf, tags, {"family": "ball-flat", "n": 2})
    # n = 3: layered Fibonacci shells plus the center, Delaunay-filled
    offsets = _graded_offsets(delta, desc.h, desc.h_boundary)
    radii = delta - offsets
    layers = [np.zeros((1, 3))]
    for r in radii:
        if r <= 1e-12 * delta:
            continue
        count = max(14, int(round(4.0 * math.pi * r * r / (desc.h * desc.h))))
        layers.append(_fibonacci_sphere(count, r))
    points = np.vstack(layers)
    tets = Delaunay(points).simplices.astype(np.int64)
    bf, tags = _tag_all(boundary_facets(tets), STEKLOV)
    return EmbeddedMesh(points, tets, bf, tags, {"family": "ball-flat", "n": 3})


def _mesh_annulus(desc: FamilyDescriptor) -> EmbeddedMesh:
    eps, delta = desc.eps, desc.delta
    _require_resolved(eps, desc.h, "inner sphere")
    if desc.n == 2:
        points, tris, inner, outer, _ = _structured_annulus(
            eps, delta, desc.h, desc.h_boundary
        )
        inner_set = set(int(v) for v in inner)
        bf, tags = [], []
        for face in boundary_facets(tris):
            bf.append(face)
            tags.append(STEKLOV if all(v in inner_set for v in face) else NEUMANN)
        return EmbeddedMesh(
            points, tris,
            np.array(bf, dtype=np.int64), np.array(tags, dtype=object),
            {"family": "annulus-flat", "n": 2},
        )
    # n = 3: spherical shell; Delaunay fills the hole, drop the hole tets
    offsets = _graded_offsets(delta - eps, desc.h, desc.h_boundary)
    radii = eps + offsets
    gap = radii[1] - radii[0]
    layers = []
    for r in radii:
        count = max(14, int(round(4.0 * math.pi * r * r / (desc.h * desc.h))))
        layers.append(_fibonacci_sphere(count, r))
    points = np.vstack(layers)
    tets = Delaunay(points).simplices.astype(np.int64)
    vertex_r = np.linalg.norm(points, axis=1)
    keep = ~np.all(vertex_r[tets] < eps + 0.5 * gap, axis=1)
    tets = tets[keep]
    bf, tags = [], []
    for face in boundary_facets(tets):
        rmean = vertex_r[list(face)].mean()
        bf.append(face)
        tags.append(STEKLOV if abs(rmean - eps) < abs(rmean - delta) else NEUMANN)
    return EmbeddedMesh(
        points, tets,
        np.array(bf, dtype=np.int64), np.array(tags, dtype=object),
        {"family": "annulus-flat", "n": 3},
    )


def _mesh_cylinder(desc: FamilyDescriptor) -> EmbeddedMesh:
    rho, length = desc.radius, desc.length
    _require_resolved(rho, desc.h, "boundary circle")
    h_ang = desc.h_boundary if desc.h_boundary else desc.h
    ntheta = _angular_count(2.0 * math.pi * rho, h_ang)
    h_axial = None if desc.h_boundary is None else min(desc.h, _NORMAL_TO_TANGENT * desc.h_boundary)
    zs = _two_sided_offsets(length, desc.h, h_axial)
    angles = 2.0 * math.pi * np.arange(ntheta) / ntheta
    circle = np.column_stack([rho * np.cos(angles), rho * np.sin(angles)])
    pts, ring_ids = [], []
    offset = 0
    for z in zs:
        pts.append(np.column_stack([circle, np.full(ntheta, z)]))
        ring_ids.append(np.arange(offset, offset + ntheta))
        offset += ntheta
    points = np.vstack(pts)
    tris = np.array(_band_cells(ring_ids, wrap=True), dtype=np.int64)
    bf, tags = _tag_all(boundary_facets(tris), STEKLOV)
    return EmbeddedMesh(points, tris, bf, tags, {"family": "cylinder-surface"})


def _mesh_sphere(desc: FamilyDescriptor) -> EmbeddedMesh:
    eps = desc.eps
    _require_resolved(eps, desc.h, "sphere")
    if desc.n == 2:
        ntheta = _angular_count(2.0 * math.pi * eps, desc.h)
        angles = 2.0 * math.pi * np.arange(ntheta) / ntheta
        points = eps * np.column_stack([np.cos(angles), np.sin(angles)])
        cells = np.array([(j, (j + 1) % ntheta) for j in range(ntheta)], dtype=np.int64)
        return EmbeddedMesh(
            points, cells, np.zeros((0, 1), dtype=np.int64), np.array([], dtype=object),
            {"family": "sphere-boundary", "n": 2},
        )
    count = max(50, int(round(4.0 * math.pi * eps * eps / (desc.h * desc.h))))
    points = _fibonacci_sphere(count, eps)
    cells = ConvexHull(points).simplices.astype(np.int64)
    return EmbeddedMesh(
        points, cells, np.zeros((0, 2), dtype=np.int64), np.array([], dtype=object),
        {"family": "sphere-boundary", "n": 3},
    )


def _mesh_torus(desc: FamilyDescriptor) -> EmbeddedMesh:
    big, small = desc.major_radius, desc.minor_radius
    if small >= big:
        raise UsageError("torus needs minor_radius < major_radius")
    _require_resolved(small, desc.h, "torus tube")
    ntheta = _angular_count(2.0 * math.pi * (big + small), desc.h)
    nphi = _angular_count(2.0 * math.pi * small, desc.h)

    def point(t, p):
        ring = big + small * math.cos(p)
        return (ring * math.cos(t), ring * math.sin(t), small * math.sin(p))

    th = 2.0 * math.pi * np.arange(ntheta) / ntheta
    ph = 2.0 * math.pi * np.arange(nphi) / nphi
    pts, ring_ids = [], []
    offset = 0
    for t in th:
        pts.append(np.array([point(t, p) for p in ph]))
        ring_ids.append(np.arange(offset, offset + nphi))
        offset += nphi
    points = np.vstack(pts)
    ring_ids.append(ring_ids[0])  # wrap in the major direction
    tris = np.array(_band_cells(ring_ids, wrap=True), dtype=np.int64)
    return EmbeddedMesh(
        points, tris, np.zeros((0, 2), dtype=np.int64), np.array([], dtype=object),
        {"family": "torus-surface"},
    )


def _mesh_revolution_closure(desc: FamilyDescriptor) -> EmbeddedMesh:
    """Annulus at x3 = -1, half-torus collar, and a disk cap at x3 = +1.

    The parts share their seam circles (radius delta at x3 = -1, +1) by exact
    vertex identification.  The profile is only C^1 across the seams, which
    piecewise-linear elements do not see; seam vertex ids are recorded in the
    mesh metadata.  The single boundary component is the circle of radius eps
    at x3 = -1, tagged steklov.
    """
    eps, delta, h = desc.eps, desc.delta, desc.h
    _require_resolved(eps, h, "inner circle")

    ann_pts, ann_tris, ann_inner, ann_outer, ntheta = _structured_annulus(
        eps, delta, h, desc.h_boundary
    )
    vertices = [np.column_stack([ann_pts, -np.ones(len(ann_pts))])]
    cells = [tuple(int(v) for v in tri) for tri in ann_tris]
    offset = len(ann_pts)
    seam_bottom = ann_outer

    # collar ((delta + cos f) cos t, (delta + cos f) sin t, sin f), f in [-pi/2, pi/2]
    nphi = max(4, int(math.ceil(math.pi / h)))
    angles = 2.0 * math.pi * np.arange(ntheta) / ntheta

    def collar_ring(f):
        r = delta + math.cos(f)
        return np.column_stack(
            [r * np.cos(angles), r * np.sin(angles), np.full(ntheta, math.sin(f))]
        )

    ring_ids = [seam_bottom]
    for k in range(1, nphi + 1):
        f = -0.5 * math.pi + math.pi * k / nphi
        vertices.append(collar_ring(f))
        ring_ids.append(np.arange(offset, offset + ntheta))
        offset += ntheta
    cells.extend(_band_cells(ring_ids, wrap=True))
    seam_top = ring_ids[-1]

    # cap: disk of radius delta at x3 = +1, reusing the seam ring
    disk_pts, disk_tris, first_ring = _delaunay_disk(delta, h, boundary_count=ntheta)
    local_to_global = np.empty(len(disk_pts), dtype=np.int64)
    local_to_global[:first_ring] = seam_top
    interior = np.arange(first_ring, len(disk_pts))
    local_to_global[interior] = offset + np.arange(len(interior))
    vertices.append(np.column_stack([disk_pts[interior], np.ones(len(interior))]))
    for tri in disk_tris:
        cells.append(tuple(int(v) for v in local_to_global[tri]))

    points = np.vstack(vertices)
    cells = np.array(cells, dtype=np.int64)
    bf, tags = _tag_all(boundary_facets(cells), STEKLOV)
    meta = {
        "family": "revolution-closure",
        "n": 2,
        "seam_rings": [
            sorted(int(v) for v in seam_bottom),
            sorted(int(v) for v in seam_top),
        ],
    }
    return EmbeddedMesh(points, cells, bf, tags, meta)


def _mesh_product_annulus_circle(desc: FamilyDescriptor) -> EmbeddedMesh:
    """A(eps, delta) x S^1_R as tetrahedra in R^4 (n = 2 cross-section).

    Prisms (triangle x circle segment) split into three tetrahedra by the
    sorted-vertex staircase rule, which is conforming across shared quad
    faces, including around the circle wrap.
    """
    eps, delta, big_r = desc.eps, desc.delta, desc.circle_radius
    _require_resolved(eps, desc.h, "inner sphere")
    ann_pts, ann_tris, inner, outer, _ = _structured_annulus(
        eps, delta, desc.h, desc.h_boundary
    )
    ns = max(_MIN_ANGULAR, int(math.ceil(2.0 * math.pi * big_r / desc.h)))
    thetas = 2.0 * math.pi * np.arange(ns) / ns
    na = len(ann_pts)
    circ = np.column_stack([big_r * np.cos(thetas), big_r * np.sin(thetas)])
    points = np.empty((na * ns, 4))
    for s in range(ns):
        block = slice(s * na, (s + 1) * na)
        points[block, :2] = ann_pts
        points[block, 2:] = circ[s]

    def vid(a, s):
        return (s % ns) * na + a

    tets = []
    for tri in ann_tris:
        a0, a1, a2 = sorted(int(v) for v in tri)
        for s in range(ns):
            b = (vid(a0, s), vid(a1, s), vid(a2, s))
            t = (vid(a0, s + 1), vid(a1, s + 1), vid(a2, s + 1))
            tets.append((b[0], b[1], b[2], t[0]))
            tets.append((b[1], b[2], t[0], t[1]))
            tets.append((b[2], t[0], t[1], t[2]))
    tets = np.array(tets, dtype=np.int64)

    planar_r = np.linalg.norm(points[:, :2], axis=1)
    bf, tags = [], []
    for face in boundary_facets(tets):
        rmean = planar_r[list(face)].mean()
        bf.append(face)
        tags.append(STEKLOV if abs(rmean - eps) < abs(rmean - delta) else NEUMANN)
    return EmbeddedMesh(
        points, tets,
        np.array(bf, dtype=np.int64), np.array(tags, dtype=object),
        {"family": "product-annulus-circle", "n": 2},
    )


_GENERATORS = {
    "ball-flat": _mesh_ball,
    "annulus-flat": _mesh_annulus,
    "cylinder-surface": _mesh_cylinder,
    "sphere-boundary": _mesh_sphere,
    "torus-surface": _mesh_torus,
    "revolution-closure": _mesh_revolution_closure,
    "product-annulus-circle": _mesh_product_annulus_circle,
}


def generate_mesh(desc: FamilyDescriptor) -> EmbeddedMesh:
    """Build and validate the mesh for a family descriptor."""
    mesh = _GENERATORS[desc.kind](desc)
    mesh.validate()
    return mesh


# ---------------------------------------------------------------------------
# analytic quantities


def exact_volumes(desc: FamilyDescriptor) -> tuple[float, float]:
    """(volume of M, volume of the Steklov part of the boundary), exact."""
    n = desc.n
    if desc.kind == "ball-flat":
        d = desc.delta
        if n == 2:
            return math.pi * d * d, 2.0 * math.pi * d
        return 4.0 / 3.0 * math.pi * d**3, 4.0 * math.pi * d * d
    if desc.kind == "annulus-flat":
        e, d = desc.eps, desc.delta
        if n == 2:
            return math.pi * (d * d - e * e), 2.0 * math.pi * e
        return 4.0 / 3.0 * math.pi * (d**3 - e**3), 4.0 * math.pi * e * e
    if desc.kind == "cylinder-surface":
        rho, length = desc.radius, desc.length
        return 2.0 * math.pi * rho * length, 4.0 * math.pi * rho
    if desc.kind == "sphere-boundary":
        return unit_sphere_area(n - 1) * desc.eps ** (n - 1), 0.0
    if desc.kind == "torus-surface":
        return 4.0 * math.pi**2 * desc.major_radius * desc.minor_radius, 0.0
    if desc.kind == "revolution-closure":
        e, d = desc.eps, desc.delta
        annulus = math.pi * (d * d - e * e)
        cap = math.pi * d * d
        collar = 2.0 * math.pi * (math.pi * d + 2.0)
        return annulus + cap + collar, 2.0 * math.pi * e
    if desc.kind == "product-annulus-circle":
        e, d, big_r = desc.eps, desc.delta, desc.circle_radius
        circ = 2.0 * math.pi * big_r
        return math.pi * (d * d - e * e) * circ, 2.0 * math.pi * e * circ
    raise UsageError(f"unknown family {desc.kind!r}")


def injectivity_radius(desc: FamilyDescriptor) -> Optional[float]:
    """Analytic injectivity radius of the relevant boundary, family cases only.

    sphere-boundary: pi*eps of the sphere itself; product-annulus-circle:
    the boundary is S^(n-1)_eps x S^1_R, so min(pi*eps, pi*R);
    cylinder-surface: boundary circles of the given radius, so pi*radius.
    """
    if desc.kind == "sphere-boundary":
        return math.pi * desc.eps
    if desc.kind == "product-annulus-circle":
        return math.pi * min(desc.eps, desc.circle_radius)
    if desc.kind == "cylinder-surface":
        return math.pi * desc.radius
    return None


def geometric_summary(
    mesh: EmbeddedMesh, desc: Optional[FamilyDescriptor] = None
) -> GeometricSummary:
    """Measured volumes of the mesh; injectivity radius only when desc is given."""
    vol_m = mesh.volume()
    vol_sigma = mesh.steklov_volume()
    n = mesh.intrinsic_dim
    if vol_m <= 0 or vol_sigma <= 0:
        iso = None  # closed mesh: no Steklov boundary, no isoperimetric ratio
    else:
        iso = vol_sigma / vol_m ** ((n - 1) / n)
    inj = injectivity_radius(desc) if desc is not None else None
    return GeometricSummary(vol_m, vol_sigma, iso, inj)
