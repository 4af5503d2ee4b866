"""Scene/City data model, validation, the 2.5D->2D reduction, guards.

A Scene is the 2D universe every algorithm works on: an axis-aligned
bounding rectangle with k pairwise-disjoint rectangular holes.  A City
adds a positive height per building.  Guards record the corner identity
of their anchor (not raw coordinates) so solutions survive
re-serialization of the scene.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from cityguard.errors import SceneValidationError, DegeneratePositionError
from cityguard.geom import (
    AxisRect, ConvexQuad, Point, Hole, cell_bbox, dot,
    is_rectangle, make_axis_rect, make_convex_quad, primitive_direction,
)

AXIS_ALIGNED = "AXIS_ALIGNED"
GENERAL = "GENERAL"

N = (0, 1)
E = (1, 0)
S = (0, -1)
W = (-1, 0)
AXIS_DIRECTIONS = {"N": N, "E": E, "S": S, "W": W}


@dataclass(frozen=True)
class Building:
    base: Hole
    height: Union[int, Fraction]
    id: int

    def __post_init__(self):
        if self.height <= 0:
            raise ValueError(f"building {self.id}: height must be positive")
        if isinstance(self.base, ConvexQuad) and not is_rectangle(self.base):
            raise ValueError(f"building {self.id}: base is not a rectangle")


@dataclass(frozen=True)
class Scene:
    bounds: AxisRect
    holes: tuple
    _allow_boundary_contact: bool = field(default=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.holes)

    @property
    def kind(self) -> str:
        return AXIS_ALIGNED if all(isinstance(h, AxisRect) for h in self.holes) else GENERAL

    def hole_corners(self, i: int):
        return self.holes[i].corners()


@dataclass(frozen=True)
class City:
    scene: Scene
    heights: tuple

    def __post_init__(self):
        if len(self.heights) != self.scene.k:
            raise ValueError("need exactly one height per building")

    def building(self, i: int) -> Building:
        return Building(base=self.scene.holes[i], height=self.heights[i], id=i)

    def buildings(self):
        return [self.building(i) for i in range(self.scene.k)]


# Anchors: ("hole", building_id, corner_idx) or ("p", corner_idx).
# Corner indices run CCW; for axis rectangles 0=SW, 1=SE, 2=NE, 3=NW.


@dataclass(frozen=True, order=True)
class Guard:
    anchor: tuple
    facing: tuple

    def __post_init__(self):
        object.__setattr__(self, "facing", primitive_direction(*self.facing))

    def position(self, scene: Scene) -> Point:
        kind = self.anchor[0]
        if kind == "hole":
            return scene.holes[self.anchor[1]].corners()[self.anchor[2]]
        if kind == "p":
            return scene.bounds.corners()[self.anchor[1]]
        raise ValueError(f"bad anchor {self.anchor!r}")

    def on_hole(self) -> bool:
        return self.anchor[0] == "hole"


def hole_guard(building: int, corner: int, facing) -> Guard:
    return Guard(anchor=("hole", building, corner), facing=tuple(facing))


def p_corner_guard(corner: int, facing) -> Guard:
    return Guard(anchor=("p", corner), facing=tuple(facing))


@dataclass(frozen=True)
class Solution:
    algorithm: str
    guards: tuple
    trace: tuple = ()

    def __post_init__(self):
        seen = []
        for g in self.guards:
            if g not in seen:
                seen.append(g)
        object.__setattr__(self, "guards", tuple(seen))

    @property
    def count(self) -> int:
        return len(self.guards)

    def p_corner_count(self) -> int:
        return sum(1 for g in self.guards if not g.on_hole())


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _holes_disjoint(a: Hole, b: Hole) -> bool:
    """Closed-set disjointness of two convex holes (exact separating edge)."""
    ca, cb = a.as_cell(), b.as_cell()
    ba, bb = cell_bbox(ca), cell_bbox(cb)
    if ba[2] < bb[0] or bb[2] < ba[0] or ba[3] < bb[1] or bb[3] < ba[1]:
        return True
    for cell, other in ((ca, cb), (cb, ca)):
        n = len(cell)
        for i in range(n):
            p, q = cell[i], cell[(i + 1) % n]
            dx, dy = q.x - p.x, q.y - p.y
            # other entirely in the open right half-plane of p->q separates
            if all((r.x - p.x) * dy - (r.y - p.y) * dx > 0 for r in other):
                return True
    return False


def _strictly_inside(hole: Hole, bounds: AxisRect) -> bool:
    return all(bounds.contains_open(c) for c in hole.corners())


def _axis_lines(hole: Hole):
    """Supporting x-lines and y-lines for axis-aligned holes."""
    if isinstance(hole, AxisRect):
        return {hole.x0, hole.x1}, {hole.y0, hole.y1}
    xs, ys = set(), set()
    cs = hole.corners()
    for i in range(4):
        p, q = cs[i], cs[(i + 1) % 4]
        if p.x == q.x:
            xs.add(p.x)
        if p.y == q.y:
            ys.add(p.y)
    return xs, ys


def check_general_position(scene: Scene):
    """No two holes share an edge-supporting axis line; violations as list."""
    bad = []
    lines = [_axis_lines(h) for h in scene.holes]
    for i in range(scene.k):
        for j in range(i + 1, scene.k):
            if (lines[i][0] & lines[j][0]) or (lines[i][1] & lines[j][1]):
                bad.append(("DEGENERATE_POSITION", (i, j)))
    return bad


def validate_scene(raw, require_general_position: bool = False) -> Scene:
    """Validate a raw scene description (dict or Scene) into a Scene.

    Raises SceneValidationError carrying every violation found.
    """
    if isinstance(raw, Scene):
        bounds, holes = raw.bounds, list(raw.holes)
        violations = []
    else:
        bounds, holes, violations = _parse_raw(raw)
    for i, h in enumerate(holes):
        if isinstance(h, ConvexQuad) and not is_rectangle(h):
            violations.append(("NOT_A_RECTANGLE", (i,)))
    for i, h in enumerate(holes):
        if not _strictly_inside(h, bounds):
            violations.append(("HOLE_TOUCHES_BOUNDARY", (i,)))
    for i in range(len(holes)):
        for j in range(i + 1, len(holes)):
            if not _holes_disjoint(holes[i], holes[j]):
                violations.append(("OVERLAPPING_HOLES", (i, j)))
    scene = Scene(bounds=bounds, holes=tuple(holes))
    if require_general_position:
        violations.extend(check_general_position(scene))
    if violations:
        raise SceneValidationError(violations)
    return scene


def _parse_raw(raw):
    violations = []
    bounds = make_axis_rect(*[v for v in raw["bounds"]])
    holes = []
    for i, b in enumerate(raw.get("buildings", raw.get("holes", []))):
        if isinstance(b, dict) and "quad" in b:
            holes.append(make_convex_quad(b["quad"]))
        elif isinstance(b, dict):
            holes.append(make_axis_rect(*b["base"]))
        else:
            holes.append(make_axis_rect(*b))
    return bounds, holes, violations


def require_general_position(scene: Scene):
    bad = check_general_position(scene)
    if bad:
        raise DegeneratePositionError(str(bad))


def project(city: City) -> Scene:
    """Vertical projection: drop the heights, keep the bases as holes."""
    return city.scene


# ---------------------------------------------------------------------------
# Roofs
# ---------------------------------------------------------------------------


def roof_covered_by(building: Building, g: Guard, scene: Scene) -> bool:
    """A guard on its own roof covers it iff the roof is in its closed half-plane."""
    if g.anchor[0] != "hole" or g.anchor[1] != building.id:
        return False
    v = g.position(scene)
    fx, fy = g.facing
    return all((c.x - v.x) * fx + (c.y - v.y) * fy >= 0 for c in building.base.corners())


def wall_aligned_facings(hole: Hole):
    """The four facings whose boundary plane is parallel to a wall."""
    if isinstance(hole, AxisRect):
        return (N, E, S, W)
    cs = hole.corners()
    d0 = primitive_direction(cs[1].x - cs[0].x, cs[1].y - cs[0].y)
    d1 = primitive_direction(cs[2].x - cs[1].x, cs[2].y - cs[1].y)
    return (d0, (-d0[0], -d0[1]), d1, (-d1[0], -d1[1]))


def guard_facing_is_wall_aligned(scene: Scene, g: Guard) -> bool:
    if g.anchor[0] == "p":
        return g.facing in (N, E, S, W)
    hole = scene.holes[g.anchor[1]]
    cs = hole.corners()
    for i in range(4):
        ex, ey = cs[(i + 1) % 4].x - cs[i].x, cs[(i + 1) % 4].y - cs[i].y
        if dot(g.facing[0], g.facing[1], ex, ey) == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# Quarter-turn rotations (exact), used to canonicalize placement frames
# ---------------------------------------------------------------------------


def rotate_point_ccw(p: Point, times: int) -> Point:
    t = times % 4
    x, y = p
    for _ in range(t):
        x, y = -y, x
    return Point(x, y)


def rotate_scene_ccw(scene: Scene, times: int) -> Scene:
    t = times % 4
    if t == 0:
        return scene
    def rot_rect(r: AxisRect) -> AxisRect:
        cs = [rotate_point_ccw(c, t) for c in (r.lo, r.hi)]
        xs = sorted(c.x for c in cs)
        ys = sorted(c.y for c in cs)
        return AxisRect(xs[0], ys[0], xs[1], ys[1])
    holes = []
    for h in scene.holes:
        if isinstance(h, AxisRect):
            holes.append(rot_rect(h))
        else:
            holes.append(make_convex_quad([rotate_point_ccw(c, t) for c in h.corners()]))
    return Scene(bounds=rot_rect(scene.bounds), holes=tuple(holes),
                 _allow_boundary_contact=scene._allow_boundary_contact)


def rotate_guard_ccw(g: Guard, scene: Scene, times: int) -> Guard:
    """Re-anchor a guard after the scene is rotated by `times` quarter turns."""
    t = times % 4
    if t == 0:
        return g
    rotated = rotate_scene_ccw(scene, t)
    pos = rotate_point_ccw(g.position(scene), t)
    facing = rotate_point_ccw(Point(*g.facing), t)
    if g.anchor[0] == "hole":
        corners = rotated.holes[g.anchor[1]].corners()
        idx = corners.index(pos)
        return Guard(anchor=("hole", g.anchor[1], idx), facing=(facing.x, facing.y))
    corners = rotated.bounds.corners()
    return Guard(anchor=("p", corners.index(pos)), facing=(facing.x, facing.y))


def unrotate_guards(guards: Sequence[Guard], rotated_scene: Scene, times: int):
    """Map guards placed in a rotated frame back to the original frame."""
    back = (-times) % 4
    return [rotate_guard_ccw(g, rotated_scene, back) for g in guards]
