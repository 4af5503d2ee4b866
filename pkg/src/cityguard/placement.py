"""Constructive guard placements: roof guarding, the 2k+1 partition
placement, the Cases 0-4 divide-and-conquer, and full city guarding.

Every placement is certified (exact zero-area residual) before it is
returned; PLACEMENT_INCOMPLETE is a defect signal, never an accepted
outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from cityguard.errors import PlacementIncompleteError
from cityguard.geom import AxisRect, Point, PolygonSet
from cityguard.model import (
    AXIS_ALIGNED, City, E, Guard, N, S, Scene, Solution, W,
    hole_guard, p_corner_guard, project, require_general_position,
    roof_covered_by, rotate_scene_ccw, unrotate_guards, validate_scene,
    wall_aligned_facings,
)
from cityguard.staircase import (
    FS, RFS, RRS, RS, SharingReport, build_staircase, staircase_guards,
    staircase_sharing,
)
from cityguard.verify import certify, covers

BUILDINGS_ONLY = "BUILDINGS_ONLY"
ALLOW_P_CORNER = "ALLOW_P_CORNER"


@dataclass(frozen=True)
class PartitionRegion:
    boundary: PolygonSet
    anchor_guard: Guard
    rects: tuple  # grid rectangles making up the region


@dataclass(frozen=True)
class SubCity:
    scene: Scene
    provenance: tuple


# ---------------------------------------------------------------------------
# Roof guarding (k guards, one per building)
# ---------------------------------------------------------------------------


def roof_guarding(city: City) -> Solution:
    scene = project(city)
    guards = []
    for i, h in enumerate(scene.holes):
        cs = h.corners()
        facing = (cs[1].x - cs[0].x, cs[1].y - cs[0].y)  # along the first edge
        guards.append(hole_guard(i, 0, facing))
    sol = Solution(algorithm="roof", guards=tuple(guards))
    for i in range(scene.k):
        if not roof_covered_by(city.building(i), sol.guards[i], scene):
            raise PlacementIncompleteError(f"roof {i} not covered by its own guard")
    return sol


# ---------------------------------------------------------------------------
# The 2k+1 orthogonal partition
# ---------------------------------------------------------------------------


def _partition_walls(scene: Scene):
    """North extensions of right edges, then West extensions of the
    horizontal edges; returns (vertical walls, horizontal walls)."""
    b = scene.bounds
    holes = scene.holes
    v_walls = [(b.x0, b.y0, b.y1), (b.x1, b.y0, b.y1)]
    right_walls = []
    for h in holes:
        stops = [o.y0 for o in holes if o.x0 < h.x1 < o.x1 and o.y0 > h.y1]
        nstop = min(stops) if stops else b.y1
        right_walls.append((h.x1, h.y0, nstop))
    v_walls.extend(right_walls)
    v_walls.extend((h.x0, h.y0, h.y1) for h in holes)  # left edges block too

    def wstop(y, x_right):
        stops = [w[0] for w in right_walls if w[0] < x_right and w[1] < y < w[2]]
        return max(stops) if stops else b.x0

    h_walls = [(b.y0, b.x0, b.x1), (b.y1, b.x0, b.x1)]
    for h in holes:
        h_walls.append((h.y1, wstop(h.y1, h.x0), h.x1))  # top edge, extended West
        h_walls.append((h.y0, wstop(h.y0, h.x0), h.x1))  # bottom edge, extended West
    return v_walls, h_walls


def _orthogonal_partition(scene: Scene):
    """Faces of the extension subdivision as lists of grid rectangles."""
    b = scene.bounds
    holes = scene.holes
    v_walls, h_walls = _partition_walls(scene)
    xs = sorted({b.x0, b.x1} | {h.x0 for h in holes} | {h.x1 for h in holes})
    ys = sorted({b.y0, b.y1} | {h.y0 for h in holes} | {h.y1 for h in holes})
    nx, ny = len(xs) - 1, len(ys) - 1

    def is_hole_cell(i, j):
        for h in holes:
            if h.x0 <= xs[i] and xs[i + 1] <= h.x1 and h.y0 <= ys[j] and ys[j + 1] <= h.y1:
                return True
        return False

    free = [[not is_hole_cell(i, j) for j in range(ny)] for i in range(nx)]

    v_at = {}
    for (x, lo, hi) in v_walls:
        v_at.setdefault(x, []).append((lo, hi))
    h_at = {}
    for (y, lo, hi) in h_walls:
        h_at.setdefault(y, []).append((lo, hi))

    def blocked_v(x, ylo, yhi):
        return any(lo <= ylo and yhi <= hi for (lo, hi) in v_at.get(x, ()))

    def blocked_h(y, xlo, xhi):
        return any(lo <= xlo and xhi <= hi for (lo, hi) in h_at.get(y, ()))

    parent = list(range(nx * ny))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in range(nx):
        for j in range(ny):
            if not free[i][j]:
                continue
            if i + 1 < nx and free[i + 1][j] and not blocked_v(xs[i + 1], ys[j], ys[j + 1]):
                union(i * ny + j, (i + 1) * ny + j)
            if j + 1 < ny and free[i][j + 1] and not blocked_h(ys[j + 1], xs[i], xs[i + 1]):
                union(i * ny + j, i * ny + j + 1)

    groups = {}
    for i in range(nx):
        for j in range(ny):
            if free[i][j]:
                groups.setdefault(find(i * ny + j), []).append(
                    AxisRect(xs[i], ys[j], xs[i + 1], ys[j + 1]))
    return list(groups.values())


def _region_se_corner(rects) -> Point:
    x_right = max(r.x1 for r in rects)
    y_min = min(r.y0 for r in rects if r.x1 == x_right)
    return Point(x_right, y_min)


def _anchor_at(scene: Scene, p: Point, facing) -> Guard:
    for i, h in enumerate(scene.holes):
        cs = h.corners()
        if p in cs:
            return hole_guard(i, cs.index(p), facing)
    cs = scene.bounds.corners()
    if p in cs:
        return p_corner_guard(cs.index(p), facing)
    raise PlacementIncompleteError(f"partition corner {p} is not a vertex")


def _partition_regions(scene: Scene):
    regions = []
    for rects in _orthogonal_partition(scene):
        se = _region_se_corner(rects)
        guard = _anchor_at(scene, se, W)
        cells = PolygonSet(tuple(r.as_cell() for r in rects))
        regions.append(PartitionRegion(boundary=cells, anchor_guard=guard,
                                       rects=tuple(sorted(rects))))
    regions.sort(key=lambda r: (r.anchor_guard.anchor, r.anchor_guard.facing))
    return regions


def partition_2k1(scene: Scene):
    """The 2k+1 monotone-staircase partition of free space."""
    scene = validate_scene(scene)
    require_general_position(scene)
    if scene.kind != AXIS_ALIGNED:
        raise ValueError("partition is defined for axis-aligned scenes")
    regions = _partition_regions(scene)
    if len(regions) != 2 * scene.k + 1:
        raise PlacementIncompleteError(
            f"partition produced {len(regions)} regions, expected {2 * scene.k + 1}")
    return regions


def is_xy_monotone(region: PartitionRegion) -> bool:
    """Every vertical and horizontal line meets the region in an interval."""
    for axis in (0, 1):
        spans = {}
        for r in region.rects:
            key = (r.x0, r.x1) if axis == 0 else (r.y0, r.y1)
            val = (r.y0, r.y1) if axis == 0 else (r.x0, r.x1)
            spans.setdefault(key, []).append(val)
        for intervals in spans.values():
            intervals.sort()
            for (a, b), (c, d) in zip(intervals, intervals[1:]):
                if c > b:
                    return False
    return True


def guards_2k1(scene: Scene) -> Solution:
    """<= 2k+1 guards, each at a region's SE corner facing West; at most one
    guard sits on a corner of the bounding rectangle."""
    regions = partition_2k1(scene)
    guards = tuple(r.anchor_guard for r in regions)
    sol = Solution(algorithm="walls-2k1", guards=guards)
    if sol.p_corner_count() > 1:
        raise PlacementIncompleteError("more than one bounding-rectangle guard")
    if not covers(scene, sol.guards):
        cert = certify(scene, sol.guards)
        raise PlacementIncompleteError("2k+1 placement left a residual",
                                       witness=cert.witness)
    return sol


# ---------------------------------------------------------------------------
# Cases 0-4 (divide and conquer), all guards on hole vertices
# ---------------------------------------------------------------------------

_C0_ROT = {("R", "B"): 0, ("B", "L"): 1, ("L", "T"): 2, ("T", "R"): 3}
_MIN_STAIR_ROT = {RRS: 0, RFS: 1, RS: 2, FS: 3}
_ADJ_PAIR_ROT = {(RS, FS): 0, (FS, RRS): 1, (RRS, RFS): 2, (RFS, RS): 3}


def _se_replacement_guards(scene: Scene, hid: int) -> list:
    """Two hole-vertex guards covering the L-region around P's SE corner
    when the hole is both rightmost and bottom-most; degenerate slabs
    (hole edge on the bounds) drop their guard."""
    h = scene.holes[hid]
    out = []
    if h.x1 < scene.bounds.x1:
        out.append(hole_guard(hid, 1, E))
    if h.y0 > scene.bounds.y0:
        out.append(hole_guard(hid, 1, S))
    if not out:
        raise PlacementIncompleteError("SE replacement degenerate on both sides")
    return out


def _hole_vertex_partition_guards(scene: Scene, replace_with) -> list:
    """Partition guards with the (single) P-corner guard replaced."""
    guards = []
    replaced = False
    for region in _partition_regions(scene):
        g = region.anchor_guard
        if g.on_hole():
            guards.append(g)
        else:
            if replaced:
                raise PlacementIncompleteError("two bounding-rectangle anchors")
            guards.extend(replace_with())
            replaced = True
    if not replaced:
        # boundary-degenerate frames can merge the corner region away
        guards.extend(replace_with())
    return guards


def _case0_guards(scene: Scene, rep: SharingReport, trace) -> list:
    rot = _C0_ROT[rep.case0_pair]
    rscene = rotate_scene_ccw(scene, rot)
    rrep = staircase_sharing(rscene)
    star = rrep.extremal["R"]
    assert star == rrep.extremal["B"]
    trace.append(("case0", rep.case0_pair, star))
    guards = _hole_vertex_partition_guards(
        rscene, lambda: _se_replacement_guards(rscene, star))
    return unrotate_guards(guards, rscene, rot)


def _case1_guards(scene: Scene, rep: SharingReport, trace, label="case1") -> list:
    min_kind = min((RRS, RS, FS, RFS), key=lambda k: (rep.staircases[k].stairs, k))
    rot = _MIN_STAIR_ROT[min_kind]
    rscene = rotate_scene_ccw(scene, rot)
    st = build_staircase(rscene, RRS)
    trace.append((label, min_kind, st.stairs))
    guards = _hole_vertex_partition_guards(
        rscene, lambda: staircase_guards(rscene, st))
    return unrotate_guards(guards, rscene, rot)


def _case2_guards(scene: Scene, rep: SharingReport, trace) -> list:
    pair = rep.opposite_shared[0][0]
    rot = 0 if pair == (RS, RRS) else 1
    rscene = rotate_scene_ccw(scene, rot)
    rrep = staircase_sharing(rscene)
    shared = sorted(rrep.shared[(RS, RRS)])
    assert shared, "case 2 dispatch without an (RS,RRS)-shared building"
    bi = shared[0]
    h = rscene.holes[bi]
    trace.append(("case2", bi))
    guards = [hole_guard(bi, 3, E), hole_guard(bi, 1, E),
              hole_guard(bi, 3, W), hole_guard(bi, 1, W)]
    for i, o in enumerate(rscene.holes):
        if i == bi:
            continue
        in_city1 = o.y0 > h.y1 or (o.x0 > h.x1 and o.y0 > h.y0)
        facing = E if in_city1 else W
        guards.append(hole_guard(i, 3, facing))  # NW corner
        guards.append(hole_guard(i, 1, facing))  # SE corner
    return unrotate_guards(guards, rscene, rot)


def _subscene(bounds: AxisRect, scene: Scene, ids) -> tuple:
    holes = tuple(scene.holes[i] for i in ids)
    return Scene(bounds=bounds, holes=holes, _allow_boundary_contact=True), list(ids)


def _remap(guards, id_map):
    out = []
    for g in guards:
        if g.on_hole():
            out.append(Guard(anchor=("hole", id_map[g.anchor[1]], g.anchor[2]),
                             facing=g.facing))
        else:
            raise PlacementIncompleteError("sub-city produced a bounding-rectangle guard")
    return out


def _case3_guards(scene: Scene, rep: SharingReport, trace, depth) -> list:
    qualifiers = [(abs(a - b), hid, pair, a, b)
                  for (pair, hid, a, b) in rep.adjacent_internal
                  if a >= 3 and b >= 3]
    if not qualifiers:
        return _case1_guards(scene, rep, trace, label="case3-fallback")
    _, hid, pair, alpha, beta = min(qualifiers)
    rot = _ADJ_PAIR_ROT[pair]
    rscene = rotate_scene_ccw(scene, rot)
    rrep = staircase_sharing(rscene)
    entry = next(e for e in rrep.adjacent_internal
                 if e[0] == (RS, FS) and _same_hole(scene, rscene, hid, e[1]))
    bj = entry[1]
    h = rscene.holes[bj]
    b = rscene.bounds
    above = [i for i, o in enumerate(rscene.holes) if o.y0 > h.y1]
    strip = [i for i, o in enumerate(rscene.holes)
             if i != bj and o.y0 < h.y1 and o.y1 > h.y0]
    guards = []
    if not strip:
        # city_1 = slab above the bottom edge, B_j included on its floor
        trace.append(("case3i", bj, alpha, beta))
        sub1, ids1 = _subscene(AxisRect(b.x0, h.y0, b.x1, b.y1), rscene, above + [bj])
        sub_guards = _hole_vertex_partition_guards(
            sub1, lambda: _se_replacement_guards(sub1, len(ids1) - 1))
        guards.extend(_remap(sub_guards, ids1))
        below = [i for i in range(rscene.k) if i != bj and i not in above]
        sub2, ids2 = _subscene(AxisRect(b.x0, b.y0, b.x1, h.y0), rscene, below)
        guards.extend(_remap(_guards_main_scene(sub2, trace, depth + 1), ids2))
    else:
        # city_1 = slab above the top edge; B_j goes with city_2
        trace.append(("case3ii", bj, alpha, beta))
        sub1, ids1 = _subscene(AxisRect(b.x0, h.y1, b.x1, b.y1), rscene, above)
        sub_guards = _hole_vertex_partition_guards(
            sub1, lambda: [])
        guards.extend(_remap(sub_guards, ids1))
        guards.append(hole_guard(bj, 2, N))  # NE corner, facing city_1
        below = [i for i in range(rscene.k) if i not in above]
        sub2, ids2 = _subscene(AxisRect(b.x0, b.y0, b.x1, h.y1), rscene, below)
        guards.extend(_remap(_guards_main_scene(sub2, trace, depth + 1), ids2))
    return unrotate_guards(guards, rscene, rot)


def _same_hole(scene: Scene, rscene: Scene, hid: int, rhid: int) -> bool:
    return hid == rhid  # rotation preserves hole indices


def _guards_main_scene(scene: Scene, trace, depth=0) -> list:
    if depth > scene.k + 8:
        raise PlacementIncompleteError("case-3 recursion failed to terminate")
    rep = staircase_sharing(scene)
    case = rep.case
    if case == 0:
        return _case0_guards(scene, rep, trace)
    if case in (2, 4):
        return _case2_guards(scene, rep, trace)
    if case == 3:
        return _case3_guards(scene, rep, trace, depth)
    return _case1_guards(scene, rep, trace)


def guards_main(scene: Scene) -> Solution:
    """<= 2k + floor(k/4) + 4 guards, all anchored on hole vertices."""
    scene = validate_scene(scene)
    require_general_position(scene)
    if scene.kind != AXIS_ALIGNED:
        raise ValueError("guards_main is defined for axis-aligned scenes")
    if scene.k < 1:
        raise ValueError("guards_main needs at least one hole")
    trace = []
    guards = _guards_main_scene(scene, trace)
    sol = Solution(algorithm="walls-main", guards=tuple(guards), trace=tuple(trace))
    if any(not g.on_hole() for g in sol.guards):
        raise PlacementIncompleteError("guards_main produced a non-hole anchor")
    bound = 2 * scene.k + scene.k // 4 + 4
    if sol.count > bound:
        raise PlacementIncompleteError(
            f"guards_main used {sol.count} guards, bound is {bound}")
    if not covers(scene, sol.guards):
        cert = certify(scene, sol.guards)
        raise PlacementIncompleteError("main placement left a residual",
                                       witness=cert.witness)
    return sol


# ---------------------------------------------------------------------------
# City guarding: walls + ground + roofs
# ---------------------------------------------------------------------------


def _roof_front_facings(scene: Scene, g: Guard):
    hole = scene.holes[g.anchor[1]]
    v = g.position(scene)
    out = []
    for f in wall_aligned_facings(hole):
        if all((c.x - v.x) * f[0] + (c.y - v.y) * f[1] >= 0 for c in hole.corners()):
            out.append(f)
    return out


def _repair_roofs(city: City, guards: list, trace) -> list:
    """Re-orient single guards so every roof sees a same-building guard,
    keeping the free-space certificate intact and the count unchanged."""
    scene = city.scene
    for i in range(scene.k):
        building = city.building(i)
        if any(roof_covered_by(building, g, scene) for g in guards):
            continue
        own = [(idx, g) for idx, g in enumerate(guards)
               if g.on_hole() and g.anchor[1] == i]
        repaired = False
        for idx, g in own:
            for f in _roof_front_facings(scene, g):
                candidate = list(guards)
                candidate[idx] = Guard(anchor=g.anchor, facing=f)
                if covers(scene, candidate):
                    guards = candidate
                    trace.append(("roof-fix", i, g.anchor, f))
                    repaired = True
                    break
            if repaired:
                break
        if not repaired:
            raise PlacementIncompleteError(f"roof of building {i} cannot be repaired")
    return guards


def city_guarding(city: City, mode: str = BUILDINGS_ONLY) -> Solution:
    scene = project(city)
    scene = validate_scene(scene)
    require_general_position(scene)
    if mode == BUILDINGS_ONLY:
        if scene.k == 0:
            raise ValueError("no building vertices exist to place guards on")
        base = guards_main(scene)
    elif mode == ALLOW_P_CORNER:
        base = guards_2k1(scene)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    trace = list(base.trace) + [("mode", mode)]
    guards = _repair_roofs(city, list(base.guards), trace)
    sol = Solution(algorithm="city", guards=tuple(guards), trace=tuple(trace))
    from cityguard.verify import certify_city
    cert = certify_city(city, sol)
    if not cert.covered:
        raise PlacementIncompleteError("city placement failed certification",
                                       witness=cert.witness)
    return sol
