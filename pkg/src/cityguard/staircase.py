"""The four boundary staircases of an axis-aligned scene.

Each staircase is the maximal region in one corner quadrant of P whose
boundary chain is formed by extending hole edges (rising staircase:
horizontal edges East, then vertical edges South, per the construction).
Equivalently, and much easier to compute exactly: the rising staircase
is P minus the open South-East quadrants of every hole's North-West
corner; the chain's reflex vertices are exactly the Pareto-optimal
corners of that quadrant family.  The other three kinds are symmetric.

Kind -> removed quadrant (corner of each hole, open):
  RS   top-left region,     SE quadrants of NW corners
  FS   top-right region,    SW quadrants of NE corners
  RRS  bottom-right region, NW quadrants of SE corners
  RFS  bottom-left region,  NE quadrants of SW corners
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cityguard.errors import DegeneratePositionError, EmptyStaircaseError
from cityguard.geom import AxisRect, Point, PolygonSet
from cityguard.model import E, N, S, W, Scene, check_general_position, hole_guard

RS, FS, RRS, RFS = "RS", "FS", "RRS", "RFS"
KINDS = (RS, FS, RRS, RFS)

ADJACENT_PAIRS = ((RS, FS), (FS, RRS), (RRS, RFS), (RFS, RS))
OPPOSITE_PAIRS = ((RS, RRS), (FS, RFS))

# kind -> (corner index of the quadrant apex, x-dominance sign, y-dominance sign)
# Corner (cx, cy) with signs (sx, sy): quadrant {sx*(x-cx) > 0, sy*(y-cy) > 0}.
_QUADRANT = {
    RS: (3, 1, -1),   # NW corner, open SE quadrant
    FS: (2, -1, -1),  # NE corner, open SW quadrant
    RRS: (1, -1, 1),  # SE corner, open NW quadrant
    RFS: (0, 1, 1),   # SW corner, open NE quadrant
}


@dataclass(frozen=True)
class Staircase:
    kind: str
    chain: tuple                 # monotone orthogonal polyline, stair to stair
    reflex_vertices: tuple       # ((Point, building id), ...) along the chain
    buildings: frozenset
    region: PolygonSet           # the staircase region itself

    @property
    def stairs(self) -> int:
        return len(self.reflex_vertices)


def _apex(hole: AxisRect, kind: str) -> Point:
    return hole.corners()[_QUADRANT[kind][0]]


def _pareto(scene: Scene, kind: str):
    """Hole ids whose quadrant apex is not dominated; sorted along the chain."""
    _, sx, sy = _QUADRANT[kind]
    apexes = [(i, _apex(h, kind)) for i, h in enumerate(scene.holes)]
    keep = []
    for i, a in apexes:
        dominated = False
        for j, b in apexes:
            if i == j:
                continue
            # quadrant of b contains quadrant of a
            if sx * (b.x - a.x) <= 0 and sy * (b.y - a.y) <= 0 and (a != b):
                dominated = True
                break
        if not dominated:
            keep.append((i, a))
    # chain runs in +x direction for all kinds
    keep.sort(key=lambda t: t[1].x)
    return keep


def build_staircase(scene: Scene, kind: str) -> Staircase:
    if scene.kind != "AXIS_ALIGNED":
        raise ValueError("staircases are defined for axis-aligned scenes only")
    if check_general_position(scene):
        raise DegeneratePositionError("staircase construction needs general position")
    b = scene.bounds
    corner_idx, sx, sy = _QUADRANT[kind]
    pareto = _pareto(scene, kind)

    region = PolygonSet.from_rect(b.x0, b.y0, b.x1, b.y1)
    for i, a in pareto:
        qx0 = a.x if sx > 0 else b.x0
        qx1 = b.x1 if sx > 0 else a.x
        qy0 = a.y if sy > 0 else b.y0
        qy1 = b.y1 if sy > 0 else a.y
        if qx0 < qx1 and qy0 < qy1:
            region = region.difference(PolygonSet.from_rect(qx0, qy0, qx1, qy1))

    chain = _chain_points(b, kind, [a for _, a in pareto])
    reflex = tuple((a, i) for i, a in pareto)
    return Staircase(kind=kind, chain=tuple(chain), reflex_vertices=reflex,
                     buildings=frozenset(i for i, _ in pareto), region=region)


def _chain_points(b: AxisRect, kind: str, apexes):
    """The boundary chain through the apexes, traversed in +x direction.

    Vertical pieces are hole edges with their extension, horizontal pieces
    likewise; e.g. for RS the pieces are left edges extended South and top
    edges extended East.
    """
    apexes = sorted(apexes, key=lambda p: p.x)
    pts = []
    if not apexes:
        return pts
    if kind == RS:       # bottom edge -> apexes (NW corners) -> right edge
        pts.append(Point(apexes[0].x, b.y0))
        for i, a in enumerate(apexes):
            pts.append(a)
            nxt = apexes[i + 1].x if i + 1 < len(apexes) else b.x1
            pts.append(Point(nxt, a.y))
    elif kind == FS:     # left edge -> apexes (NE corners) -> bottom edge
        pts.append(Point(b.x0, apexes[0].y))
        for i, a in enumerate(apexes):
            pts.append(a)
            if i + 1 < len(apexes):
                pts.append(Point(a.x, apexes[i + 1].y))
            else:
                pts.append(Point(a.x, b.y0))
    elif kind == RRS:    # left edge -> apexes (SE corners) -> top edge
        pts.append(Point(b.x0, apexes[0].y))
        for i, a in enumerate(apexes):
            pts.append(a)
            if i + 1 < len(apexes):
                pts.append(Point(a.x, apexes[i + 1].y))
            else:
                pts.append(Point(a.x, b.y1))
    else:                # RFS: top edge -> apexes (SW corners) -> right edge
        pts.append(Point(apexes[0].x, b.y1))
        for i, a in enumerate(apexes):
            pts.append(a)
            nxt = apexes[i + 1].x if i + 1 < len(apexes) else b.x1
            pts.append(Point(nxt, a.y))
    return pts


# kind -> (facing along the stairs, facing down the stairs, extreme-stair picker).
# The along-guard on stair i covers the slab up to the next stair line; the
# extra guard on the extreme stair covers the remaining boundary slab.
_GUARD_PATTERN = {
    RRS: (E, S, lambda rv: rv[0].y),     # extra on the lowest stair
    RS: (W, N, lambda rv: -rv[0].y),     # extra on the highest stair
    FS: (N, E, lambda rv: -rv[0].x),     # extra on the rightmost stair
    RFS: (S, W, lambda rv: rv[0].x),     # extra on the leftmost stair
}


def staircase_guards(scene: Scene, st: Staircase):
    """Guard pattern for a staircase, canonically RRS; others by symmetry.

    One guard per reflex vertex facing along the stairs plus one extra on
    the extreme stair facing down the stairs; |guards| = stairs + 1.
    """
    if st.stairs == 0:
        raise EmptyStaircaseError(f"{st.kind} staircase of a k=0 scene has no stairs")
    along, down, extreme_key = _GUARD_PATTERN[st.kind]
    corner_idx = _QUADRANT[st.kind][0]
    guards = []
    for (pt, hid) in st.reflex_vertices:
        guards.append(hole_guard(hid, corner_idx, along))
    extreme = min(st.reflex_vertices, key=extreme_key)
    guards.append(hole_guard(extreme[1], corner_idx, down))
    return guards


@dataclass(frozen=True)
class SharingReport:
    extremal: dict              # "L"/"T"/"R"/"B" -> building id
    staircases: dict            # kind -> Staircase
    shared: dict                # (kind, kind) -> frozenset of building ids
    case0_pair: Optional[tuple]          # coinciding extremal pair, if any
    opposite_shared: tuple               # ((pair, building id), ...)
    adjacent_internal: tuple             # ((pair, building id, alpha, beta), ...)

    @property
    def case(self) -> int:
        if self.case0_pair is not None:
            return 0
        if self.opposite_shared and self.adjacent_internal:
            return 4
        if self.opposite_shared:
            return 2
        if self.adjacent_internal:
            return 3
        return 1


def _extremal_ids(scene: Scene) -> dict:
    holes = scene.holes
    return {
        "L": min(range(scene.k), key=lambda i: holes[i].x0),
        "T": max(range(scene.k), key=lambda i: holes[i].y1),
        "R": max(range(scene.k), key=lambda i: holes[i].x1),
        "B": min(range(scene.k), key=lambda i: holes[i].y0),
    }


def _alpha_beta(scene: Scene, hid: int, pair) -> tuple:
    """Counts above/below the dividing line for an adjacent-shared building.

    For the top pair (RS, FS) the line supports the hole's top edge; the
    other pairs are the 90-degree rotations of that statement.
    """
    h = scene.holes[hid]
    if pair == (RS, FS):        # above / below the top edge line
        above = sum(1 for o in scene.holes if o.y0 > h.y1)
    elif pair == (FS, RRS):     # right / left of the right edge line
        above = sum(1 for o in scene.holes if o.x0 > h.x1)
    elif pair == (RRS, RFS):    # below / above the bottom edge line
        above = sum(1 for o in scene.holes if o.y1 < h.y0)
    else:                       # (RFS, RS): left / right of the left edge line
        above = sum(1 for o in scene.holes if o.x1 < h.x0)
    return above, scene.k - 1 - above


def staircase_sharing(scene: Scene) -> SharingReport:
    if scene.k < 1:
        raise ValueError("sharing analysis needs k >= 1")
    if check_general_position(scene):
        raise DegeneratePositionError("sharing analysis needs general position")
    stairs = {kind: build_staircase(scene, kind) for kind in KINDS}
    ext = _extremal_ids(scene)
    shared = {}
    for pair in ADJACENT_PAIRS + OPPOSITE_PAIRS:
        shared[pair] = stairs[pair[0]].buildings & stairs[pair[1]].buildings

    case0_pair = None
    for a, b in (("L", "T"), ("T", "R"), ("R", "B"), ("B", "L")):
        if ext[a] == ext[b]:
            case0_pair = (a, b)
            break

    extremal_set = set(ext.values())
    opposite = tuple(
        (pair, hid) for pair in OPPOSITE_PAIRS for hid in sorted(shared[pair])
    )
    adjacent = tuple(
        (pair, hid) + _alpha_beta(scene, hid, pair)
        for pair in ADJACENT_PAIRS
        for hid in sorted(shared[pair])
        if hid not in extremal_set
    )
    return SharingReport(extremal=ext, staircases=stairs, shared=shared,
                         case0_pair=case0_pair, opposite_shared=opposite,
                         adjacent_internal=adjacent)
