"""Exact 2D primitives over rational coordinates.

Coordinates are Python ints or fractions.Fraction; mixing the two is fine
and integer inputs stay integers through the fast predicate paths.  A
region (PolygonSet) is a union of convex cells with pairwise disjoint
interiors, which makes boolean operations, exact areas and emptiness
tests straightforward: area(set) is simply the sum of cell areas.

The representation is regularized: cells are closed and zero-area pieces
are dropped, so a PolygonSet always equals the closure of its interior.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence, Union

from cityguard.errors import MalformedPolygonError

Rational = Union[int, Fraction]

CCW = 1
COLLINEAR = 0
CW = -1


def rational(value) -> Rational:
    """Parse a rational literal: an int, a Fraction, or a string 'p/q' (q > 0)."""
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/", 1)
            den_i = int(den)
            if den_i <= 0:
                raise ValueError(f"rational denominator must be positive: {value!r}")
            f = Fraction(int(num), den_i)
        else:
            f = Fraction(int(value))
        return int(f) if f.denominator == 1 else f
    raise TypeError(f"not a rational literal: {value!r}")


def rational_str(value: Rational) -> Union[int, str]:
    """Canonical JSON form: plain int when integral, else 'p/q' in lowest terms."""
    f = Fraction(value)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


class Point(NamedTuple):
    x: Rational
    y: Rational


class Segment(NamedTuple):
    a: Point
    b: Point


def make_segment(a: Point, b: Point) -> Segment:
    if a == b:
        raise ValueError(f"degenerate segment at {a}")
    return Segment(a, b)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the exact cross product (b-a) x (c-a)."""
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if v > 0:
        return CCW
    if v < 0:
        return CW
    return COLLINEAR


def cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def dot(ux, uy, vx, vy):
    return ux * vx + uy * vy


def half_plane_contains(origin: Point, facing: tuple, p: Point) -> bool:
    """Closed half-plane test: (p - origin) . facing >= 0."""
    fx, fy = facing
    if fx == 0 and fy == 0:
        raise ValueError("facing must be a nonzero direction")
    return (p.x - origin.x) * fx + (p.y - origin.y) * fy >= 0


def primitive_direction(dx: Rational, dy: Rational) -> tuple:
    """Reduce a nonzero direction to a canonical primitive integer vector."""
    if dx == 0 and dy == 0:
        raise ValueError("zero direction")
    fx, fy = Fraction(dx), Fraction(dy)
    den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
    ix, iy = int(fx * den), int(fy * den)
    g = gcd(abs(ix), abs(iy))
    return (ix // g, iy // g)


# ---------------------------------------------------------------------------
# Convex cells
# ---------------------------------------------------------------------------

Cell = tuple  # tuple of Points, CCW, convex


def cell_area2(cell: Cell):
    """Twice the signed area (positive for CCW)."""
    s = 0
    n = len(cell)
    for i in range(n):
        a = cell[i]
        b = cell[(i + 1) % n]
        s += a.x * b.y - b.x * a.y
    return s


def normalize_cell(points: Sequence[Point]):
    """Drop collinear/duplicate vertices; return a CCW convex cell or None if flat."""
    pts = []
    n = len(points)
    for i in range(n):
        p = points[i]
        if pts and p == pts[-1]:
            continue
        pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 3:
        return None
    out = []
    m = len(pts)
    for i in range(m):
        prev = pts[i - 1]
        cur = pts[i]
        nxt = pts[(i + 1) % m]
        if orient(prev, cur, nxt) != COLLINEAR:
            out.append(cur)
    if len(out) < 3:
        return None
    cell = tuple(out)
    if cell_area2(cell) <= 0:
        return None
    return cell


def cell_contains(cell: Cell, p: Point) -> bool:
    n = len(cell)
    for i in range(n):
        a = cell[i]
        b = cell[(i + 1) % n]
        if cross(a.x, a.y, b.x, b.y, p.x, p.y) < 0:
            return False
    return True


def cell_bbox(cell: Cell):
    xs = [p.x for p in cell]
    ys = [p.y for p in cell]
    return (min(xs), min(ys), max(xs), max(ys))


def _line_intersection(a: Point, b: Point, p: Point, q: Point) -> Point:
    """Intersection of lines ab and pq (caller guarantees non-parallel)."""
    d1x, d1y = b.x - a.x, b.y - a.y
    d2x, d2y = q.x - p.x, q.y - p.y
    den = d1x * d2y - d1y * d2x
    t = Fraction((p.x - a.x) * d2y - (p.y - a.y) * d2x, den)
    x = a.x + t * d1x
    y = a.y + t * d1y
    return Point(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x,
                 int(y) if isinstance(y, Fraction) and y.denominator == 1 else y)


def clip_cell_halfplane(cell: Cell, a: Point, b: Point):
    """Clip a convex cell to the closed half-plane left of the directed line a->b.

    Returns a convex cell or None when the intersection has zero area.
    """
    ax, ay = a
    dx, dy = b.x - ax, b.y - ay
    sides = [dx * (p.y - ay) - dy * (p.x - ax) for p in cell]
    neg = pos = False
    for s in sides:
        if s < 0:
            neg = True
        elif s > 0:
            pos = True
    if not neg:
        return cell
    if not pos:
        return None
    out = []
    n = len(cell)
    for i in range(n):
        p, sp = cell[i], sides[i]
        j = i + 1 if i + 1 < n else 0
        q, sq = cell[j], sides[j]
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = Fraction(sp, sp - sq)
            x = p.x + t * (q.x - p.x)
            y = p.y + t * (q.y - p.y)
            out.append(Point(int(x) if x.denominator == 1 else x,
                             int(y) if y.denominator == 1 else y))
    return normalize_cell(out)


def cell_intersection(c1: Cell, c2: Cell):
    cur = c1
    n = len(c2)
    for i in range(n):
        cur = clip_cell_halfplane(cur, c2[i], c2[(i + 1) % n])
        if cur is None:
            return None
    return cur


def cell_difference(c1: Cell, c2: Cell):
    """c1 minus c2 as a list of interior-disjoint convex pieces."""
    b1 = cell_bbox(c1)
    b2 = cell_bbox(c2)
    if b1[2] <= b2[0] or b2[2] <= b1[0] or b1[3] <= b2[1] or b2[3] <= b1[1]:
        return [c1]
    if all(cell_contains(c2, v) for v in c1):
        return []  # convex containment: c1 vanishes without any clipping
    pieces = []
    rest = c1
    n = len(c2)
    for i in range(n):
        a, b = c2[i], c2[(i + 1) % n]
        outside = clip_cell_halfplane(rest, b, a)  # right of a->b
        if outside is not None:
            pieces.append(outside)
        rest = clip_cell_halfplane(rest, a, b)
        if rest is None:
            break
    return pieces


class PolygonSet:
    """A (possibly empty, possibly multi-face) region: disjoint convex cells."""

    __slots__ = ("cells", "_hcells")

    def __init__(self, cells: Iterable[Cell] = ()):
        self.cells = tuple(c for c in cells if c is not None)
        self._hcells = None

    def hcells(self):
        """Cells in homogeneous integer form for the fast clipping path."""
        if self._hcells is None:
            self._hcells = tuple(h_cell(c) for c in self.cells)
        return self._hcells

    @staticmethod
    def empty() -> "PolygonSet":
        return PolygonSet(())

    @staticmethod
    def from_cells(cells: Iterable[Sequence[Point]]) -> "PolygonSet":
        out = []
        for c in cells:
            cc = normalize_cell([Point(p[0], p[1]) for p in c])
            if cc is not None:
                out.append(cc)
        return PolygonSet(out)

    @staticmethod
    def from_rect(x0, y0, x1, y1) -> "PolygonSet":
        if not (x0 < x1 and y0 < y1):
            raise MalformedPolygonError(f"rectangle [{x0},{y0};{x1},{y1}] has no area")
        return PolygonSet((
            (Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)),
        ))

    @staticmethod
    def from_ring(points: Sequence[Point]) -> "PolygonSet":
        """Build from a simple polygon ring (any orientation) by ear clipping."""
        ring = _checked_simple_ring(points)
        return PolygonSet(_ear_clip(ring))

    def is_empty(self) -> bool:
        return not self.cells

    def area(self) -> Fraction:
        return sum((Fraction(cell_area2(c)) for c in self.cells), Fraction(0)) / 2

    def contains(self, p: Point) -> bool:
        return any(cell_contains(c, p) for c in self.cells)

    def bbox(self):
        if not self.cells:
            return None
        boxes = [cell_bbox(c) for c in self.cells]
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    def union(self, other: "PolygonSet") -> "PolygonSet":
        extra = other.difference(self)
        return PolygonSet(self.cells + extra.cells)

    def intersection(self, other: "PolygonSet") -> "PolygonSet":
        out = []
        for c1 in self.cells:
            b1 = cell_bbox(c1)
            for c2 in other.cells:
                b2 = cell_bbox(c2)
                if b1[2] <= b2[0] or b2[2] <= b1[0] or b1[3] <= b2[1] or b2[3] <= b1[1]:
                    continue
                inter = cell_intersection(c1, c2)
                if inter is not None:
                    out.append(inter)
        return PolygonSet(out)

    def difference(self, other: "PolygonSet") -> "PolygonSet":
        pieces = list(self.cells)
        for c2 in other.cells:
            if not pieces:
                break
            nxt = []
            for c1 in pieces:
                nxt.extend(cell_difference(c1, c2))
            pieces = nxt
        return PolygonSet(pieces)

    def rings(self):
        """Serializable form: one CCW ring per cell."""
        return [[(p.x, p.y) for p in c] for c in self.cells]

    def __repr__(self):
        return f"PolygonSet({len(self.cells)} cells, area={self.area()})"


def polygon_boolean(a: PolygonSet, b: PolygonSet, op: str) -> PolygonSet:
    if op == "UNION":
        return a.union(b)
    if op == "INTERSECTION":
        return a.intersection(b)
    if op == "DIFFERENCE":
        return a.difference(b)
    raise ValueError(f"unknown boolean op {op!r}")


def _checked_simple_ring(points: Sequence[Point]):
    pts = [Point(p[0], p[1]) for p in points]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 3:
        raise MalformedPolygonError("ring needs at least 3 distinct vertices")
    n = len(pts)
    area2 = 0
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a == b:
            raise MalformedPolygonError("repeated consecutive vertex")
        area2 += a.x * b.y - b.x * a.y
    if area2 == 0:
        raise MalformedPolygonError("ring has zero area")
    if area2 < 0:
        pts.reverse()
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = pts[j], pts[(j + 1) % n]
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_cross(a, b, c, d):
                raise MalformedPolygonError(f"self-intersecting boundary near {a}-{b} / {c}-{d}")
    return pts


def _segments_cross(a, b, c, d) -> bool:
    """True if closed segments ab and cd share any point (non-adjacent case)."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    def on(a, b, p):
        return orient(a, b, p) == 0 and min(a.x, b.x) <= p.x <= max(a.x, b.x) \
            and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    return on(a, b, c) or on(a, b, d) or on(c, d, a) or on(c, d, b)


def _ear_clip(ring):
    """Triangulate a simple CCW ring into disjoint triangles (exact)."""
    pts = list(ring)
    tris = []
    guard = 0
    while len(pts) > 3:
        guard += 1
        if guard > 10000:
            raise MalformedPolygonError("ear clipping failed; ring is not simple")
        n = len(pts)
        clipped = False
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if orient(a, b, c) != CCW:
                continue
            ear = (a, b, c)
            ok = True
            for p in pts:
                if p in ear:
                    continue
                if cell_contains(ear, p):
                    ok = False
                    break
            if ok:
                tris.append(ear)
                del pts[i]
                clipped = True
                break
        if not clipped:
            raise MalformedPolygonError("no ear found; ring is not simple")
    last = normalize_cell(pts)
    if last is not None:
        tris.append(last)
    return [t for t in tris if cell_area2(t) > 0]


# ---------------------------------------------------------------------------
# Axis rectangles and rotated rectangular quads
# ---------------------------------------------------------------------------


class AxisRect(NamedTuple):
    """Axis-aligned rectangle given by min-corner and max-corner."""

    x0: Rational
    y0: Rational
    x1: Rational
    y1: Rational

    @property
    def lo(self) -> Point:
        return Point(self.x0, self.y0)

    @property
    def hi(self) -> Point:
        return Point(self.x1, self.y1)

    def corners(self):
        """CCW from the min-corner: 0=SW, 1=SE, 2=NE, 3=NW."""
        return (Point(self.x0, self.y0), Point(self.x1, self.y0),
                Point(self.x1, self.y1), Point(self.x0, self.y1))

    def contains_open(self, p: Point) -> bool:
        return self.x0 < p.x < self.x1 and self.y0 < p.y < self.y1

    def contains_closed(self, p: Point) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def as_cell(self) -> Cell:
        return self.corners()


def make_axis_rect(x0, y0, x1, y1) -> AxisRect:
    if not (x0 < x1 and y0 < y1):
        raise ValueError(f"AxisRect needs positive area, got [{x0},{y0};{x1},{y1}]")
    return AxisRect(x0, y0, x1, y1)


class ConvexQuad(NamedTuple):
    """Strictly convex quadrilateral, vertices in CCW order."""

    v: tuple

    def corners(self):
        return self.v

    def contains_open(self, p: Point) -> bool:
        for i in range(4):
            a, b = self.v[i], self.v[(i + 1) % 4]
            if cross(a.x, a.y, b.x, b.y, p.x, p.y) <= 0:
                return False
        return True

    def contains_closed(self, p: Point) -> bool:
        return cell_contains(self.v, p)

    def as_cell(self) -> Cell:
        return self.v


def make_convex_quad(points) -> ConvexQuad:
    pts = tuple(Point(p[0], p[1]) for p in points)
    if len(pts) != 4:
        raise ValueError("ConvexQuad needs exactly 4 vertices")
    for i in range(4):
        if orient(pts[i - 1], pts[i], pts[(i + 1) % 4]) != CCW:
            raise ValueError("ConvexQuad vertices must be strictly convex in CCW order")
    return ConvexQuad(pts)


def is_rectangle(quad: ConvexQuad) -> bool:
    """Adjacent edges perpendicular and opposite edges of equal length."""
    v = quad.v
    e = [(v[(i + 1) % 4].x - v[i].x, v[(i + 1) % 4].y - v[i].y) for i in range(4)]
    for i in range(4):
        if dot(e[i][0], e[i][1], e[(i + 1) % 4][0], e[(i + 1) % 4][1]) != 0:
            return False
    return (e[0][0] ** 2 + e[0][1] ** 2 == e[2][0] ** 2 + e[2][1] ** 2
            and e[1][0] ** 2 + e[1][1] ** 2 == e[3][0] ** 2 + e[3][1] ** 2)


Hole = Union[AxisRect, ConvexQuad]


# ---------------------------------------------------------------------------
# Homogeneous integer cells: the exact fast path for residual computation.
#
# A point is (X, Y, W) with integer components and W > 0, representing
# (X/W, Y/W).  Sides, orientations and clipping are pure big-integer
# arithmetic; gcd reduction happens only when coordinates grow large.
# An HCell carries its vertices, the directed edge lines (left side is
# the interior) and a conservatively inflated float bounding box used
# purely as a prefilter.
# ---------------------------------------------------------------------------

_H_REDUCE_BITS = 256


def h_point(p: Point):
    x, y = p
    if isinstance(x, int) and isinstance(y, int):
        return (x, y, 1)
    fx, fy = Fraction(x), Fraction(y)
    w = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
    return (int(fx * w), int(fy * w), w)


def h_to_point(h) -> Point:
    X, Y, W = h
    if W == 1:
        return Point(X, Y)
    fx, fy = Fraction(X, W), Fraction(Y, W)
    return Point(int(fx) if fx.denominator == 1 else fx,
                 int(fy) if fy.denominator == 1 else fy)


def _h_reduce(h):
    X, Y, W = h
    if W.bit_length() > _H_REDUCE_BITS:
        g = gcd(gcd(abs(X), abs(Y)), W)
        if g > 1:
            return (X // g, Y // g, W // g)
    return h


def _h_line(a, b):
    """Directed line a->b as (A, B, C); side(p) = A*X + B*Y + C*W, left > 0."""
    return (a[1] * b[2] - b[1] * a[2],
            b[0] * a[2] - a[0] * b[2],
            a[0] * b[1] - b[0] * a[1])


def _h_orient(a, b, c) -> int:
    d = (a[0] * (b[1] * c[2] - c[1] * b[2])
         - a[1] * (b[0] * c[2] - c[0] * b[2])
         + a[2] * (b[0] * c[1] - c[0] * b[1]))
    return 1 if d > 0 else (-1 if d < 0 else 0)


class HCell:
    __slots__ = ("pts", "lines", "bbox")

    def __init__(self, pts):
        self.pts = pts
        n = len(pts)
        self.lines = tuple(_h_line(pts[i], pts[i + 1 if i + 1 < n else 0])
                           for i in range(n))
        xs = [p[0] / p[2] for p in pts]
        ys = [p[1] / p[2] for p in pts]
        pad_x = (max(map(abs, xs)) + 1.0) * 1e-12
        pad_y = (max(map(abs, ys)) + 1.0) * 1e-12
        self.bbox = (min(xs) - pad_x, min(ys) - pad_y,
                     max(xs) + pad_x, max(ys) + pad_y)


def h_cell(cell: Cell) -> HCell:
    return HCell(tuple(h_point(p) for p in cell))


def h_cell_to_cell(hc: HCell) -> Cell:
    return tuple(h_to_point(p) for p in hc.pts)


def _h_normalized(pts):
    """Drop duplicate/collinear vertices; None if fewer than 3 remain."""
    out = []
    n = len(pts)
    for i in range(n):
        a = pts[i - 1]
        b = pts[i]
        if a[0] * b[2] == b[0] * a[2] and a[1] * b[2] == b[1] * a[2]:
            continue
        out.append(b)
    m = len(out)
    if m < 3:
        return None
    keep = []
    for i in range(m):
        if _h_orient(out[i - 1], out[i], out[(i + 1) % m]) != 0:
            keep.append(out[i])
    if len(keep) < 3:
        return None
    return tuple(keep)


def _h_clip(pts, line):
    """Clip to the closed left side of the line; 'same' when unchanged,
    None when the intersection has no area."""
    A, B, C = line
    sides = [A * p[0] + B * p[1] + C * p[2] for p in pts]
    neg = pos = False
    for s in sides:
        if s < 0:
            neg = True
        elif s > 0:
            pos = True
    if not neg:
        return pts
    if not pos:
        return None
    out = []
    n = len(pts)
    for i in range(n):
        p, sp = pts[i], sides[i]
        j = i + 1 if i + 1 < n else 0
        q, sq = pts[j], sides[j]
        if sp >= 0:
            out.append(p)
        if (sp > 0 > sq) or (sp < 0 < sq):
            rx = sp * q[0] - sq * p[0]
            ry = sp * q[1] - sq * p[1]
            rw = sp * q[2] - sq * p[2]
            if rw < 0:
                rx, ry, rw = -rx, -ry, -rw
            out.append(_h_reduce((rx, ry, rw)))
    return _h_normalized(out)


def h_difference(c1: HCell, c2: HCell):
    """c1 minus c2 as a list of disjoint HCells (bbox prefilter included)."""
    b1, b2 = c1.bbox, c2.bbox
    if b1[2] <= b2[0] or b2[2] <= b1[0] or b1[3] <= b2[1] or b2[3] <= b1[1]:
        return [c1]
    for (A, B, C) in c2.lines:
        if any(A * p[0] + B * p[1] + C * p[2] < 0 for p in c1.pts):
            break
    else:
        return []  # c1 entirely inside c2
    pieces = []
    rest = c1.pts
    for line in c2.lines:
        outside = _h_clip(rest, (-line[0], -line[1], -line[2]))
        if outside is not None:
            pieces.append(c1 if outside is rest and rest is c1.pts else HCell(outside))
        rest = _h_clip(rest, line)
        if rest is None:
            break
    return pieces


def segment_blocked_by_rect(seg: Segment, hole: Hole) -> bool:
    """True iff the segment meets the hole's open interior.

    Grazing contact with the boundary does not block: the segment is
    clipped to the closed hole and the midpoint of the clipped piece is
    tested for strict interiority, which is exact and handles runs along
    an edge.
    """
    cell = hole.as_cell()
    a, b = seg.a, seg.b
    t0, t1 = Fraction(0), Fraction(1)
    n = len(cell)
    for i in range(n):
        p, q = cell[i], cell[(i + 1) % n]
        # inside is the left side of p->q
        fa = cross(p.x, p.y, q.x, q.y, a.x, a.y)
        fb = cross(p.x, p.y, q.x, q.y, b.x, b.y)
        if fa < 0 and fb < 0:
            return False
        if fa >= 0 and fb >= 0:
            continue
        t = Fraction(fa, fa - fb)
        if fa < 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return False
    if t0 > t1:
        return False
    tm = (t0 + t1) / 2
    mx = a.x + tm * (b.x - a.x)
    my = a.y + tm * (b.y - a.y)
    return hole.contains_open(Point(mx, my))
