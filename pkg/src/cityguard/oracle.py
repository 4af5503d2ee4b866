"""Brute-force optimal oracle over the wall-aligned vertex-guard class.

The free space is refined into an exact arrangement of all candidate
visibility regions; every face is covered by a fixed candidate subset,
so minimum guard count is an exact set-cover instance solved by branch
and bound with a greedy upper bound.  Lower bounds produced this way are
lower bounds within the paper's own guard class (wall-aligned vertex
guards), which is what the necessity theorems quantify over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from cityguard.geom import Point, cell_bbox, cell_difference, cell_intersection
from cityguard.model import (
    City, E, Guard, N, S, Scene, Solution, W, hole_guard, p_corner_guard,
    wall_aligned_facings,
)
from cityguard.verify import free_space
from cityguard.visibility import visibility_region

OPTIMAL = "OPTIMAL"
INFEASIBLE_WITHIN = "INFEASIBLE_WITHIN"
UNCOVERABLE = "UNCOVERABLE"

_P_INWARD = {0: (E, N), 1: (W, N), 2: (W, S), 3: (E, S)}


def candidate_set(scene: Scene, include_p_corners: bool = False):
    """All hole vertices x wall-aligned facings (plus optional P corners)."""
    guards = []
    for i, h in enumerate(scene.holes):
        facings = wall_aligned_facings(h)
        for c in range(4):
            for f in facings:
                guards.append(hole_guard(i, c, f))
    if include_p_corners:
        for c in range(4):
            for f in _P_INWARD[c]:
                guards.append(p_corner_guard(c, f))
    seen, out = set(), []
    for g in guards:
        key = (g.anchor, g.facing)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


@dataclass(frozen=True)
class OracleResult:
    status: str
    count: Optional[int] = None
    solution: Optional[Solution] = None
    witness_point: Optional[Point] = None
    faces: Optional[tuple] = None  # (cell, frozenset of candidate indices)


def build_faces(scene: Scene, candidates, region=None):
    """Refine free space (or a given sub-region) by every candidate region;
    returns (cell, mask) faces."""
    base = free_space(scene) if region is None else region
    faces = [(cell, frozenset()) for cell in base.cells]
    for ci, cand in enumerate(candidates):
        region = visibility_region(scene, cand).region
        rcells = [(c, cell_bbox(c)) for c in region.cells]
        nxt = []
        for (cell, mask) in faces:
            bb = cell_bbox(cell)
            rest = [cell]
            covered_pieces = []
            for rc, rbb in rcells:
                if bb[2] <= rbb[0] or rbb[2] <= bb[0] or bb[3] <= rbb[1] or rbb[3] <= bb[1]:
                    continue
                new_rest = []
                for piece in rest:
                    inter = cell_intersection(piece, rc)
                    if inter is not None:
                        covered_pieces.append(inter)
                    new_rest.extend(cell_difference(piece, rc))
                rest = new_rest
                if not rest:
                    break
            bigger = mask | {ci}
            nxt.extend((p, bigger) for p in covered_pieces)
            nxt.extend((p, mask) for p in rest)
        faces = nxt
    return faces


def _centroid(cell) -> Point:
    n = len(cell)
    return Point(sum(Fraction(p.x) for p in cell) / n,
                 sum(Fraction(p.y) for p in cell) / n)


def optimal_guard_count(scene: Scene, candidates, max_count: int) -> OracleResult:
    faces = build_faces(scene, candidates)
    by_mask = {}
    for cell, mask in faces:
        by_mask.setdefault(mask, []).append(cell)
    if frozenset() in by_mask:
        return OracleResult(status=UNCOVERABLE,
                            witness_point=_centroid(by_mask[frozenset()][0]),
                            faces=tuple(faces))
    masks = sorted(by_mask, key=len)
    minimal = []
    for m in masks:
        if not any(km <= m for km in minimal):
            minimal.append(m)
    best = _min_set_cover(minimal, len(candidates), max_count)
    if best is None:
        return OracleResult(status=INFEASIBLE_WITHIN, count=None, faces=tuple(faces))
    sol = Solution(algorithm="oracle",
                   guards=tuple(candidates[i] for i in sorted(best)))
    return OracleResult(status=OPTIMAL, count=len(best), solution=sol,
                        faces=tuple(faces))


def _min_set_cover(masks, n_candidates, max_count):
    """Exact minimum hitting set of the masks; None if optimum > max_count."""
    if not masks:
        return frozenset()
    cover_of = [frozenset(j for j, m in enumerate(masks) if c in m)
                for c in range(n_candidates)]
    all_faces = frozenset(range(len(masks)))

    # greedy upper bound
    greedy, uncovered = [], set(all_faces)
    while uncovered:
        c = max(range(n_candidates), key=lambda c: len(cover_of[c] & uncovered))
        if not cover_of[c] & uncovered:
            break
        greedy.append(c)
        uncovered -= cover_of[c]
    best = [set(greedy) if not uncovered else None]
    limit = min(max_count, len(greedy) if not uncovered else max_count)

    def dfs(chosen, uncovered):
        if not uncovered:
            if best[0] is None or len(chosen) < len(best[0]):
                best[0] = set(chosen)
            return
        bound = len(best[0]) - 1 if best[0] is not None else limit
        if len(chosen) >= bound + 1:
            return
        # simple lower bound: one candidate covers at most max_cover faces
        max_cover = max(len(cover_of[c] & uncovered) for c in range(n_candidates))
        if max_cover == 0:
            return
        if len(chosen) + (len(uncovered) + max_cover - 1) // max_cover > bound + 1:
            return
        pivot = min(uncovered, key=lambda f: len(masks[f]))
        cands = sorted(masks[pivot], key=lambda c: -len(cover_of[c] & uncovered))
        for c in cands:
            dfs(chosen + [c], uncovered - cover_of[c])

    dfs([], all_faces)
    if best[0] is None or len(best[0]) > max_count:
        return None
    return frozenset(best[0])


def exhaustive_min_cover(scene: Scene, candidates, max_count: int, region=None):
    """Independent check: try all subsets by increasing size (tests only)."""
    faces = build_faces(scene, candidates, region=region)
    masks = {mask for _, mask in faces}
    if frozenset() in masks:
        return None
    for size in range(0, max_count + 1):
        for subset in combinations(range(len(candidates)), size):
            s = set(subset)
            if all(m & s for m in masks):
                return size
    return None


def min_cover_of_region(scene: Scene, candidates, region, max_count: int):
    """Exact minimum number of candidates whose regions cover the region."""
    faces = build_faces(scene, candidates, region=region)
    by_mask = {}
    for cell, mask in faces:
        by_mask.setdefault(mask, []).append(cell)
    if frozenset() in by_mask:
        return None
    masks = sorted(by_mask, key=len)
    minimal = []
    for m in masks:
        if not any(km <= m for km in minimal):
            minimal.append(m)
    best = _min_set_cover(minimal, len(candidates), max_count)
    return None if best is None else len(best)


# ---------------------------------------------------------------------------
# Roof oracle (3D): minimum wall-aligned vertex guards covering all roofs
# ---------------------------------------------------------------------------


def _segment_blocked_by_prism(p1: Point, z1, p2: Point, z2, base, h) -> bool:
    """Does the open 3D segment pass through the prism's open interior?"""
    cell = base.as_cell()
    t0, t1 = Fraction(0), Fraction(1)
    n = len(cell)
    for i in range(n):
        p, q = cell[i], cell[(i + 1) % n]
        fa = (q.x - p.x) * (p1.y - p.y) - (q.y - p.y) * (p1.x - p.x)
        fb = (q.x - p.x) * (p2.y - p.y) - (q.y - p.y) * (p2.x - p.x)
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
    if t0 >= t1:
        return False
    tm = (t0 + t1) / 2
    mid = Point(p1.x + tm * (p2.x - p1.x), p1.y + tm * (p2.y - p1.y))
    if not base.contains_open(mid):
        return False  # the clipped run lies along the boundary
    # xy strictly inside on the open interval (t0, t1); now need z < h there
    if z1 == z2:
        return z1 < h
    if z2 > z1:
        tz = Fraction(h - z1, z2 - z1)  # z < h for t < tz
        return t0 < min(t1, tz)
    tz = Fraction(h - z1, z2 - z1)      # z < h for t > tz
    return max(t0, tz) < t1


def roof_samples(base):
    """Corners, edge midpoints and the centroid of a roof rectangle."""
    cs = base.corners()
    pts = list(cs)
    for i in range(4):
        a, b = cs[i], cs[(i + 1) % 4]
        pts.append(Point(Fraction(a.x + b.x, 2), Fraction(a.y + b.y, 2)))
    pts.append(Point(sum(Fraction(p.x) for p in cs) / 4,
                     sum(Fraction(p.y) for p in cs) / 4))
    return pts


def roof_visible_3d(city: City, g: Guard, target: Point, target_z) -> bool:
    scene = city.scene
    v = g.position(scene)
    vz = city.heights[g.anchor[1]]
    fx, fy = g.facing
    if (target.x - v.x) * fx + (target.y - v.y) * fy < 0:
        return False
    if v == target:
        return True
    for i, h in enumerate(scene.holes):
        if _segment_blocked_by_prism(v, vz, target, target_z, h, city.heights[i]):
            return False
    return True


def roof_cover_sets(city: City, candidates):
    """For each candidate guard, the set of roofs it fully covers (sampled)."""
    samples = [(i, roof_samples(city.scene.holes[i]), city.heights[i])
               for i in range(city.scene.k)]
    out = []
    for g in candidates:
        covered = set()
        for i, pts, hz in samples:
            if all(roof_visible_3d(city, g, p, hz) for p in pts):
                covered.add(i)
        out.append(frozenset(covered))
    return out


def min_roof_guards(city: City, max_count: int):
    """Exact minimum number of wall-aligned vertex guards covering all roofs.

    Coverage per roof is the sampled over-approximation (corners, edge
    midpoints, centroid), so the returned minimum is a valid lower bound
    on the true minimum.  Returns None if optimum > max_count.
    """
    candidates = candidate_set(city.scene, include_p_corners=False)
    cover = roof_cover_sets(city, candidates)
    roofs = set(range(city.scene.k))
    for size in range(0, max_count + 1):
        for subset in combinations(range(len(candidates)), size):
            got = set()
            for ci in subset:
                got |= cover[ci]
            if got >= roofs:
                return size
    return None
