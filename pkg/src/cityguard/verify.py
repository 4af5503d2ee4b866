"""Exact coverage certification: residual region and witness extraction.

A certificate is a proof object: free space minus the union of all guard
visibility regions, computed exactly.  covered <=> the residual has zero
area.  For cities the certificate additionally records a per-building
roof flag (roof covered by a guard on that same building).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from cityguard.geom import (
    AxisRect, Point, PolygonSet, cell_area2, h_cell_to_cell, h_difference,
)
from cityguard.model import City, Scene, Solution, roof_covered_by
from cityguard.visibility import visibility_region


@dataclass(frozen=True)
class Certificate:
    covered: bool
    residual: PolygonSet
    witness: Optional[Point]
    per_guard_regions: tuple
    roof_flags: Optional[tuple] = None


def free_space(scene: Scene) -> PolygonSet:
    """Bounds minus open hole interiors, as disjoint closed cells."""
    b = scene.bounds
    if scene.k == 0:
        return PolygonSet.from_rect(b.x0, b.y0, b.x1, b.y1)
    if scene.kind == "AXIS_ALIGNED":
        return PolygonSet(_axis_free_cells(b, scene.holes))
    region = PolygonSet.from_rect(b.x0, b.y0, b.x1, b.y1)
    return region.difference(PolygonSet(tuple(h.as_cell() for h in scene.holes)))


def _axis_free_cells(b: AxisRect, holes):
    xs = sorted({b.x0, b.x1} | {h.x0 for h in holes} | {h.x1 for h in holes})
    cells = []
    for xl, xr in zip(xs, xs[1:]):
        blocked = sorted((h.y0, h.y1) for h in holes if h.x0 <= xl and xr <= h.x1)
        y = b.y0
        for (lo, hi) in blocked + [(b.y1, b.y1)]:
            if y < lo:
                cells.append((Point(xl, y), Point(xr, y), Point(xr, lo), Point(xl, lo)))
            y = max(y, hi)
    return cells


def _subtract_region(residual, region: PolygonSet):
    """residual: list of HCells; subtracts the region exactly."""
    for c2 in region.hcells():
        if not residual:
            return residual
        b2 = c2.bbox
        nxt = []
        for c1 in residual:
            b1 = c1.bbox
            if b1[2] <= b2[0] or b2[2] <= b1[0] or b1[3] <= b2[1] or b2[3] <= b1[1]:
                nxt.append(c1)
            else:
                nxt.extend(h_difference(c1, c2))
        residual = nxt
    return residual


def covers(scene: Scene, guards) -> bool:
    """Fast path: does the guard set cover free space?  (No certificate kept.)"""
    residual = list(free_space(scene).hcells())
    for g in guards:
        if not residual:
            return True
        residual = _subtract_region(residual, visibility_region(scene, g).region)
    return not residual


def certify(scene: Scene, guards) -> Certificate:
    regions = tuple(visibility_region(scene, g) for g in guards)
    residual = list(free_space(scene).hcells())
    for vr in regions:
        if not residual:
            break
        residual = _subtract_region(residual, vr.region)
    residual_set = PolygonSet(tuple(h_cell_to_cell(c) for c in residual))
    covered = residual_set.is_empty()
    witness = None
    if not covered:
        largest = max(residual_set.cells, key=cell_area2)
        n = len(largest)
        witness = Point(sum(Fraction(p.x) for p in largest) / n,
                        sum(Fraction(p.y) for p in largest) / n)
    return Certificate(covered=covered, residual=residual_set, witness=witness,
                       per_guard_regions=regions)


def certify_city(city: City, solution: Solution) -> Certificate:
    scene = city.scene
    base = certify(scene, solution.guards)
    flags = tuple(
        any(roof_covered_by(city.building(i), g, scene) for g in solution.guards)
        for i in range(scene.k)
    )
    return Certificate(covered=base.covered and all(flags),
                       residual=base.residual, witness=base.witness,
                       per_guard_regions=base.per_guard_regions, roof_flags=flags)
