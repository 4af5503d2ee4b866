"""Canonical file formats: scenes/cities, solutions, certificates.

Instance file:
    { "bounds": [x0, y0, x1, y1],
      "buildings": [ { "base": [x0, y0, x1, y1], "height": h }
                     or { "quad": [[x, y] * 4 CCW], "height": h } ... ] }

Solution file:
    { "algorithm": tag,
      "guards": [ { "anchor": {"building": i, "corner": c}
                    or {"p_corner": c}, "facing": [dx, dy] } ... ] }

Rationals are integer tokens or strings "p/q" with q > 0.  Serialization
is canonical: sorted keys, rationals in lowest terms, corners indexed
0..3 CCW from the min-corner (axis-aligned: 0=SW, 1=SE, 2=NE, 3=NW), so
round trips are byte-stable.  Unknown fields are rejected.
"""

from __future__ import annotations

import json

from cityguard.errors import SceneValidationError
from cityguard.geom import AxisRect, rational, rational_str
from cityguard.model import City, Guard, Scene, Solution, validate_scene


class FormatError(ValueError):
    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _check_keys(obj, allowed, required, path):
    extra = set(obj) - set(allowed)
    if extra:
        raise FormatError(f"unknown fields {sorted(extra)}", path)
    missing = set(required) - set(obj)
    if missing:
        raise FormatError(f"missing fields {sorted(missing)}", path)


def _rat(value, path):
    try:
        return rational(value)
    except (ValueError, TypeError) as e:
        raise FormatError(str(e), path)


def parse_city(doc) -> City:
    _check_keys(doc, {"bounds", "buildings"}, {"bounds"}, "$")
    bounds = doc["bounds"]
    if not (isinstance(bounds, list) and len(bounds) == 4):
        raise FormatError("bounds must be [x0, y0, x1, y1]", "$.bounds")
    raw = {"bounds": [_rat(v, "$.bounds") for v in bounds], "buildings": []}
    heights = []
    for i, b in enumerate(doc.get("buildings", [])):
        path = f"$.buildings[{i}]"
        _check_keys(b, {"base", "quad", "height"}, {"height"}, path)
        if ("base" in b) == ("quad" in b):
            raise FormatError("need exactly one of base/quad", path)
        h = _rat(b["height"], path + ".height")
        if h <= 0:
            raise FormatError("height must be positive", path + ".height")
        heights.append(h)
        if "base" in b:
            if not (isinstance(b["base"], list) and len(b["base"]) == 4):
                raise FormatError("base must be [x0, y0, x1, y1]", path + ".base")
            raw["buildings"].append({"base": [_rat(v, path) for v in b["base"]]})
        else:
            quad = b["quad"]
            if not (isinstance(quad, list) and len(quad) == 4
                    and all(isinstance(p, list) and len(p) == 2 for p in quad)):
                raise FormatError("quad must be [[x, y] * 4]", path + ".quad")
            raw["buildings"].append(
                {"quad": [[_rat(p[0], path), _rat(p[1], path)] for p in quad]})
    try:
        scene = validate_scene(raw)
    except ValueError as e:
        if isinstance(e, SceneValidationError):
            raise
        raise FormatError(str(e), "$")
    return City(scene=scene, heights=tuple(heights))


def load_city(path) -> City:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"parse error at line {e.lineno}, column {e.colno}: {e.msg}")
    return parse_city(doc)


def load_scene(path) -> Scene:
    return load_city(path).scene


def city_doc(city: City) -> dict:
    buildings = []
    for i, h in enumerate(city.scene.holes):
        if isinstance(h, AxisRect):
            entry = {"base": [rational_str(v) for v in (h.x0, h.y0, h.x1, h.y1)]}
        else:
            entry = {"quad": [[rational_str(c.x), rational_str(c.y)] for c in h.corners()]}
        entry["height"] = rational_str(city.heights[i])
        buildings.append(entry)
    b = city.scene.bounds
    return {"bounds": [rational_str(v) for v in (b.x0, b.y0, b.x1, b.y1)],
            "buildings": buildings}


def scene_doc(scene: Scene) -> dict:
    return city_doc(City(scene=scene, heights=tuple(1 for _ in range(scene.k))))


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(", ", ": "), indent=1) + "\n"


def save_city(city: City, path):
    with open(path, "w") as f:
        f.write(canonical_json(city_doc(city)))


def save_scene(scene: Scene, path):
    save_city(City(scene=scene, heights=tuple(1 for _ in range(scene.k))), path)


def parse_solution(doc) -> Solution:
    _check_keys(doc, {"algorithm", "guards"}, {"algorithm", "guards"}, "$")
    guards = []
    for i, g in enumerate(doc["guards"]):
        path = f"$.guards[{i}]"
        _check_keys(g, {"anchor", "facing"}, {"anchor", "facing"}, path)
        anchor = g["anchor"]
        if "building" in anchor:
            _check_keys(anchor, {"building", "corner"}, {"building", "corner"}, path)
            a = ("hole", int(anchor["building"]), int(anchor["corner"]))
        elif "p_corner" in anchor:
            _check_keys(anchor, {"p_corner"}, {"p_corner"}, path)
            a = ("p", int(anchor["p_corner"]))
        else:
            raise FormatError("anchor needs building/corner or p_corner", path)
        facing = g["facing"]
        if not (isinstance(facing, list) and len(facing) == 2):
            raise FormatError("facing must be [dx, dy]", path)
        guards.append(Guard(anchor=a, facing=(_rat(facing[0], path), _rat(facing[1], path))))
    return Solution(algorithm=str(doc["algorithm"]), guards=tuple(guards))


def load_solution(path) -> Solution:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"parse error at line {e.lineno}, column {e.colno}: {e.msg}")
    return parse_solution(doc)


def solution_doc(sol: Solution) -> dict:
    guards = []
    for g in sol.guards:
        if g.anchor[0] == "hole":
            anchor = {"building": g.anchor[1], "corner": g.anchor[2]}
        else:
            anchor = {"p_corner": g.anchor[1]}
        guards.append({"anchor": anchor,
                       "facing": [rational_str(g.facing[0]), rational_str(g.facing[1])]})
    return {"algorithm": sol.algorithm, "guards": guards}


def save_solution(sol: Solution, path):
    with open(path, "w") as f:
        f.write(canonical_json(solution_doc(sol)))


def certificate_doc(cert) -> dict:
    doc = {
        "covered": cert.covered,
        "residual_area": rational_str(cert.residual.area()),
        "residual": [[[rational_str(x), rational_str(y)] for (x, y) in ring]
                     for ring in cert.residual.rings()],
        "regions": [
            {"anchor": list(vr.guard.anchor),
             "facing": [rational_str(vr.guard.facing[0]), rational_str(vr.guard.facing[1])],
             "rings": [[[rational_str(x), rational_str(y)] for (x, y) in ring]
                       for ring in vr.region.rings()]}
            for vr in cert.per_guard_regions
        ],
    }
    if cert.witness is not None:
        doc["witness"] = [rational_str(cert.witness.x), rational_str(cert.witness.y)]
    if cert.roof_flags is not None:
        doc["roof_flags"] = list(cert.roof_flags)
    return doc
