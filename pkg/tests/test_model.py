import pytest

from cityguard.errors import DegeneratePositionError, SceneValidationError
from cityguard.geom import Point, make_axis_rect
from cityguard.model import (
    City, E, N, S, Scene, W, guard_facing_is_wall_aligned, hole_guard,
    p_corner_guard, project, roof_covered_by, rotate_guard_ccw, rotate_point_ccw,
    rotate_scene_ccw, validate_scene, check_general_position,
    require_general_position,
)


def city_a():
    return validate_scene({"bounds": [0, 0, 10, 10],
                           "buildings": [{"base": [4, 4, 6, 6], "height": 3}]})


class TestValidation:
    def test_single_interior_hole(self):
        sc = city_a()
        assert sc.k == 1 and sc.kind == "AXIS_ALIGNED"

    def test_overlap(self):
        with pytest.raises(SceneValidationError) as e:
            validate_scene({"bounds": [0, 0, 10, 10],
                            "buildings": [{"base": [4, 4, 6, 6], "height": 1},
                                          {"base": [5, 5, 7, 7], "height": 1}]})
        assert ("OVERLAPPING_HOLES", (0, 1)) in e.value.violations

    def test_touching_counts_as_overlap(self):
        with pytest.raises(SceneValidationError) as e:
            validate_scene({"bounds": [0, 0, 10, 10],
                            "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                          {"base": [3, 1, 5, 3], "height": 1}]})
        assert any(v[0] == "OVERLAPPING_HOLES" for v in e.value.violations)

    def test_boundary_contact(self):
        with pytest.raises(SceneValidationError) as e:
            validate_scene({"bounds": [0, 0, 10, 10],
                            "buildings": [{"base": [0, 4, 2, 6], "height": 1}]})
        assert ("HOLE_TOUCHES_BOUNDARY", (0,)) in e.value.violations

    def test_not_a_rectangle(self):
        with pytest.raises(SceneValidationError) as e:
            validate_scene({"bounds": [0, 0, 10, 10],
                            "buildings": [{"quad": [[2, 2], [6, 2], [7, 5], [3, 5]],
                                           "height": 1}]})
        assert ("NOT_A_RECTANGLE", (0,)) in e.value.violations

    def test_degenerate_position(self):
        sc = validate_scene({"bounds": [0, 0, 10, 10],
                             "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                           {"base": [5, 5, 7, 7], "height": 1}]})
        assert check_general_position(sc) == []
        sc2 = validate_scene({"bounds": [0, 0, 10, 10],
                              "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                            {"base": [3, 5, 7, 7], "height": 1}]})
        assert check_general_position(sc2) == [("DEGENERATE_POSITION", (0, 1))]
        with pytest.raises(DegeneratePositionError):
            require_general_position(sc2)
        with pytest.raises(SceneValidationError):
            validate_scene(sc2, require_general_position=True)

    def test_idempotent(self):
        sc = city_a()
        assert validate_scene(sc) == sc


class TestProjection:
    def test_projection_forgets_heights(self):
        sc = city_a()
        city = City(scene=sc, heights=(3,))
        assert project(city) == sc

    def test_empty_city(self):
        sc = Scene(bounds=make_axis_rect(0, 0, 5, 5), holes=())
        assert project(City(scene=sc, heights=())).k == 0

    def test_ids_preserved(self):
        sc = validate_scene({"bounds": [0, 0, 20, 20],
                             "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                           {"base": [5, 5, 7, 8], "height": 2}]})
        city = City(scene=sc, heights=(1, 2))
        assert project(city).holes[1] == sc.holes[1]


class TestRoofCoveredBy:
    def test_nw_facing_east(self):
        sc = city_a()
        b = City(scene=sc, heights=(3,)).building(0)
        assert roof_covered_by(b, hole_guard(0, 3, E), sc)

    def test_nw_facing_west(self):
        sc = city_a()
        b = City(scene=sc, heights=(3,)).building(0)
        assert not roof_covered_by(b, hole_guard(0, 3, W), sc)

    def test_other_building(self):
        sc = validate_scene({"bounds": [0, 0, 20, 20],
                             "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                           {"base": [5, 5, 7, 8], "height": 2}]})
        b0 = City(scene=sc, heights=(1, 2)).building(0)
        assert not roof_covered_by(b0, hole_guard(1, 3, E), sc)


class TestGuards:
    def test_facing_normalized(self):
        g = hole_guard(0, 0, (4, 0))
        assert g.facing == (1, 0)

    def test_positions(self):
        sc = city_a()
        assert hole_guard(0, 2, W).position(sc) == Point(6, 6)
        assert p_corner_guard(1, W).position(sc) == Point(10, 0)

    def test_wall_alignment_check(self):
        sc = city_a()
        assert guard_facing_is_wall_aligned(sc, hole_guard(0, 0, N))
        assert not guard_facing_is_wall_aligned(sc, hole_guard(0, 0, (1, 1)))
        q = validate_scene({"bounds": [0, 0, 20, 20],
                            "buildings": [{"quad": [[10, 4], [14, 8], [10, 12], [6, 8]],
                                           "height": 1}]})
        assert guard_facing_is_wall_aligned(q, hole_guard(0, 0, (1, 1)))
        assert not guard_facing_is_wall_aligned(q, hole_guard(0, 0, E))


class TestRotation:
    def test_scene_round_trip(self):
        sc = validate_scene({"bounds": [0, 0, 10, 6],
                             "buildings": [{"base": [1, 1, 3, 2], "height": 1}]})
        r = rotate_scene_ccw(sc, 1)
        assert r.bounds == make_axis_rect(-6, 0, 0, 10)
        back = rotate_scene_ccw(r, 3)
        assert back == sc

    def test_guard_round_trip(self):
        sc = city_a()
        for corner in range(4):
            for facing in (N, E, S, W):
                g = hole_guard(0, corner, facing)
                for t in range(4):
                    rg = rotate_guard_ccw(g, sc, t)
                    rsc = rotate_scene_ccw(sc, t)
                    assert rg.position(rsc) == rotate_point_ccw(g.position(sc), t)
                    back = rotate_guard_ccw(rg, rsc, -t)
                    assert back == g
