import pytest

from cityguard.errors import DegeneratePositionError, EmptyStaircaseError
from cityguard.geom import PolygonSet, make_axis_rect
from cityguard.model import Scene, validate_scene
from cityguard.staircase import (
    KINDS, RRS, RS, build_staircase, staircase_guards, staircase_sharing,
)
from cityguard.visibility import visibility_region


def city_a():
    return validate_scene({"bounds": [0, 0, 10, 10],
                           "buildings": [{"base": [4, 4, 6, 6], "height": 3}]})


def city_b():
    return validate_scene({"bounds": [0, 0, 100, 100], "buildings": [
        {"base": [10, 60, 30, 80], "height": 1},
        {"base": [60, 65, 85, 90], "height": 1},
        {"base": [15, 15, 40, 35], "height": 1},
        {"base": [55, 10, 90, 40], "height": 1}]})


class TestBuild:
    def test_k0_no_stairs(self):
        sc = Scene(bounds=make_axis_rect(0, 0, 10, 10), holes=())
        for kind in KINDS:
            st = build_staircase(sc, kind)
            assert st.stairs == 0 and st.buildings == frozenset()
            assert st.region.area() == 100

    def test_city_a_every_kind_one_stair(self):
        sc = city_a()
        for kind in KINDS:
            st = build_staircase(sc, kind)
            assert st.stairs == 1
            assert st.buildings == frozenset({0})

    def test_city_b_rs_buildings(self):
        st = build_staircase(city_b(), RS)
        assert st.buildings == frozenset({0, 1})

    def test_reflex_vertices_are_hole_vertices(self):
        sc = city_b()
        for kind in KINDS:
            st = build_staircase(sc, kind)
            assert len(st.reflex_vertices) == len(st.buildings)
            for (pt, hid) in st.reflex_vertices:
                assert pt in sc.holes[hid].corners()

    def test_region_contains_no_hole_interior(self):
        sc = city_b()
        holes = PolygonSet(tuple(h.as_cell() for h in sc.holes))
        for kind in KINDS:
            st = build_staircase(sc, kind)
            assert st.region.intersection(holes).area() == 0

    def test_chain_endpoints_on_bounds(self):
        sc = city_b()
        b = sc.bounds
        for kind in KINDS:
            chain = build_staircase(sc, kind).chain
            for p in (chain[0], chain[-1]):
                assert p.x in (b.x0, b.x1) or p.y in (b.y0, b.y1)

    def test_degenerate_rejected(self):
        sc = validate_scene({"bounds": [0, 0, 10, 10],
                             "buildings": [{"base": [1, 1, 3, 3], "height": 1},
                                           {"base": [3, 5, 7, 7], "height": 1}]})
        with pytest.raises(DegeneratePositionError):
            build_staircase(sc, RS)


class TestGuards:
    def test_city_a_rrs_two_guards(self):
        sc = city_a()
        st = build_staircase(sc, RRS)
        assert len(staircase_guards(sc, st)) == 2

    def test_count_is_stairs_plus_one(self):
        sc = city_b()
        for kind in KINDS:
            st = build_staircase(sc, kind)
            assert len(staircase_guards(sc, st)) == st.stairs + 1

    def test_pattern_three_stairs(self):
        sc = validate_scene({"bounds": [0, 0, 100, 100], "buildings": [
            {"base": [10, 5, 20, 15], "height": 1},
            {"base": [30, 22, 40, 32], "height": 1},
            {"base": [50, 41, 60, 51], "height": 1}]})
        st = build_staircase(sc, RRS)
        assert st.stairs == 3
        guards = staircase_guards(sc, st)
        assert len(guards) == 4
        assert sum(1 for g in guards if g.facing == (1, 0)) == 3
        assert sum(1 for g in guards if g.facing == (0, -1)) == 1

    def test_guards_cover_staircase_exactly(self):
        sc = city_b()
        for kind in KINDS:
            st = build_staircase(sc, kind)
            covered = PolygonSet.empty()
            for g in staircase_guards(sc, st):
                covered = covered.union(visibility_region(sc, g).region)
            assert st.region.difference(covered).is_empty(), kind

    def test_empty_staircase_errors(self):
        sc = Scene(bounds=make_axis_rect(0, 0, 10, 10), holes=())
        st = build_staircase(sc, RRS)
        with pytest.raises(EmptyStaircaseError):
            staircase_guards(sc, st)


class TestSharing:
    def test_city_a_case0(self):
        rep = staircase_sharing(city_a())
        assert rep.case == 0
        assert set(rep.extremal.values()) == {0}

    def test_interior_shared_building_case3(self):
        # wide middle building: everything above it sits in its vertical span
        rep = staircase_sharing(validate_scene({"bounds": [0, 0, 1000, 1000],
            "buildings": [{"base": b, "height": 1} for b in [
                [100, 500, 900, 520],
                [200, 600, 220, 620], [400, 700, 420, 720], [600, 800, 620, 820],
                [50, 200, 70, 220], [300, 100, 320, 120], [700, 300, 720, 320],
                [850, 50, 880, 80], [920, 250, 950, 270]]]}))
        assert rep.case == 3
        entries = {e[1]: (e[2], e[3]) for e in rep.adjacent_internal}
        assert entries[0] == (3, 5)  # alpha buildings above, beta below

    def test_case2_opposite_sharing(self):
        rep = staircase_sharing(validate_scene({"bounds": [0, 0, 100, 100],
            "buildings": [{"base": b, "height": 1} for b in [
                [2, 5, 4, 16], [5, 1, 8, 4], [10, 10, 20, 20],
                [12, 30, 18, 55], [40, 12, 60, 17], [80, 40, 90, 50]]]}))
        assert rep.case == 2
        assert rep.opposite_shared[0][1] == 2

    def test_city_b_case(self):
        rep = staircase_sharing(city_b())
        assert rep.case in (0, 1, 2, 3, 4)
        assert rep.extremal["L"] == 0
        assert rep.extremal["T"] == 1
        assert rep.extremal["R"] in (1, 3)
        assert rep.extremal["B"] == 3
