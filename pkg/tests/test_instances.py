import pytest

from cityguard.errors import GenerationFailedError
from cityguard.geom import make_axis_rect, make_convex_quad
from cityguard.instances import (
    GeneratorParams, RANDOM_AA, ROOF_NECESSITY, ROT_3K1, check_3k1_properties,
    check_roof_necessity, gen_3k1_necessity, gen_random, gen_random_city,
    gen_roof_necessity, generate, hole_within_span, space_between,
)
from cityguard.model import Scene, validate_scene
from cityguard.oracle import candidate_set, min_cover_of_region
from cityguard.visibility import visibility_region


class TestGenRandom:
    def test_k0(self):
        assert gen_random(GeneratorParams(k=0, seed=1)).k == 0

    def test_valid_and_general_position(self):
        sc = gen_random(GeneratorParams(k=5, seed=1, grid=1000))
        assert sc.k == 5
        assert validate_scene(sc, require_general_position=True) == sc

    def test_deterministic(self):
        p = GeneratorParams(k=6, seed=42, grid=200)
        assert gen_random(p) == gen_random(p)
        assert gen_random_city(p) == gen_random_city(p)

    def test_generation_failure(self):
        with pytest.raises(GenerationFailedError):
            gen_random(GeneratorParams(k=40, seed=0, grid=6))

    def test_family_dispatch(self):
        assert generate(GeneratorParams(k=2, seed=0, family=RANDOM_AA)).k == 2
        assert generate(GeneratorParams(k=2, family=ROOF_NECESSITY)).scene.k == 2
        assert generate(GeneratorParams(k=2, family=ROT_3K1)).k == 2


class TestRoofNecessity:
    def test_k1(self):
        assert gen_roof_necessity(1).scene.k == 1

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_properties_hold(self, k):
        city = gen_roof_necessity(k)
        assert check_roof_necessity(city) == []
        hts = city.heights
        assert all(hts[i] > hts[i + 1] for i in range(k - 1))

    def test_checker_catches_violations(self):
        # two distant same-height-ish buildings with nothing blocking
        sc = validate_scene({"bounds": [0, 0, 100, 20], "buildings": [
            {"base": [10, 5, 12, 8], "height": 10},
            {"base": [40, 4, 42, 9], "height": 8},
            {"base": [70, 3, 72, 10], "height": 6}]})
        from cityguard.model import City
        city = City(scene=sc, heights=(10, 8, 6))
        failures = check_roof_necessity(city)
        assert ("property2", (0, 2)) in failures


class Test3k1:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_properties_pass(self, k):
        sc = gen_3k1_necessity(k)
        assert sc.kind == "GENERAL"
        report = check_3k1_properties(sc)
        assert all(ok for _, ok, _ in report)

    def test_k4_reports_failing_property(self):
        with pytest.raises(GenerationFailedError) as e:
            gen_3k1_necessity(4)
        assert e.value.failed_property == "property2"

    def test_deterministic(self):
        assert gen_3k1_necessity(2) == gen_3k1_necessity(2)

    def test_property2_fails_when_far_pair_sees_each_other(self):
        # the middle hole sits high, leaving the far pair mutually visible
        sc = Scene(bounds=make_axis_rect(0, 0, 100, 30),
                   holes=(make_convex_quad([(10, 5), (14, 5), (14, 9), (10, 9)]),
                          make_convex_quad([(40, 20), (44, 20), (44, 24), (40, 24)]),
                          make_convex_quad([(70, 3), (74, 3), (74, 7), (70, 7)])))
        report = {name: ok for name, ok, _ in check_3k1_properties(sc)}
        assert not report["property2"]

    def test_span_nesting(self):
        sc = gen_3k1_necessity(3)
        for i in range(1, 3):
            for j in range(i):
                assert hole_within_span(sc.holes[i], sc.holes[j])

    def test_gap_pockets(self):
        sc = gen_3k1_necessity(3)
        cands = candidate_set(sc)
        for i in (0, 1):
            gap = space_between(sc, i)
            assert gap.area() > 0
            # only positions on the two adjacent holes see any area of the gap
            for g in cands:
                if g.anchor[1] in (i, i + 1):
                    continue
                region = visibility_region(sc, g).region
                assert region.intersection(gap).is_empty()
            # and at least two of the adjacent positions are needed
            pair = [g for g in cands if g.anchor[1] in (i, i + 1)]
            m = min_cover_of_region(sc, pair, gap, 6)
            assert m is not None and m >= 2
