import json
import subprocess
import sys

import pytest

from cityguard.cli import main
from cityguard.errors import SceneValidationError
from cityguard.instances import GeneratorParams, gen_random_city
from cityguard.io import (
    FormatError, load_city, load_solution, parse_city, save_city, save_solution,
)
from cityguard.model import W, hole_guard, p_corner_guard, validate_scene, Solution
from cityguard.placement import guards_2k1
from cityguard.svg import render_svg
from cityguard.verify import certify


def city_a_doc():
    return {"bounds": [0, 0, 10, 10],
            "buildings": [{"base": [4, 4, 6, 6], "height": 3}]}


class TestFormats:
    def test_parse_city_a(self):
        city = parse_city(city_a_doc())
        assert city.scene.k == 1 and city.heights == (3,)

    def test_zero_height_rejected(self):
        doc = {"bounds": [0, 0, 10, 10],
               "buildings": [{"base": [4, 4, 6, 6], "height": 0}]}
        with pytest.raises(FormatError) as e:
            parse_city(doc)
        assert "height must be positive" in str(e.value)

    def test_unknown_fields_rejected(self):
        doc = city_a_doc()
        doc["extra"] = 1
        with pytest.raises(FormatError):
            parse_city(doc)
        doc2 = city_a_doc()
        doc2["buildings"][0]["color"] = "red"
        with pytest.raises(FormatError):
            parse_city(doc2)

    def test_rational_strings(self):
        doc = {"bounds": [0, 0, "21/2", 10],
               "buildings": [{"base": [4, 4, "13/2", 6], "height": "1/3"}]}
        city = parse_city(doc)
        assert str(city.scene.bounds.x1) == "21/2"

    def test_invalid_scene_propagates(self):
        doc = {"bounds": [0, 0, 10, 10],
               "buildings": [{"base": [0, 4, 2, 6], "height": 1}]}
        with pytest.raises(SceneValidationError):
            parse_city(doc)

    def test_round_trip_byte_stable(self, tmp_path):
        city = gen_random_city(GeneratorParams(k=4, seed=9, grid=50))
        p1 = tmp_path / "a.json"
        save_city(city, p1)
        first = p1.read_bytes()
        city2 = load_city(p1)
        p2 = tmp_path / "b.json"
        save_city(city2, p2)
        assert p2.read_bytes() == first

    def test_solution_round_trip(self, tmp_path):
        sol = Solution(algorithm="walls-2k1",
                       guards=(hole_guard(0, 2, W), p_corner_guard(1, W)))
        path = tmp_path / "sol.json"
        save_solution(sol, path)
        sol2 = load_solution(path)
        assert sol2.algorithm == sol.algorithm and sol2.guards == sol.guards
        save_solution(sol2, tmp_path / "sol2.json")
        assert (tmp_path / "sol2.json").read_bytes() == path.read_bytes()

    def test_quad_round_trip(self, tmp_path):
        doc = {"bounds": [0, 0, 20, 20],
               "buildings": [{"quad": [[10, 4], [14, 8], [10, 12], [6, 8]],
                              "height": 2}]}
        city = parse_city(doc)
        path = tmp_path / "q.json"
        save_city(city, path)
        assert load_city(path) == city


class TestSvg:
    def test_structure_and_determinism(self):
        sc = validate_scene(city_a_doc())
        sol = guards_2k1(sc)
        cert = certify(sc, sol.guards)
        svg1 = render_svg(sc, sol, cert)
        svg2 = render_svg(sc, sol, cert)
        assert svg1 == svg2
        assert svg1.count("<circle") == 3          # one marker per guard
        assert svg1.count('fill="#555555"') == 1   # one hole
        assert "<svg" in svg1 and svg1.rstrip().endswith("</svg>")

    def test_residual_highlight(self):
        sc = validate_scene(city_a_doc())
        cert = certify(sc, [hole_guard(0, 1, (1, 0))])
        svg = render_svg(sc, None, cert)
        assert 'fill="#ff0000"' in svg


class TestCli:
    def run(self, *argv):
        return main(list(argv))

    def test_gen_solve_verify(self, tmp_path):
        scene = tmp_path / "s.json"
        sol = tmp_path / "g.json"
        assert self.run("gen", "--family", "random", "--k", "3", "--seed", "5",
                        "--grid", "40", "--out", str(scene)) == 0
        assert self.run("solve", "--algo", "walls-main", "--in", str(scene),
                        "--out", str(sol)) == 0
        assert self.run("verify", "--scene", str(scene), "--solution", str(sol)) == 0
        assert self.run("solve", "--algo", "city", "--mode", "allow-p-corner",
                        "--in", str(scene), "--out", str(sol)) == 0
        assert self.run("verify", "--scene", str(scene), "--solution", str(sol),
                        "--city") == 0

    def test_verify_failure_exit_code(self, tmp_path):
        scene = tmp_path / "s.json"
        sol = tmp_path / "g.json"
        save_city(parse_city(city_a_doc()), scene)
        save_solution(Solution(algorithm="x", guards=(hole_guard(0, 1, (1, 0)),)), sol)
        assert self.run("verify", "--scene", str(scene), "--solution", str(sol)) == 3

    def test_validation_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"bounds": [0, 0, 10, 10],
                                   "buildings": [{"base": [0, 4, 2, 6], "height": 1}]}))
        out = tmp_path / "o.json"
        assert self.run("solve", "--algo", "roof", "--in", str(bad),
                        "--out", str(out)) == 2

    def test_oracle_cli(self, tmp_path):
        scene = tmp_path / "s.json"
        save_city(parse_city(city_a_doc()), scene)
        assert self.run("oracle", "--scene", str(scene), "--max", "6") == 0
        assert self.run("oracle", "--scene", str(scene), "--max", "1") == 4

    def test_render_and_determinism(self, tmp_path):
        scene = tmp_path / "s.json"
        save_city(parse_city(city_a_doc()), scene)
        out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
        assert self.run("render", "--scene", str(scene), "--out", str(out1)) == 0
        assert self.run("render", "--scene", str(scene), "--out", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bench(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert self.run("bench", "--count", "4", "--k-min", "1", "--k-max", "2",
                        "--seed", "3", "--grid", "40", "--out", str(out)) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("instance,k,roof,walls_2k1")
        assert len(lines) == 5
        for line in lines[1:]:
            fields = line.split(",")
            assert fields[-2] == "1"  # certified

    def test_gen_3k1_and_roof_families(self, tmp_path):
        scene = tmp_path / "s.json"
        assert self.run("gen", "--family", "rot-3k1", "--k", "2",
                        "--out", str(scene)) == 0
        assert load_city(scene).scene.kind == "GENERAL"
        assert self.run("gen", "--family", "roof-necessity", "--k", "3",
                        "--out", str(scene)) == 0
        assert self.run("gen", "--family", "rot-3k1", "--k", "4",
                        "--out", str(scene)) == 2

    def test_console_script(self, tmp_path):
        result = subprocess.run([sys.executable, "-m", "cityguard.cli", "--help"],
                                capture_output=True, text=True)
        assert result.returncode == 0
        for sub in ("solve", "verify", "oracle", "gen", "render", "bench"):
            assert sub in result.stdout


class TestBenchHarness:
    def test_thread_env(self, monkeypatch):
        from cityguard.bench import thread_count
        monkeypatch.setenv("CITYGUARD_THREADS", "3")
        assert thread_count() == 3
        monkeypatch.setenv("CITYGUARD_THREADS", "0")
        assert thread_count() >= 1

    def test_parallel_matches_sequential(self, monkeypatch):
        from cityguard.bench import csv_lines, random_corpus, run_bench
        corpus = random_corpus(3, 1, 2, seed=11, grid=40)
        rows_seq = run_bench(corpus)
        monkeypatch.setenv("CITYGUARD_THREADS", "2")
        rows_par = run_bench(corpus)
        strip = lambda rows: [",".join(l.split(",")[:-1]) for l in csv_lines(rows)]
        assert strip(rows_seq) == strip(rows_par)

    def test_oracle_column_bounded(self):
        from cityguard.bench import random_corpus, run_bench
        rows = run_bench(random_corpus(2, 1, 2, seed=21, grid=30), with_oracle=True)
        for row in rows:
            assert row.oracle_count is not None
            assert row.oracle_count <= row.counts["walls_2k1"]
