import json
import shutil
from importlib import resources

import pytest

from nekra.cli import run
from nekra.groupfile import group_from_dict, group_to_dict, load_fixture


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    """Copy of the packaged group files in a plain directory."""
    out = tmp_path_factory.mktemp("groups")
    for name in ("odometer", "grigorchuk", "dinf"):
        src = resources.files("nekra.fixtures").joinpath(f"{name}.json")
        shutil.copy(str(src), out / f"{name}.json")
    return out


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestAct:
    def test_odometer(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "act", "-g", str(fixture_dir / "odometer.json"),
                             "-w", "a", "-v", "2,2,1")
        assert code == 0
        assert doc == {"vertex": [1, 1, 2]}

    def test_bad_vertex_letter(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "act", "-g", str(fixture_dir / "odometer.json"),
                             "-w", "a", "-v", "3,1")
        assert code == 1
        assert "error" in doc

    def test_unknown_generator(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "act", "-g", str(fixture_dir / "odometer.json"),
                             "-w", "z", "-v", "1")
        assert code == 1
        assert doc["error"]["type"] == "UnknownGeneratorError"


class TestMul:
    def test_odometer_square(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "mul", "-g", str(fixture_dir / "odometer.json"),
                             "-w", "a", "-u", "a")
        assert code == 0
        assert doc["perm"] == [1, 2]
        assert doc["states"] == [["a"], ["a"]]
        assert doc["word"] == ["a", "a"]


class TestPortrait:
    def test_depth_one(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "portrait", "-g", str(fixture_dir / "odometer.json"),
                             "-w", "a", "-d", "1")
        assert code == 0
        assert doc["perm"] == [2, 1]
        assert len(doc["children"]) == 2

    def test_figure_written(self, fixture_dir, tmp_path, capsys):
        png = tmp_path / "portrait.png"
        code, _ = run_json(capsys, "portrait", "-g", str(fixture_dir / "odometer.json"),
                           "-w", "a", "-d", "2", "--figure", str(png))
        assert code == 0
        assert png.exists() and png.stat().st_size > 0


class TestIsTrivial:
    def test_relation(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "istrivial", "-g", str(fixture_dir / "grigorchuk.json"),
                             "-w", "b c d")
        assert code == 0
        assert doc == {"result": "Trivial"}

    def test_budget_env(self, fixture_dir, capsys, monkeypatch):
        monkeypatch.setenv("NEKRA_BUDGET", "1")
        code, doc = run_json(capsys, "istrivial", "-g", str(fixture_dir / "grigorchuk.json"),
                             "-w", "b a b a b a b a")
        assert code == 0
        assert doc == {"result": "Unknown"}

    def test_bad_budget_env(self, fixture_dir, capsys, monkeypatch):
        monkeypatch.setenv("NEKRA_BUDGET", "lots")
        code, doc = run_json(capsys, "istrivial", "-g", str(fixture_dir / "grigorchuk.json"),
                             "-w", "a")
        assert code == 2


class TestAbelianize:
    def test_group(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "abelianize", "-g", str(fixture_dir / "grigorchuk.json"))
        assert code == 0
        assert doc["factors"] == [2, 2, 2]
        assert doc["rank"] == 0

    def test_v(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "abelianize-v", "-g", str(fixture_dir / "dinf.json"))
        assert code == 0
        assert doc["factors"] == [2]
        assert doc["images"]["a"] == [1]
        assert doc["images"]["s"] == [1]


class TestFindMAndDuplicate:
    def test_find_m(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "find-m", "-g", str(fixture_dir / "odometer.json"))
        assert code == 0
        assert doc == {"m": 2}

    def test_duplicate_round_trip(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "duplicate", "-g", str(fixture_dir / "odometer.json"),
                             "-m", "2")
        assert code == 0
        assert doc["degree"] == 4
        # output is itself a valid group file
        G = group_from_dict(doc)
        assert G.recursions[0].perm == (2, 1, 4, 3)


class TestVElements:
    def test_compose(self, fixture_dir, tmp_path, capsys):
        swap = {"domain": [[1], [2]], "range": [[2], [1]], "decorations": [[], []]}
        path = tmp_path / "swap.json"
        path.write_text(json.dumps(swap))
        code, doc = run_json(capsys, "v-compose", "-g", str(fixture_dir / "odometer.json"),
                             "-e", str(path), "-f", str(path))
        assert code == 0
        assert doc["domain"] == doc["range"]
        assert all(w == [] for w in doc["decorations"])

    def test_class(self, fixture_dir, tmp_path, capsys):
        elem = {"domain": [[]], "range": [[]], "decorations": [["a"]]}
        path = tmp_path / "a.json"
        path.write_text(json.dumps(elem))
        code, doc = run_json(capsys, "v-class", "-g", str(fixture_dir / "dinf.json"),
                             "-e", str(path))
        assert code == 0
        assert doc["zero"] is False
        assert doc["class"] == [1]

    def test_schema_error(self, fixture_dir, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"domain": [[]]}))
        code, doc = run_json(capsys, "v-class", "-g", str(fixture_dir / "dinf.json"),
                             "-e", str(path))
        assert code == 2
        assert doc["error"]["type"] == "SchemaError"


class TestEmbedBH:
    def test_dinf(self, fixture_dir, capsys):
        code, doc = run_json(capsys, "embed-bh", "-g", str(fixture_dir / "dinf.json"))
        assert code == 0
        assert doc["d_prime"] == 2
        assert doc["m"] == 1
        assert doc["Q"]["factors"] == [2]
        assert doc["index_H"] == 2
        assert doc["transversal"] == [[], ["a"]]
        assert set(doc["generator_images"]) == {"a", "s"}

    def test_figure_written(self, fixture_dir, tmp_path, capsys):
        png = tmp_path / "bh.png"
        code, _ = run_json(capsys, "embed-bh", "-g", str(fixture_dir / "dinf.json"),
                           "--figure", str(png))
        assert code == 0
        assert png.exists() and png.stat().st_size > 0


class TestVirtend:
    @pytest.fixture()
    def spec_path(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"m": 6, "p": 5, "n": 1}))
        return path

    def test_state(self, spec_path, tmp_path, capsys):
        elem = {"a": [{"num": 1, "exp": 0}], "gamma": [[{"num": 1, "exp": 0}]]}
        path = tmp_path / "elem.json"
        path.write_text(json.dumps(elem))
        code, doc = run_json(capsys, "virtend-state", "-s", str(spec_path),
                             "-e", str(path), "-t", "4")
        assert code == 0
        assert doc["t_prime"] == [0]
        assert doc["state"]["a"] == [{"num": 1, "exp": 0}]

    def test_check(self, tmp_path, fixture_dir, capsys):
        spec = tmp_path / "spec2.json"
        spec.write_text(json.dumps({"m": 1, "p": 2, "n": 1}))
        gens = tmp_path / "gens.json"
        gens.write_text(json.dumps(
            {"a": {"a": [1], "gamma": [[1]]}}))
        code, doc = run_json(capsys, "virtend-check", "-s", str(spec),
                             "-a", str(gens), "-g", str(fixture_dir / "odometer.json"),
                             "-d", "4")
        assert code == 0
        assert doc["ok"] is True
        assert doc["mismatches"] == []

    def test_relators(self, spec_path, capsys):
        code, doc = run_json(capsys, "relators", "-s", str(spec_path))
        assert code == 0
        assert doc["ok"] is True
        assert all(r["identity"] for r in doc["relators"])


class TestPlumbing:
    def test_missing_file(self, capsys):
        code, doc = run_json(capsys, "abelianize", "-g", "/nonexistent/g.json")
        assert code == 2

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, doc = run_json(capsys, "act", "-g", str(path), "-w", "a", "-v", "1")
        assert code == 2
        assert doc["error"]["type"] == "ParseError"

    def test_deterministic_output(self, fixture_dir, capsys):
        args = ("embed-bh", "-g", str(fixture_dir / "dinf.json"))
        run(list(args))
        first = capsys.readouterr().out
        run(list(args))
        second = capsys.readouterr().out
        assert first == second

    def test_pretty_after_subcommand(self, fixture_dir, capsys):
        code = run(["find-m", "-g", str(fixture_dir / "odometer.json"), "--pretty"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("{\n")

    def test_round_trip_fixtures(self):
        for name in ("odometer", "grigorchuk", "dinf"):
            G = load_fixture(name)
            assert group_from_dict(group_to_dict(G)) == G
