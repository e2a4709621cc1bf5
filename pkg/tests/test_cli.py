"""CLI: file formats, exit codes, determinism, structured output."""

import json
import subprocess
import sys

import pytest

from clusterlab.cli import (
    load_map_file,
    load_seed_file,
    main,
    save_seed_file,
)
from clusterlab.errors import InvalidSeed, ParseError
from clusterlab.seeds import Seed


A2 = {
    "variables": [
        {"id": "y1", "exchangeable": True},
        {"id": "y2", "exchangeable": True},
    ],
    "matrix": [["y1", "y2", 1], ["y2", "y1", -1]],
}

SIG = {
    "variables": [
        {"id": "x1", "exchangeable": False},
        {"id": "x2", "exchangeable": True},
        {"id": "x3", "exchangeable": True},
    ],
    "matrix": [
        ["x1", "x2", 1],
        ["x2", "x1", -1],
        ["x3", "x2", 1],
        ["x2", "x3", -1],
    ],
}

FMAP = {"assignment": [["x1", "y1"], ["x2", "y2"], ["x3", 1]]}

TIDEAL_SRC = {
    "variables": [
        {"id": "a1", "exchangeable": False},
        {"id": "x", "exchangeable": True},
        {"id": "a2", "exchangeable": False},
    ],
    "matrix": [["a1", "x", 1], ["x", "a1", -1], ["x", "a2", 1], ["a2", "x", -1]],
}

TIDEAL_MAP = {
    "assignment": [["a1", 1], ["a2", -1], ["x", 0]],
    "extra": [["a1*x^-1 + a2*x^-1", "y1"]],
}

PENTAGON = {
    "points": ["0/1", "1/5", "2/5", "3/5", "4/5"],
    "arcs": [
        ["0/1", "1/5"],
        ["1/5", "2/5"],
        ["2/5", "3/5"],
        ["3/5", "4/5"],
        ["4/5", "0/1"],
        ["0/1", "2/5"],
        ["0/1", "3/5"],
    ],
}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, data in [
        ("a2.seed", A2),
        ("sig.seed", SIG),
        ("f.map", FMAP),
        ("tideal.seed", TIDEAL_SRC),
        ("tideal.map", TIDEAL_MAP),
        ("pent.tri", PENTAGON),
    ]:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        out[name] = str(path)
    out["dir"] = tmp_path
    return out


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


class TestSeedFiles:
    def test_load_save_roundtrip(self, files, tmp_path):
        seed = load_seed_file(files["sig.seed"])
        out = tmp_path / "resaved.seed"
        save_seed_file(seed, str(out))
        again = load_seed_file(str(out))
        assert again.same_seed(seed)
        assert tuple(again.labels) == tuple(sorted(seed.labels))

    def test_equal_seeds_byte_identical(self, tmp_path):
        s1 = Seed.initial(["a", "b"], ["a"], [("a", "b", 1), ("b", "a", -1)])
        s2 = Seed.initial(["b", "a"], ["a"], [("b", "a", -1), ("a", "b", 1)])
        p1, p2 = tmp_path / "s1.seed", tmp_path / "s2.seed"
        save_seed_file(s1, str(p1))
        save_seed_file(s2, str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_seed(self, tmp_path):
        path = tmp_path / "empty.seed"
        save_seed_file(Seed.empty(), str(path))
        assert load_seed_file(str(path)).labels == ()

    def test_diagonal_entry_invalid(self, tmp_path):
        path = tmp_path / "bad.seed"
        path.write_text(
            json.dumps(
                {
                    "variables": [{"id": "x1", "exchangeable": True}],
                    "matrix": [["x1", "x1", 1]],
                }
            )
        )
        with pytest.raises(InvalidSeed):
            load_seed_file(str(path))

    def test_undeclared_variable_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.seed"
        path.write_text(
            json.dumps(
                {
                    "variables": [{"id": "x1", "exchangeable": True}],
                    "matrix": [["x1", "zz", 1]],
                }
            )
        )
        with pytest.raises(ParseError):
            load_seed_file(str(path))

    def test_syntax_error_carries_location(self, tmp_path):
        path = tmp_path / "bad.seed"
        path.write_text("{ not json ")
        with pytest.raises(ParseError) as err:
            load_seed_file(str(path))
        assert err.value.line is not None

    def test_map_file_with_extra(self, files):
        src = load_seed_file(files["tideal.seed"])
        dst = load_seed_file(files["a2.seed"])
        m = load_map_file(files["tideal.map"], src, dst)
        assert m.assignment == {"a1": 1, "a2": -1, "x": 0}
        assert len(m.extra) == 1


class TestExitCodes:
    def test_check_morphism_pass(self, files, capsys):
        code, _ = run_cli(
            [
                "check-morphism",
                "--src", files["sig.seed"],
                "--dst", files["a2.seed"],
                "--map", files["f.map"],
                "--depth", "4",
            ],
            capsys,
        )
        assert code == 0

    def test_check_ideal_witness_exits_one(self, files, capsys):
        code, out = run_cli(
            [
                "check-ideal",
                "--src", files["tideal.seed"],
                "--dst", files["a2.seed"],
                "--map", files["tideal.map"],
            ],
            capsys,
        )
        assert code == 1
        assert "witness: y1" in out

    def test_validate_tri(self, files, capsys):
        code, _ = run_cli(["validate-tri", "--tri", files["pent.tri"]], capsys)
        assert code == 0

    def test_invalid_tri_exits_one(self, files, capsys):
        bad = dict(PENTAGON)
        bad["arcs"] = PENTAGON["arcs"][:5]  # edges only: not maximal
        path = files["dir"] / "bad.tri"
        path.write_text(json.dumps(bad))
        code, out = run_cli(["validate-tri", "--tri", str(path)], capsys)
        assert code == 1
        assert "not maximal" in out

    def test_missing_file_exits_three(self, files, capsys):
        code, _ = run_cli(["enumerate", "--seed", "/nonexistent.seed"], capsys)
        assert code == 3

    def test_unknown_flag_exits_three(self, files):
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "clusterlab.cli",
                "enumerate",
                "--seed", files["a2.seed"],
                "--frobnicate",
            ],
            capture_output=True,
        )
        assert proc.returncode == 3

    def test_positivity_path_quiver(self, files, capsys):
        code, out = run_cli(
            [
                "positivity",
                "--oracle", "path-quiver",
                "--sequence", "x0,x1",
                "--target", "x0",
            ],
            capsys,
        )
        assert code == 0
        assert "positive: True" in out

    def test_not_similar_exits_one(self, files, tmp_path, capsys):
        zero = {
            "variables": [
                {"id": "z1", "exchangeable": True},
                {"id": "z2", "exchangeable": True},
            ],
            "matrix": [],
        }
        path = tmp_path / "zero.seed"
        path.write_text(json.dumps(zero))
        code, _ = run_cli(
            ["similar", "--src", files["a2.seed"], "--dst", str(path)], capsys
        )
        assert code == 1

    def test_similar_opposite(self, files, tmp_path, capsys):
        opp = {
            "variables": A2["variables"],
            "matrix": [["y1", "y2", -1], ["y2", "y1", 1]],
        }
        path = tmp_path / "opp.seed"
        path.write_text(json.dumps(opp))
        code, out = run_cli(
            ["similar", "--src", files["a2.seed"], "--dst", str(path)], capsys
        )
        assert code == 0
        assert "similar: True" in out


class TestDeterminism:
    def test_byte_identical_reports(self, files):
        cmd = [
            sys.executable,
            "-m",
            "clusterlab.cli",
            "enumerate",
            "--seed", files["a2.seed"],
            "--depth", "5",
        ]
        a = subprocess.run(cmd, capture_output=True).stdout
        b = subprocess.run(cmd, capture_output=True).stdout
        assert a == b and a

    def test_structured_same_content(self, files, capsys):
        code, plain = run_cli(
            ["enumerate", "--seed", files["a2.seed"], "--depth", "5"], capsys
        )
        code2, structured = run_cli(
            [
                "--format", "structured",
                "enumerate",
                "--seed", files["a2.seed"],
                "--depth", "5",
            ],
            capsys,
        )
        assert code == code2 == 0
        data = json.loads(structured)
        assert data["count"] == 5
        assert all(v in plain for v in data["values"])


class TestCommands:
    def test_mutate_and_save(self, files, tmp_path, capsys):
        out = tmp_path / "mutated.seed"
        code, _ = run_cli(
            [
                "mutate",
                "--seed", files["a2.seed"],
                "--at", "y1",
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 0
        seed = load_seed_file(str(out))
        assert "y1'1" in seed.labels

    def test_mutate_coefficient_exits_three(self, files, capsys):
        code, _ = run_cli(
            ["mutate", "--seed", files["sig.seed"], "--at", "x1"], capsys
        )
        assert code == 3

    def test_components(self, files, capsys):
        code, out = run_cli(["components", "--seed", files["sig.seed"]], capsys)
        assert code == 0
        assert "count: 1" in out

    def test_coproduct_collision_exits_one_or_three(self, files, capsys):
        code, _ = run_cli(
            ["coproduct", "--seeds", files["a2.seed"], files["a2.seed"]], capsys
        )
        assert code in (1, 3)

    def test_flip_roundtrip(self, files, tmp_path, capsys):
        out1 = tmp_path / "flip1.tri"
        code, report = run_cli(
            [
                "flip",
                "--tri", files["pent.tri"],
                "--arc", "0/1~2/5",
                "--out", str(out1),
            ],
            capsys,
        )
        assert code == 0
        assert "added: 1/5~3/5" in report
        code, report = run_cli(
            ["flip", "--tri", str(out1), "--arc", "1/5~3/5"], capsys
        )
        assert code == 0
        assert "added: 0/1~2/5" in report

    def test_tri_seed(self, files, tmp_path, capsys):
        out = tmp_path / "pent.seed"
        code, _ = run_cli(
            ["tri-seed", "--tri", files["pent.tri"], "--out", str(out)], capsys
        )
        assert code == 0
        seed = load_seed_file(str(out))
        assert len(seed.labels) == 7
        assert len(seed.exchangeable) == 2

    def test_image_seed(self, files, capsys):
        code, out = run_cli(
            [
                "image-seed",
                "--src", files["sig.seed"],
                "--dst", files["a2.seed"],
                "--map", files["f.map"],
            ],
            capsys,
        )
        assert code == 0
        assert '"id": "y1"' in out or "id: y1" in out

    def test_limit_arcs(self, files, tmp_path, capsys):
        tri = {
            "families": [
                {
                    "kind": "left-fountain",
                    "base": "1/4",
                    "limit": "0",
                    "scale": "1/2",
                    "start": 4,
                },
                {
                    "kind": "right-fountain",
                    "base": "3/4",
                    "limit": "0",
                    "scale": "1/2",
                    "start": 4,
                },
            ],
            "arcs": [["1/4", "3/4"]],
            "points": ["1/2", "1/6", "5/6"],
        }
        path = tmp_path / "split.tri"
        path.write_text(json.dumps(tri))
        code, out = run_cli(["limit-arcs", "--tri", str(path)], capsys)
        assert code == 0
        assert "0/1~1/4" in out and "0/1~3/4" in out

    def test_filtration_exports_stages(self, files, tmp_path, capsys):
        outdir = tmp_path / "stages"
        code, _ = run_cli(
            [
                "filtration",
                "--oracle", "path-quiver",
                "--steps", "3",
                "--out-dir", str(outdir),
            ],
            capsys,
        )
        assert code == 0
        stage2 = load_seed_file(str(outdir / "stage2.seed"))
        assert len(stage2.labels) == 5

    def test_stable_mutate(self, files, capsys):
        code, out = run_cli(
            [
                "stable-mutate",
                "--oracle", "path-quiver",
                "--sequence", "x0",
                "--target", "x0",
            ],
            capsys,
        )
        assert code == 0
        assert "stage: 1" in out
        assert "x0^-1*x1 + x0^-1*xm1" in out


class TestMoreCli:
    def test_structured_error_output(self, files, capsys):
        code = main(["--format", "structured", "enumerate", "--seed", "/missing"])
        out = capsys.readouterr().out
        assert code == 3
        assert json.loads(out)["error"]

    def test_filtration_from_triangulation_file(self, files, capsys):
        code, out = run_cli(
            ["filtration", "--tri", files["pent.tri"], "--steps", "4"], capsys
        )
        assert code == 0
        assert "triangulation-glueing" in out

    def test_enumerate_default_depth_six(self, files, capsys):
        code, out = run_cli(["enumerate", "--seed", files["sig.seed"]], capsys)
        assert code == 0
        assert "count: 6" in out


class TestMutatedSeedFiles:
    def test_mutated_seed_roundtrip(self, files, tmp_path):
        from clusterlab.seeds import mutate_seed

        seed = load_seed_file(files["a2.seed"])
        mutated = mutate_seed(seed, "y1")
        path = tmp_path / "mutated.seed"
        save_seed_file(mutated, str(path))
        again = load_seed_file(str(path))
        assert again.same_seed(mutated)
        assert "y1'1" in again.labels
