import json
from fractions import Fraction

import pytest

from main import main
from simpol.fixtures import fixture_path
from simpol.tools import cmd_check, cmd_cycle_vertices, parse_labels


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_cycle_vertices_counts(capsys):
    code, report = run_json(capsys, "cycle-vertices", "--n", "4", "--d", "2", "--count-only")
    assert code == 0
    assert report["total"] == 24
    assert report["per_k"] == {"1": 16, "2": 8}
    assert "vertices" not in report


def test_cycle_vertices_contextual_terms(capsys):
    code, report = run_json(capsys, "cycle-vertices", "--n", "2", "--d", "4", "--contextual-only", "--count-only")
    assert code == 0
    assert report["per_k"] == {"2": 72, "3": 192, "4": 144}


def test_cycle_vertices_enumeration(capsys):
    code, report = run_json(capsys, "cycle-vertices", "--n", "2", "--d", "2")
    assert code == 0
    assert len(report["vertices"]) == 6
    assert report["vertices"][0] == {"k": 1, "rows": [[0, 0]]}
    assert report["vertices"][-1] == {"k": 2, "rows": [[0, 1], [1, 0]]}


def test_cycle_vertices_sampling_is_seeded():
    first, _ = cmd_cycle_vertices(3, 5, sample=4, seed=7)
    second, _ = cmd_cycle_vertices(3, 5, sample=4, seed=7)
    assert first.seed == 7
    assert first.vertices == second.vertices
    assert len(first.vertices) == 4


def test_cycle_vertices_bundle(capsys):
    code, report = run_json(capsys, "cycle-vertices", "--arities", "2,3", "--contextual-only", "--count-only")
    assert code == 0
    assert report["total"] == 6
    assert report["arities"] == [2, 3]


def test_check_classify_pr_box(capsys):
    code, out = run(capsys, "check", "--dist", str(fixture_path("pr_box")), "--classify")
    assert code == 0
    assert "CONTEXTUAL_VERTEX" in out


def test_check_vertex_predicate_fails_for_interior_point(capsys):
    code, report = run_json(capsys, "check", "--dist", str(fixture_path("uniform_c3_d2")), "--vertex")
    assert code == 1
    assert report["vertex"] is False
    assert report["kernel_direction"]
    assert report["epsilon"]


def test_check_contextual_gives_decomposition():
    report, code = cmd_check(fixture_path("uniform_c3_d2"), contextual=True)
    assert code == 1
    assert report.contextual is False
    assert sum(Fraction(term.weight) for term in report.decomposition) == 1


def test_check_strong(capsys):
    code, _ = run(capsys, "check", "--dist", str(fixture_path("cycle2_z4_order3")), "--strong", "--vertex")
    assert code == 0


def test_check_invalid_distribution(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "scenario": "cycle:2:2",
        "matrices": {"e1": [[1, 0], [0, 0]], "e2": [[0, 0], [0, 1]]},
    }), encoding="utf-8")
    code, report = run_json(capsys, "check", "--dist", str(path), "--vertex")
    assert code == 1
    assert report["valid"] is False
    assert any("non-signaling" in v for v in report["violations"])


def test_face(capsys):
    code, report = run_json(capsys, "face", "--n", "4", "--d", "2", "--labels", "1,0,0,0")
    assert code == 0
    assert report["kind"] == "SINGLETON"
    assert report["certified_vertex"] is True
    assert report["distribution"]["matrices"]["e1"] == [["0", "1/2"], ["1/2", "0"]]


def test_face_of_null_homotopic_labels(capsys):
    code, report = run_json(capsys, "face", "--n", "3", "--d", "2", "--labels", "0,1,1")
    assert code == 0
    assert report["null_homotopic"] is True
    assert report["kind"] == "NONEMPTY_DIM"
    assert report["certified_vertex"] is False


def test_glue_check(capsys):
    code, report = run_json(capsys, "glue-check", "--dist", str(fixture_path("pr_box")), "--piece-a", "e1")
    assert code == 0
    assert report["status"] == "VERTEX"
    assert report["piece_b"] == ["e2", "e3", "e4"]
    assert [e["weight"] for e in report["vsupp_a"]] == ["1/2", "1/2"]


def test_oracle_enumerate(capsys):
    code, report = run_json(capsys, "oracle-enumerate", "--scenario", str(fixture_path("uniform_c3_d2")))
    assert code == 0
    assert report["count"] == 12
    assert report["support_restricted"] is False


def test_oracle_enumerate_within_support(capsys):
    path = str(fixture_path("pr_box"))
    code, report = run_json(capsys, "oracle-enumerate", "--scenario", path, "--support-of", path)
    assert code == 0
    assert report["count"] == 1


def test_pushforward(capsys):
    code, report = run_json(capsys, "pushforward", "--dist", str(fixture_path("pr_box")), "--embed", "3")
    assert code == 0
    assert report["tags_agree"] and report["pullback_roundtrip"]
    assert report["target_tag"] == "CONTEXTUAL_VERTEX"


def test_pushforward_with_map_file(capsys):
    maps = str(fixture_path("cycle4_d2_to_d3_map"))
    code, report = run_json(capsys, "pushforward", "--dist", str(fixture_path("pr_box")), "--maps", maps)
    assert code == 0
    assert report["distribution"]["matrices"]["e1"][2] == ["0", "1/2", "0"]


def test_verify_paper(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _ = run(capsys, "verify-paper", "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["passed"] is True
    assert {e["name"] for e in report["examples"]} == {
        "cycle2_z4_order3", "pr_box", "trichotomic", "bell_233", "vertex_count",
    }


@pytest.mark.parametrize("argv", [
    ["check", "--dist", "does/not/exist.json", "--vertex"],
    ["face", "--n", "4", "--d", "2", "--labels", "a,b"],
    ["face", "--n", "4", "--d", "2", "--labels", "1,0"],
    ["pushforward", "--dist", str(fixture_path("pr_box"))],
    ["cycle-vertices", "--n", "1", "--d", "2"],
    ["glue-check", "--dist", str(fixture_path("pr_box")), "--piece-a", "e9"],
])
def test_bad_input_exits_with_two(argv, capsys):
    assert main(argv) == 2


def test_parse_labels():
    assert parse_labels("1, 0,2") == [1, 0, 2]
