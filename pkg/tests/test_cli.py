import json

import pytest

from pentachain import MoveSite, NotAcyclicError, apply_move, load_builtin
from pentachain import cli


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_invariant_sphere(capsys):
    code, out, _ = run(capsys, ["invariant", "--builtin", "s3"])
    assert code == 0
    assert "abs_invariant: 1" in out


def test_invariant_projective_space(capsys):
    code, out, _ = run(capsys, ["invariant", "--builtin", "rp3", "--json"])
    assert code == 0
    report = json.loads(out)
    assert report["abs_invariant"] == "64"
    assert report["ranks"] == [6, 6, 6, 6, 6]


def test_seed_changes_tau_not_invariant(capsys):
    reports = []
    for seed in ("7", "8"):
        code, out, _ = run(capsys, ["invariant", "--builtin", "s3", "--seed", seed, "--json"])
        assert code == 0
        reports.append(json.loads(out))
    assert reports[0]["abs_invariant"] == reports[1]["abs_invariant"] == "1"
    assert reports[0]["tau"] != reports[1]["tau"]


def test_json_reports_reproducible(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, ["invariant", "--builtin", "rp3", "--seed", "3", "--json"])
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_file_input_round_trip(tmp_path, capsys):
    path = tmp_path / "sphere.tri"
    path.write_text(load_builtin("s3").to_text())
    code, out, _ = run(capsys, ["invariant", "--file", str(path)])
    assert code == 0
    assert "abs_invariant: 1" in out


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.tri"
    path.write_text("this is not a triangulation\n")
    code, _, err = run(capsys, [" invariant".strip(), "--file", str(path)])
    assert code == 2
    assert "error" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, ["invariant", "--file", "/nonexistent/x.tri"])
    assert code == 2


def test_validation_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.tri"
    path.write_text(
        "pentachain-tri v1\ntetrahedra 2\n"
        "tet 0: 1:0213 1:0123 1:0123 1:0123\n"
        "tet 1: 0:0213 0:0123 0:0123 0:0123\n"
    )
    code, _, err = run(capsys, ["invariant", "--file", str(path)])
    assert code == 3
    assert "orientable" in err


def test_degenerate_geometry_exit_code(tmp_path, capsys):
    degenerate = apply_move(load_builtin("s3"), MoveSite("2->3", (0, 0)))
    path = tmp_path / "degenerate.tri"
    path.write_text(degenerate.to_text())
    code, _, err = run(capsys, ["invariant", "--file", str(path), "--retries", "10"])
    assert code == 4
    assert "1->4" in err


def test_not_acyclic_exit_code(capsys, monkeypatch):
    def fake_invariant(*args, **kwargs):
        raise NotAcyclicError((6, 6, 5, 6, 6), (6, 6, 6, 6, 6))

    monkeypatch.setattr(cli, "invariant", fake_invariant)
    code, _, err = run(capsys, ["invariant", "--builtin", "rp3"])
    assert code == 5
    assert "not acyclic" in err


def test_invariance_violation_exit_code(capsys, monkeypatch):
    def fake_verify_pentagon(cfg):
        return 0, 1, False

    monkeypatch.setattr(cli, "verify_pentagon", fake_verify_pentagon)
    code, _, err = run(capsys, ["verify", "--pentagon-only", "--samples", "1"])
    assert code == 6
    assert "pentagon" in err


def test_geometry_override(tmp_path, capsys):
    lines = [
        "vertex 0 0 0 0",
        "vertex 1 1 0 0",
        "vertex 2 0 1 0",
        "vertex 3 1 1 0",
    ]
    path = tmp_path / "geom.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(
        capsys, ["invariant", "--builtin", "s3", "--geometry", str(path), "--json"]
    )
    assert code == 0
    report = json.loads(out)
    assert report["tau"] in ("512", "-512")
    assert report["abs_invariant"] == "1"


def test_verify_quick(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "--builtin", "s3", "--walks", "1", "--steps", "6",
         "--samples", "10", "--chain-seeds", "2", "--partition-seeds", "3",
         "--geometry-seeds", "3"],
    )
    assert code == 0
    assert "pachner_walks" in out


def test_verify_pentagon_only(capsys):
    code, out, _ = run(capsys, ["verify", "--pentagon-only", "--samples", "25"])
    assert code == 0
    assert "pentagon" in out


def test_verify_requires_input_unless_pentagon_only(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify"])
    assert exc.value.code == 2


def test_pentagon_command(capsys):
    code, out, _ = run(capsys, ["pentagon", "--samples", "15", "--json"])
    assert code == 0
    assert json.loads(out)["pentagon_identity"] == "pass"


def test_pachner_command(tmp_path, capsys):
    out_path = tmp_path / "walked.tri"
    code, out, _ = run(
        capsys,
        ["pachner", "--builtin", "rp3", "--steps", "6", "--seed", "2", "--out", str(out_path), "--json"],
    )
    assert code == 0
    walked = load_builtin("rp3").from_file(out_path)
    report = json.loads(out)
    assert report["f_vector_after"] == list(walked.f_vector())


def test_dump_chain_command(capsys):
    code, out, _ = run(capsys, ["dump-chain", "--builtin", "s3", "--seed", "1"])
    assert code == 0
    first = out.splitlines()[0].split()
    assert first[0] in {"f1", "f2", "f4", "f5"}
    assert len(first) == 4


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["invariant"])
    assert exc.value.code == 2
