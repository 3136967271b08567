import json

import pytest

from treemla import exact_mla, generate_tree, mla_free, parse_tree, SolverConfig
from treemla.cli import main, shrink


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_solve_complete_binary(capsys):
    code, rep = run_json(capsys, "solve", "--gen", "complete-binary:5", "--mode", "fix-b")
    assert code == 0
    assert rep["results"]["fix_b"] == {"cost": 60, "recomputed_cost": 60, "self_check": "pass"}
    assert sorted(rep["arrangement"]) == list(range(1, 32))


def test_solve_path(capsys):
    code, out, _ = run(capsys, "solve", "--gen", "path:5")
    assert code == 0 and "cost = 4" in out


def test_solve_with_oracle(capsys):
    code, rep = run_json(capsys, "solve", "--gen", "star:4", "--oracle")
    assert code == 0
    assert rep["results"]["fix_b"]["cost"] == 4
    assert rep["oracle"] == {"cost": 4, "method": "subset_dp", "match": True}


def test_solve_original_bug_exits_3(capsys):
    code, rep = run_json(capsys, "solve", "--gen", "complete-binary:5", "--mode", "original-bug")
    assert code == 3
    r = rep["results"]["original_bug"]
    assert r["cost"] < 60 == r["recomputed_cost"] and r["self_check"] == "fail"


def test_solve_anchored_file(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("4\n1 2\n1 3\n1 4\n")
    code, rep = run_json(capsys, "solve", str(f), "--anchor", "1", "--oracle", "--trace")
    assert code == 0
    assert rep["results"]["fix_b"]["cost"] == 5 and rep["oracle"]["match"]
    assert rep["trace"] and rep["trace"][0]["anchor"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("solve",),
        ("solve", "--gen", "complete-binary:0"),
        ("solve", "--gen", "path:x"),
        ("solve", "--gen", "path:5", "--mode", "fix-c"),
        ("solve", "--gen", "path:5", "--anchor", "9"),
        ("solve", "--gen", "path:30", "--oracle"),
        ("solve", "/nonexistent/file.txt"),
        ("solve", "--gen", "path:5", "--vstar", "sometimes"),
        ("bogus",),
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_file_reports_line(capsys, tmp_path):
    f = tmp_path / "cyc.txt"
    f.write_text("3\n1 2\n1 3\n2 3\n")
    code, _, err = run(capsys, "solve", str(f))
    assert code == 2 and "line 4" in err and "cycle" in err


def test_generate_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "random-prufer:9", "--seed", "4")
    assert code == 0
    assert parse_tree(out) == generate_tree("random_prufer", 9, seed=4)
    dest = tmp_path / "g.txt"
    assert main(["generate", "caterpillar:3,1", "--out", str(dest)]) == 0
    assert parse_tree(dest.read_text()).n == 6


@pytest.mark.parametrize("order, expected", [("1 2 3", 2), ("2 1 3", 3)])
def test_check(capsys, tmp_path, order, expected):
    (tmp_path / "t.txt").write_text("3\n1 2\n2 3\n")
    (tmp_path / "a.txt").write_text(order + "\n")
    code, out, _ = run(capsys, "check", str(tmp_path / "t.txt"), str(tmp_path / "a.txt"))
    assert code == 0 and out.strip() == str(expected)


def test_check_duplicate(capsys, tmp_path):
    (tmp_path / "t.txt").write_text("3\n1 2\n2 3\n")
    (tmp_path / "a.txt").write_text("1 1 3\n")
    code, _, err = run(capsys, "check", str(tmp_path / "t.txt"), str(tmp_path / "a.txt"))
    assert code == 2 and "duplicate" in err


def test_difftest_clean(capsys):
    code, rep = run_json(capsys, "difftest", "--modes", "fix-a,fix-b", "--trials", "60", "--nmax", "14", "--seed", "7")
    assert code == 0
    assert rep["discrepancy_count"] == 0 and rep["modes_agree"] is True


def test_difftest_spec_run(capsys):
    code, rep = run_json(capsys, "difftest", "--modes", "fix-b", "--trials", "500", "--nmax", "18", "--seed", "7")
    assert code == 0 and rep["trials"] == 500 and rep["discrepancy_count"] == 0


def test_difftest_bug_on_complete_binary(capsys, tmp_path):
    code, rep = run_json(
        capsys, "difftest", "--modes", "original-bug", "--gen", "complete-binary:5", "--out", str(tmp_path)
    )
    assert code == 3
    (d,) = rep["discrepancies"]
    assert d["kind"] == "self_check" and d["reported"] < d["oracle"] == 60
    small = parse_tree((tmp_path / d["fixture"]).read_text())
    assert small.n == d["shrunk_n"] < 31
    # fixture still fails on its own
    res = mla_free(small, SolverConfig(mode="original_bug"))
    assert not res.self_check
    # and is leaf-minimal
    for leaf in [v for v in small.vertices if small.degree(v) == 1]:
        keep = [v for v in small.vertices if v != leaf]
        sub = small.induced(keep)
        assert mla_free(sub, SolverConfig(mode="original_bug")).self_check


def test_difftest_finds_bug_in_random_trees(capsys):
    code, rep = run_json(
        capsys, "difftest", "--modes", "original-bug", "--trials", "40", "--nmin", "8", "--nmax", "16",
        "--seed", "3", "--p", "min",
    )
    assert code == 3 and rep["discrepancy_count"] > 0
    for d in rep["discrepancies"]:
        small = parse_tree(d["shrunk_tree"])
        res = mla_free(small, SolverConfig(mode="original_bug", p_policy="min_over_all"))
        assert d["shrunk"]["kind"] == d["kind"]
        assert (not res.self_check) or res.cost != exact_mla(small).cost


def test_difftest_errors(capsys):
    assert run(capsys, "difftest", "--modes", "fix-z")[0] == 2
    assert run(capsys, "difftest", "--nmax", "30")[0] == 2
    assert run(capsys, "difftest", "--nmin", "9", "--nmax", "4")[0] == 2


def test_difftest_deterministic(capsys):
    argv = ("difftest", "--trials", "30", "--nmax", "13", "--seed", "99", "--modes", "fix-a,original-bug", "--p", "min")
    reports = []
    for _ in range(2):
        _, rep = run_json(capsys, *argv)
        rep.pop("wall_time")
        reports.append(json.dumps(rep, sort_keys=True))
    assert reports[0] == reports[1]


def test_bugdemo(capsys):
    code, rep = run_json(capsys, "bugdemo")
    assert code == 0
    rows = {r["k"]: r for r in rep["rows"]}
    assert set(rows) == {2, 3, 4, 5, 6}
    for k in (2, 3, 4):
        assert {rows[k][m]["cost"] for m in ("fix_a", "fix_b", "original_bug")} == {rows[k]["closed_form"]}
    assert rows[2]["closed_form"] == 2 and rows[3]["closed_form"] == 8
    r5 = rows[5]
    assert r5["closed_form"] == r5["fix_a"]["cost"] == r5["fix_b"]["cost"] == 60
    assert r5["original_bug"]["cost"] < 60 and r5["original_bug"]["self_check"] == "fail"


def test_bugdemo_text(capsys):
    code, out, _ = run(capsys, "bugdemo", "--kmax", "5")
    assert code == 0 and "pass/pass/fail" in out


def test_shrink_minimises():
    t = generate_tree("path", 12)
    small = shrink(t, lambda x: x.n >= 4)
    assert small.n == 4
