import io
import json
from fractions import Fraction

import pytest

from fragchain import catalan, dist_discrete, mobius, tree_prob_discrete
from fragchain.cli import run
from fragchain.serialize import dist_from_csv, fragtree_to_dict


@pytest.fixture
def rates_file(tmp_path):
    p = tmp_path / "rates.json"
    p.write_text(json.dumps({"mode": "discrete",
                             "rho": {"1": 0.1, "2": 0.05, "3": 0.2,
                                     "4": 0.1, "5": 0.15}}))
    return str(p)


@pytest.fixture
def crates_file(tmp_path):
    p = tmp_path / "crates.json"
    p.write_text(json.dumps({"mode": "continuous",
                             "rho": {"1": 0.7, "2": 1.3, "3": 0.4}}))
    return str(p)


@pytest.fixture
def tree_file(tmp_path):
    p = tmp_path / "tree.json"
    p.write_text(json.dumps({"links": [1, 5], "root": 3, "edges": [[3, 4]]}))
    return str(p)


@pytest.fixture
def rooted_file(tmp_path):
    p = tmp_path / "rooted.json"
    p.write_text(json.dumps({"root": 0,
                             "edges": [[0, 1], [0, 2], [1, 3], [1, 4]]}))
    return str(p)


def test_dist_subset(rates_file, capsys, rates5):
    assert run(["dist", "--rates", rates_file, "--time", "3",
                "--subset", "2,4"]) == 0
    out = capsys.readouterr().out
    table = dist_from_csv(io.StringIO(out))
    assert abs(table[(2, 4)] - dist_discrete([2, 4], rates5, 3)) < 1e-15


def test_dist_full_table(rates_file, tmp_path, rates5):
    out = tmp_path / "table.csv"
    assert run(["dist", "--rates", rates_file, "--time", "2",
                "--out", str(out)]) == 0
    with open(out) as fh:
        table = dist_from_csv(fh)
    assert len(table.entries) == 32
    assert abs(table.total() - 1.0) < 1e-12


def test_dist_exact_json(rates_file, capsys):
    assert run(["dist", "--rates", rates_file, "--time", "2",
                "--subset", "3", "--exact", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    (entry,) = d["entries"]
    assert entry["subset"] == [3]
    assert Fraction(entry["probability"]).denominator > 1


def test_dist_oracle_route_agrees(rates_file, capsys):
    assert run(["dist", "--rates", rates_file, "--time", "4"]) == 0
    direct = capsys.readouterr().out
    assert run(["dist", "--rates", rates_file, "--time", "4", "--oracle"]) == 0
    oracle = capsys.readouterr().out
    a = dist_from_csv(io.StringIO(direct))
    b = dist_from_csv(io.StringIO(oracle))
    assert set(a.entries) == set(b.entries)
    assert all(abs(a[g] - b[g]) < 1e-12 for g in a.entries)


def test_dist_endpoints(rates_file, capsys):
    assert run(["dist", "--rates", rates_file, "--time", "4",
                "--subset", "1,5", "--endpoints"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("subset,probability\n1;5,")


def test_dist_continuous(crates_file, capsys):
    assert run(["dist", "--rates", crates_file, "--time", "0.7",
                "--subset", "2"]) == 0
    assert capsys.readouterr().out.startswith("subset,probability\n2,")


def test_dist_bad_time(rates_file):
    assert run(["dist", "--rates", rates_file, "--time", "1.5",
                "--subset", "2"]) == 2


def test_dist_missing_rates_file(tmp_path):
    assert run(["dist", "--rates", str(tmp_path / "nope.json"),
                "--time", "1"]) == 2


def test_treeprob(rates_file, tree_file, capsys, rates5):
    assert run(["treeprob", "--rates", rates_file, "--tree", tree_file,
                "--time", "5"]) == 0
    from fragchain import FragTree
    expected = tree_prob_discrete(FragTree(5, 3, {}, {3: 4}), rates5, 5)
    assert float(capsys.readouterr().out) == pytest.approx(expected, abs=1e-15)


def test_treeprob_rejects_rooted_file(rates_file, rooted_file):
    assert run(["treeprob", "--rates", rates_file, "--tree", rooted_file,
                "--time", "2"]) == 2


def test_trees_count(capsys):
    assert run(["trees", "--links", "6", "--subset", "2,3,5",
                "--format", "count"]) == 0
    assert int(capsys.readouterr().out) == catalan(3)


def test_trees_json(capsys):
    assert run(["trees", "--links", "4", "--subset", "1,3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 2
    assert all(d["links"] == [1, 4] for d in payload)


def test_trees_budget_exceeded():
    assert run(["trees", "--links", "5", "--subset", "2,4",
                "--format", "count", "--budget", "1"]) == 3


def test_poset_summary(rooted_file, capsys):
    assert run(["poset", "--tree", rooted_file]) == 0
    out = capsys.readouterr().out
    assert "edges: 4" in out
    assert "elements: 16" in out
    assert "cover pairs: 24" in out
    assert "stump cut sets: 10" in out


def test_poset_interval(rooted_file, capsys):
    assert run(["poset", "--tree", rooted_file, "--interval", "3,4:"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["{}", "3", "4", "3,4"]


def test_poset_factorize(rooted_file, capsys):
    assert run(["poset", "--tree", rooted_file, "--factorize", "3,2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["2", "3"]


def test_poset_dot(rooted_file, capsys):
    assert run(["poset", "--tree", rooted_file, "--dot",
                "--highlight", "3,4"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph") and "bold" in out


def test_poset_incomparable_interval(rooted_file):
    assert run(["poset", "--tree", rooted_file, "--interval", "1:3"]) == 2


def test_mobius_values(rooted_file, capsys, tree4):
    cases = [("3,4", "", "1"), ("1,3,4", "", "0"), ("3", "", "-1")]
    for h, k, expected in cases:
        assert run(["mobius", "--tree", rooted_file,
                    "--from", h, "--to", k]) == 0
        assert capsys.readouterr().out.strip() == expected
        assert str(mobius(tree4, [int(x) for x in h.split(",") if x],
                          [int(x) for x in k.split(",") if x]).value) == expected
        assert run(["mobius", "--tree", rooted_file,
                    "--from", h, "--to", k, "--recursive"]) == 0
        assert capsys.readouterr().out.strip() == expected


def test_mobius_incomparable(rooted_file, capsys):
    assert run(["mobius", "--tree", rooted_file, "--from", "1", "--to", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0 (incomparable)"
    assert run(["mobius", "--tree", rooted_file, "--from", "1", "--to", "3",
                "--recursive"]) == 2


def test_simulate_subset(rates_file, capsys):
    assert run(["simulate", "--rates", rates_file, "--time", "3",
                "--subset", "2", "--samples", "3000"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["samples"] == 3000 and rep["seed"] == 1729
    assert abs(rep["z"]) < 4


def test_simulate_tree_and_coupled(rates_file, tree_file, capsys):
    assert run(["simulate", "--rates", rates_file, "--time", "3",
                "--tree", tree_file, "--samples", "3000"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert abs(rep["z"]) < 4
    assert run(["simulate", "--rates", rates_file, "--time", "3",
                "--tree", tree_file, "--samples", "3000", "--coupled"]) == 0
    repc = json.loads(capsys.readouterr().out)
    assert abs(repc["z"]) < 4
    assert rep["exact"] == repc["exact"]


def test_simulate_thread_invariance(rates_file, capsys):
    argv = ["simulate", "--rates", rates_file, "--time", "2",
            "--subset", "3", "--samples", "2000"]
    assert run(argv + ["--threads", "1"]) == 0
    one = capsys.readouterr().out
    assert run(argv + ["--threads", "4"]) == 0
    four = capsys.readouterr().out
    assert one == four


def test_simulate_needs_one_target(rates_file, tree_file):
    assert run(["simulate", "--rates", rates_file, "--time", "2"]) == 2
    assert run(["simulate", "--rates", rates_file, "--time", "2",
                "--tree", tree_file, "--subset", "2"]) == 2


def test_verify_passes(rates_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run(["verify", "--rates", rates_file, "--t-grid", "0,1,3",
                "--shape-edges", "3", "--inversion-trials", "5",
                "--samples", "2000", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "verify: PASS" in text
    assert "FAIL" not in text.replace("verify: PASS", "")
    rep = json.loads(out.read_text())
    assert rep["pass"] is True
    assert len(rep["groups"]) == 10


def test_verify_skips_mc_when_no_samples(capsys):
    assert run(["verify", "--n", "3", "--t-grid", "0,1",
                "--shape-edges", "2", "--inversion-trials", "3",
                "--samples", "0"]) == 0
    out = capsys.readouterr().out
    assert "skip  mc_tree_concordance" in out


def test_verify_negative_control(rates_file, capsys):
    code = run(["verify", "--rates", rates_file, "--t-grid", "1,3",
                "--shape-edges", "2", "--inversion-trials", "3",
                "--samples", "0", "--inject-perturbation", "1e-6"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL  discrete_formula_vs_matrix" in out
    assert "verify: FAIL" in out


def test_usage_errors():
    assert run(["no-such-command"]) == 2
    assert run(["dist"]) == 2  # missing required arguments
