import csv
import io
import json
from fractions import Fraction

import pytest

from netcoop.analysis import Proportional, regime_bound
from netcoop.cli import main, parse_int_range, parse_rational_range


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analyze_sustainable(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--n", "5", "--tau", "0", "--a", "1", "--b", "3", "--c", "2")
    doc = json.loads(out)
    assert code == 0
    assert Fraction(doc["bound_b"]) == 4 and doc["sustainable"] is True
    assert doc["decimal"]["bound_b"] == "4"


def test_analyze_full_delay(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--n", "5", "--tau", "4", "--a", "1", "--b", "3", "--c", "2",
                           "--format", "csv")
    (row,) = rows(out)
    assert code == 0
    assert Fraction(row["bound_b"]) == 2 and row["sustainable"] == "false"


def test_analyze_invalid(capsys):
    code, out, err = run_cli(capsys, "analyze", "--n", "5", "--tau", "0", "--a", "1", "--b", "2", "--c", "2")
    assert code == 2 and out == ""
    assert "b > c violated" in err


def test_analyze_rational_flags(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--n", "2", "--tau", "0", "--a", "1", "--b", "5/2", "--c", "2")
    doc = json.loads(out)
    assert doc["margin"] == "0/1" and doc["sustainable"] is True


def test_graph_path_stats(capsys):
    code, out, _ = run_cli(capsys, "graph", "--topology", "path", "--n", "4", "--delay", "2", "--stats")
    assert code == 0 and json.loads(out)["diameter"] == 6


def test_graph_load_triangle(capsys, tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("# triangle\n0 1 5\n1 2 5\n0 2 20\n")
    code, out, _ = run_cli(capsys, "graph", "--load", str(f), "--stats")
    doc = json.loads(out)
    assert code == 0 and doc["diameter"] == 10
    assert doc["distance_histogram"] == {"5": 2, "10": 1}


def test_graph_load_errors(capsys, tmp_path):
    f = tmp_path / "bad.edges"
    f.write_text("0 1 1\n1 2 x\n")
    code, _, err = run_cli(capsys, "graph", "--load", str(f), "--stats")
    assert code == 2 and "line 2" in err
    code, _, err = run_cli(capsys, "graph", "--load", str(tmp_path / "missing"), "--stats")
    assert code == 2


def test_graph_ba_stats(capsys):
    code, out, _ = run_cli(capsys, "graph", "--topology", "barabasi_albert", "--n", "1000", "--ba-m", "2",
                           "--delay", "1", "--seed", "7", "--stats")
    doc = json.loads(out)
    assert code == 0 and doc["nodes"] == 1000 and doc["edges"] == 1997
    assert doc["diameter"] < 100


def test_graph_ba_multi_seed(capsys):
    code, out, _ = run_cli(capsys, "graph", "--topology", "barabasi_albert", "--n", "200", "--ba-m", "2",
                           "--seed", "3", "--seeds", "4", "--stats")
    doc = json.loads(out)
    assert code == 0 and doc["seeds"] == [3, 4, 5, 6]
    assert Fraction(doc["mean_diameter"]) == Fraction(sum(doc["diameters"]), 4)


def test_graph_write_edges(capsys, tmp_path):
    out_file = tmp_path / "c.edges"
    code, _, _ = run_cli(capsys, "graph", "--topology", "cycle", "--n", "5", "--delay", "3", "--out", str(out_file))
    assert code == 0
    code, out, _ = run_cli(capsys, "graph", "--load", str(out_file), "--stats")
    assert json.loads(out)["diameter"] == 6


def test_graph_needs_one_source(capsys):
    code, _, err = run_cli(capsys, "graph", "--stats")
    assert code == 2 and "exactly one" in err


def test_simulate_exhaustive_omniscient(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--topology", "complete", "--n", "3", "--delay", "1",
                           "--a", "1", "--b", "3", "--c", "2", "--deviator", "omniscient:1", "--perms", "exhaustive")
    doc = json.loads(out)
    assert code == 0 and Fraction(doc["deviator_mean"]) == 7
    assert doc["schedule_count"] == 6


def test_simulate_none(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--topology", "complete", "--n", "3", "--delay", "1",
                           "--a", "1", "--b", "3", "--c", "2", "--deviator", "none")
    doc = json.loads(out)
    assert [Fraction(x) for x in doc["totals"]] == [6, 6]


def test_simulate_path2(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--topology", "path", "--n", "2", "--delay", "1",
                           "--a", "1", "--b", "3", "--c", "2", "--deviator", "omniscient:2", "--perms", "exhaustive")
    assert Fraction(json.loads(out)["deviator_mean"]) == 5


def test_simulate_family_and_sample(capsys):
    argv = ["simulate", "--topology", "path", "--n", "6", "--delay", "1", "--a", "1", "--b", "3", "--c", "2",
            "--deviator", "go:all", "--perms", "sample:50", "--seed", "11", "--format", "csv"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    table = rows(out)
    assert [r["deviator"] for r in table] == [f"go:{i}" for i in range(6)]
    _, again, _ = run_cli(capsys, *argv)
    assert again == out


def test_simulate_trace(capsys, tmp_path):
    trace = tmp_path / "t.csv"
    code, out, _ = run_cli(capsys, "simulate", "--topology", "path", "--n", "3", "--delay", "1",
                           "--a", "1", "--b", "3", "--c", "2", "--deviator", "go:1", "--schedule", "1,0,2",
                           "--trace", str(trace))
    assert code == 0
    text = trace.read_text()
    assert text.splitlines()[0] == "round,location,action_p1,action_p2,pay_p1,pay_p2"
    assert text.splitlines()[1] == "1,1,D,C,3/1,0/1"
    trace_json = tmp_path / "t.json"
    run_cli(capsys, "simulate", "--topology", "path", "--n", "3", "--a", "1", "--b", "3", "--c", "2",
            "--deviator", "omniscient:2", "--trace", str(trace_json))
    assert json.loads(trace_json.read_text())["alarm_log"]["origin_round"] == 2


def test_simulate_guard(capsys):
    code, _, err = run_cli(capsys, "simulate", "--topology", "path", "--n", "9", "--a", "1", "--b", "3",
                           "--c", "2", "--deviator", "none", "--perms", "exhaustive")
    assert code == 3 and "n <= 8" in err


def test_simulate_bad_deviator(capsys):
    code, _, _ = run_cli(capsys, "simulate", "--topology", "path", "--n", "3", "--a", "1", "--b", "3",
                         "--c", "2", "--deviator", "sneaky")
    assert code == 2
    code, _, _ = run_cli(capsys, "simulate", "--topology", "path", "--n", "3", "--a", "1", "--b", "3",
                         "--c", "2", "--deviator", "omniscient:7")
    assert code == 2


def test_sweep_n_flip(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "2..10", "--tau", "0", "--a", "1", "--b", "3", "--c", "2")
    table = rows(out)
    assert code == 0
    assert list(table[0])[:10] == ["n", "tau", "a", "b", "c", "bound_b", "sustainable", "v_avg", "n_c", "margin"]
    assert [(int(r["n"]), r["sustainable"]) for r in table][:2] == [(2, "false"), (3, "true")]
    assert all(r["sustainable"] == "true" for r in table[1:])
    assert "\r" not in out


def test_sweep_alpha_converges(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "10000", "--alpha", "0.1..0.9:0.1", "--a", "1", "--b", "3",
                           "--c", "2")
    table = rows(out)
    assert len(table) == 9
    for r in table:
        alpha = Fraction(r["alpha"])
        assert int(r["tau"]) == round(alpha * 10000)
        limit = regime_bound(Proportional(alpha), a=1, c=2)
        assert abs(Fraction(r["bound_b"]) - limit) <= Fraction(1, 100)


def test_sweep_tau_all_decreasing(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "12", "--tau-all", "--a", "1", "--b", "3", "--c", "2")
    bounds = [Fraction(r["bound_b"]) for r in rows(out)]
    assert len(bounds) == 12
    assert all(x > y for x, y in zip(bounds, bounds[1:]))


def test_sweep_json_and_invalid(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "3,4", "--tau", "0..1", "--a", "1", "--b", "3,4", "--c", "2",
                           "--format", "json")
    doc = json.loads(out)
    assert [(d["n"], d["tau"], d["b"]) for d in doc] == [
        (3, 0, "3/1"), (3, 0, "4/1"), (3, 1, "3/1"), (3, 1, "4/1"),
        (4, 0, "3/1"), (4, 0, "4/1"), (4, 1, "3/1"), (4, 1, "4/1"),
    ]
    code, _, _ = run_cli(capsys, "sweep", "--n", "3", "--tau", "0", "--a", "1", "--b", "2", "--c", "2")
    assert code == 2
    code, _, _ = run_cli(capsys, "sweep", "--n", "3", "--alpha", "1.5", "--a", "1", "--b", "3", "--c", "2")
    assert code == 2
    code, _, _ = run_cli(capsys, "sweep", "--n", "3", "--a", "1", "--b", "3", "--c", "2")
    assert code == 2


def test_verify_vt(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "vt", "--n", "3", "--delta", "1")
    assert code == 0 and json.loads(out)["all_passed"] is True


def test_verify_vt_random_trials(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "vt", "--n", "4", "--delta", "2", "--trials", "3",
                           "--seed", "9")
    doc = json.loads(out)
    assert code == 0 and len(doc["config"]["payoffs"]) == 4 and len(doc["checks"]) == 16


def test_verify_boundary(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "boundary", "--n", "2", "--tau", "0", "--a", "1", "--c", "2")
    doc = json.loads(out)
    assert code == 0
    at = next(ch for ch in doc["checks"] if ch["name"] == "engine mean at bound == n*c")
    assert Fraction(at["lhs"]) == 4 == Fraction(at["rhs"])


def test_verify_search(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "search", "--n", "3", "--delta", "0", "--a", "1",
                           "--b", "4", "--c", "2", "--family", "both")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["profitable"] is True
    assert doc["all_passed"] is True


def test_verify_guard(capsys):
    code, _, _ = run_cli(capsys, "verify", "--suite", "vt", "--n", "9")
    assert code == 3


def test_ranges():
    assert parse_int_range("2..4,7") == [2, 3, 4, 7]
    assert parse_rational_range("0.1..0.3:0.1") == [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10)]
    assert parse_rational_range("1/3,2") == [Fraction(1, 3), 2]
    with pytest.raises(ValueError):
        parse_int_range("5..2")
    with pytest.raises(ValueError):
        parse_rational_range("a")


def test_bad_seed_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["graph", "--topology", "barabasi_albert", "--n", "10", "--seed", "-1", "--stats"])
    assert exc.value.code == 2
