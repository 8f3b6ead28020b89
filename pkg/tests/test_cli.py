import itertools
import json

import pytest

from satprop import cli
from satprop.cli import (
    EXIT_DISAGREE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNSAT,
    main,
    parse_gen_spec,
    parse_order,
)

UNSAT_CNF = "p cnf 3 8\n" + "".join(
    " ".join(str(v if s else -v) for v, s in zip((1, 2, 3), signs)) + " 0\n"
    for signs in itertools.product([False, True], repeat=3)
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- config parsing -----------------------------------------------------------

def test_parse_gen_spec_forms():
    spec = parse_gen_spec("n=12,m=42,seed=7")
    assert (spec.n, spec.m_points, spec.seed, spec.count) == (12, [42], 7, 1)
    spec = parse_gen_spec("n=12,m=12..72..6,seed=5,count=50")
    assert spec.m_points == list(range(12, 73, 6))
    spec = parse_gen_spec("n=12,m=12..72,seed=5")
    assert spec.m_points == list(range(12, 73, 6))
    with pytest.raises(ValueError):
        parse_gen_spec("n=12,seed=7")
    with pytest.raises(ValueError):
        parse_gen_spec("n=12,m=9..3,seed=7")


def test_parse_order_forms():
    assert parse_order("fifo") == ("fifo", None)
    assert parse_order("random:9") == ("random", 9)
    with pytest.raises(ValueError):
        parse_order("lifo")


def test_input_and_gen_mutually_exclusive(capsys, tmp_path):
    path = tmp_path / "x.cnf"
    path.write_text("p cnf 3 1\n1 2 3 0\n")
    code, _, err = run(capsys, "solve", "--input", str(path), "--gen",
                       "n=3,m=1,seed=1")
    assert code == EXIT_PARSE
    assert "mutually exclusive" in err


# --- solve --------------------------------------------------------------------

def test_solve_single_clause(capsys, tmp_path):
    path = tmp_path / "one.cnf"
    path.write_text("p cnf 3 1\n-1 2 -3 0\n")
    code, out, _ = run(capsys, "solve", "--input", str(path), "--oracle", "on")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["engine_verdict"] == "no_empty_cube"
    assert report["cubes"] == [{"triple": [1, 2, 3], "mask": "0xDF"}]
    assert report["oracle_verdict"] == "sat"
    assert report["oracle_agrees"] is True
    assert report["assignment_verified"] is True


def test_solve_unsat_exit_code(capsys, tmp_path):
    path = tmp_path / "unsat.cnf"
    path.write_text(UNSAT_CNF)
    code, out, _ = run(capsys, "solve", "--input", str(path), "--oracle", "on")
    assert code == EXIT_UNSAT
    report = json.loads(out)
    assert report["engine_verdict"] == "unsat_by_empty_cube"
    assert report["empty_triple"] == [1, 2, 3]
    assert report["oracle_agrees"] is True


def test_solve_oracle_off_reports_null(capsys, tmp_path):
    path = tmp_path / "one.cnf"
    path.write_text("p cnf 3 1\n1 2 3 0\n")
    code, out, _ = run(capsys, "solve", "--input", str(path), "--oracle", "off")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["oracle_verdict"] is None
    assert report["oracle_agrees"] is None


def test_solve_parse_error_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.cnf"
    path.write_text("p cnf 4 1\n1 2 3 4 0\n")
    code, _, err = run(capsys, "solve", "--input", str(path))
    assert code == EXIT_PARSE
    assert "3SAT-only" in err


def test_solve_trivially_unsat(capsys, tmp_path):
    path = tmp_path / "empty.cnf"
    path.write_text("p cnf 3 1\n0\n")
    code, out, _ = run(capsys, "solve", "--input", str(path), "--oracle", "on")
    assert code == EXIT_UNSAT
    assert json.loads(out)["engine_verdict"] == "trivially_unsat"


def test_solve_deterministic_output(capsys, tmp_path):
    argv = ["solve", "--gen", "n=10,m=35,seed=3", "--oracle", "on"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert (code1, out1) == (code2, out2)


def test_solve_writes_out_file(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "solve", "--gen", "n=3,m=1,seed=1",
                       "--out", str(out_path))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(out_path.read_text())["tool"] == "satprop"


# --- verify -------------------------------------------------------------------

def test_verify_quick_passes(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == EXIT_OK
    assert out.count("PASS") == 5
    assert "FAIL" not in out


def test_verify_mutated_bc_fails(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--mutate-bc")
    assert code != EXIT_OK
    assert "FAIL bc-vs-join-oracle" in out


# --- bench --------------------------------------------------------------------

def test_bench_deterministic_and_sound(capsys):
    argv = ["bench", "--gen", "n=8,m=16..32..8,seed=2,count=5", "--oracle", "on"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert out1 == out2
    doc = json.loads(out1)
    assert [p["m"] for p in doc["points"]] == [16, 24, 32]
    for point in doc["points"]:
        assert point["soundness_violations"] == 0
        assert point["oracle_skipped"] == 0
        total = point["agree"] + point["completeness_misses"]
        assert total == point["count"]
    assert code1 == EXIT_OK


def test_bench_counterexamples_reproduce_exit_20(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--gen",
                       "n=8,m=30..40..5,seed=4,count=10", "--oracle", "on")
    doc = json.loads(out)
    for point in doc["points"]:
        for ce in point["counterexamples"]:
            path = tmp_path / f"ce{ce['seed']}.cnf"
            path.write_text(ce["dimacs"])
            rc, _, _ = run(capsys, "solve", "--input", str(path),
                           "--oracle", "on")
            assert rc == EXIT_DISAGREE


def test_bench_requires_gen(capsys):
    code, _, err = run(capsys, "bench")
    assert code == EXIT_PARSE


# --- trace --------------------------------------------------------------------

def test_trace_no_edges_empty_records(capsys):
    code, out, _ = run(capsys, "trace", "--gen", "n=3,m=1,seed=1")
    assert code == EXIT_OK
    assert json.loads(out)["records"] == []


def test_trace_two_cube_transition(capsys, tmp_path):
    path = tmp_path / "two.cnf"
    # p on (1,2,3) RED at cells 0 and 1; q all-GREEN needs a clause on
    # (2,3,4): pick one then it prunes nothing back
    path.write_text("p cnf 4 3\n1 2 3 0\n-1 2 3 0\n2 3 4 0\n")
    code, out, _ = run(capsys, "trace", "--input", str(path))
    assert code == EXIT_OK
    doc = json.loads(out)
    transitions = {
        (tuple(r["edge"][0]), tuple(r["edge"][1])): (r["before"], r["after"])
        for r in doc["records"]
    }
    assert transitions[((1, 2, 3), (2, 3, 4))] == ("0xFE", "0xEE")


def test_trace_replay_reproduces_fixpoint(capsys):
    code, out, _ = run(capsys, "trace", "--gen", "n=9,m=30,seed=6")
    doc = json.loads(out)
    final = {}
    for rec in doc["records"]:
        final[tuple(rec["edge"][1])] = rec["after"]
    for cube in doc["final_cubes"]:
        triple = tuple(cube["triple"])
        if triple in final:
            assert final[triple] == cube["mask"]
