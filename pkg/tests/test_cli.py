"""End-to-end runs of the command line, driven through main()."""

import json
from math import ceil

import pytest

from gapkit.bench import CSV_HEADER
from gapkit.cli import main
from gapkit.instances import BcpInstance, SetFamilyInstance, load_instance
from gapkit.metric import Norm


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- gen ----------------------------------------------------------------

def test_gen_writes_deterministic_files(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(capsys, "gen", "bcp", "--seed", "5", "--out", str(a))[0] == 0
    assert run(capsys, "gen", "bcp", "--seed", "5", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert isinstance(load_instance(str(a)), BcpInstance)


def test_gen_stdout_single_line(capsys):
    code, out, _ = run(capsys, "gen", "setfamily", "--seed", "3")
    assert code == 0
    assert out.startswith('{"kind":"setfamily"')
    assert out.endswith("\n") and out.count("\n") == 1


def test_gen_set_overrides(tmp_path, capsys):
    path = tmp_path / "i.json"
    code, _, _ = run(
        capsys,
        "gen",
        "bcp",
        "--seed",
        "2",
        "--set",
        "n-a=3",
        "--set",
        "n-b=5",
        "--set",
        "label=NO",
        "--set",
        "p=1",
        "--out",
        str(path),
    )
    assert code == 0
    inst = load_instance(str(path))
    assert len(inst.a_points) == 3 and len(inst.b_points) == 5
    assert inst.p is Norm.L1


# -- solve --------------------------------------------------------------

def test_solve_expect_gate(tmp_path, capsys):
    path = tmp_path / "no.json"
    run(capsys, "gen", "bcp", "--seed", "4", "--set", "label=NO", "--out", str(path))
    code, out, _ = run(capsys, "solve", "--in", str(path), "--expect", "NO")
    assert code == 0
    assert json.loads(out)["label"] == "NO"
    code, _, err = run(capsys, "solve", "--in", str(path), "--expect", "YES")
    assert code == 1
    assert "expected YES, got NO" in err


def test_solve_auto_picks_the_split_solver(tmp_path, capsys):
    path = tmp_path / "lat.json"
    run(capsys, "gen", "lattice01", "--seed", "8", "--set", "n=6", "--out", str(path))
    code, out, _ = run(capsys, "solve", "--in", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["label"] == "YES"
    assert len(doc["witness"]) == 6
    assert int(doc["counters"]["candidates_materialized"]) == 30


def test_solve_batched_backends(tmp_path, capsys):
    path = tmp_path / "pair.json"
    run(capsys, "gen", "bcp", "--seed", "6", "--out", str(path))
    for solver in ("batched-linear", "batched-grid"):
        code, out, _ = run(
            capsys, "solve", "--in", str(path), "--solver", solver, "--ell", "3"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["label"] == "YES"
        assert int(doc["counters"]["structure_builds"]) == ceil(8 / 3)


def test_solve_oracle_reports_enumeration(tmp_path, capsys):
    path = tmp_path / "f.json"
    run(
        capsys, "gen", "cnf", "--seed", "1",
        "--set", "n=4", "--set", "m=6", "--set", "k=2", "--out", str(path),
    )
    code, out, _ = run(capsys, "solve", "--in", str(path), "--solver", "oracle")
    assert code == 0
    doc = json.loads(out)
    assert doc["enumerated"] == "16"


def test_solve_solver_kind_mismatch(tmp_path, capsys):
    path = tmp_path / "fam.json"
    run(capsys, "gen", "setfamily", "--seed", "1", "--out", str(path))
    code, _, err = run(capsys, "solve", "--in", str(path), "--solver", "mitm")
    assert code == 2
    assert err.startswith("error:")


def test_solve_missing_file(capsys):
    code, _, err = run(capsys, "solve", "--in", "/no/such/file.json")
    assert code == 2
    assert "error:" in err


# -- reduce -------------------------------------------------------------

def test_reduce_lattice_step_writes_both_instances(tmp_path, capsys):
    src = tmp_path / "lat.json"
    run(capsys, "gen", "lattice01", "--seed", "3", "--set", "n=4", "--out", str(src))
    prefix = tmp_path / "half"
    code, _, err = run(
        capsys, "reduce", "lattice-to-pair", "--in", str(src), "--out", str(prefix)
    )
    assert code == 0
    assert "2 instance(s), recombination or" in err
    for idx in range(2):
        sub = load_instance(f"{prefix}-{idx}.json")
        assert isinstance(sub, BcpInstance)


def test_reduce_kind_mismatch(tmp_path, capsys):
    src = tmp_path / "f.json"
    run(
        capsys, "gen", "cnf", "--seed", "1",
        "--set", "n=3", "--set", "m=3", "--set", "k=2", "--out", str(src),
    )
    code, _, err = run(capsys, "reduce", "lattice-to-pair", "--in", str(src))
    assert code == 2
    assert "Lattice01Instance" in err


def test_reduce_chain_reaches_the_planted_verdict(tmp_path, capsys):
    cnf = tmp_path / "sat.json"
    run(
        capsys, "gen", "cnf", "--seed", "9",
        "--set", "n=5", "--set", "m=7", "--set", "k=3", "--out", str(cnf),
    )
    fam = tmp_path / "fam"
    assert run(capsys, "reduce", "sat-to-family", "--in", str(cnf), "--out", str(fam))[0] == 0
    assert isinstance(load_instance(f"{fam}-0.json"), SetFamilyInstance)
    pair = tmp_path / "pair"
    assert run(
        capsys, "reduce", "family-to-pair", "--in", f"{fam}-0.json", "--out", str(pair)
    )[0] == 0
    code, out, _ = run(
        capsys, "solve", "--in", f"{pair}-0.json", "--expect", "YES"
    )
    assert code == 0
    assert json.loads(out)["label"] == "YES"


def test_reduce_complement_round_trip(tmp_path, capsys):
    src = tmp_path / "fam.json"
    run(capsys, "gen", "setfamily", "--seed", "11", "--out", str(src))
    once = tmp_path / "ov"
    run(capsys, "reduce", "ov-to-bsq", "--in", str(src), "--out", str(once))
    back = tmp_path / "back"
    run(capsys, "reduce", "bsq-to-ov", "--in", f"{once}-0.json", "--out", str(back))
    assert (tmp_path / "fam.json").read_bytes() == (tmp_path / "back-0.json").read_bytes()


# -- verify -------------------------------------------------------------

def test_verify_single_claim(capsys):
    code, out, _ = run(capsys, "verify", "counters", "--max-rank", "6")
    assert code == 0
    assert out.startswith("claim counters: ok (")


def test_verify_all_quick(capsys):
    code, out, _ = run(
        capsys,
        "verify", "all", "--trials", "4", "--seed", "2", "--max-rank", "6", "--dim", "2",
    )
    assert code == 0
    lines = [line for line in out.split("\n") if line]
    assert len(lines) == 8
    assert all(": ok (" in line for line in lines)


def test_verify_batching_plants_no_at_low_dimension(capsys):
    # seed 0 once drew d=1 NO draws that the default coordinate range
    # could not plant; the claim must widen the range itself
    code, out, _ = run(capsys, "verify", "batching", "--trials", "25", "--seed", "0")
    assert code == 0
    assert out.startswith("claim batching: ok (25 checks)")


# -- bench --------------------------------------------------------------

def test_bench_prints_fit_and_writes_csv(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    code, out, _ = run(
        capsys,
        "bench", "--problem", "bcp", "--solver", "brute",
        "--sizes", "4,8,16,32", "--csv", str(csv_path),
    )
    assert code == 0
    assert out.startswith("bcp/brute distance_evals: slope=2.0000")
    lines = csv_path.read_text().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 6  # header, four rows, trailing newline


def test_bench_rejects_short_ladders(capsys):
    code, _, err = run(
        capsys, "bench", "--problem", "bcp", "--solver", "brute", "--sizes", "4,8"
    )
    assert code == 2
    assert "error:" in err


# -- gadget -------------------------------------------------------------

def test_gadget_search_eval_check_round_trip(tmp_path, capsys):
    out_path = tmp_path / "g.json"
    code, out, _ = run(
        capsys, "gadget", "search", "--dim", "1", "--grid", "0,1,2,3",
        "--out", str(out_path),
    )
    assert code == 0
    assert "kind=finite gap=3 yes_max=1 no_min=3" in out
    assert "assignments=256" in out
    code, out, _ = run(capsys, "gadget", "eval", "--in", str(out_path))
    assert code == 0
    assert "gap=3" in out
    code, out, _ = run(capsys, "gadget", "check", "--in", str(out_path))
    assert code == 0
    assert "bound holds" in out


def test_gadget_search_degenerate_grid(capsys):
    code, out, _ = run(capsys, "gadget", "search", "--dim", "1", "--grid", "0")
    assert code == 1
    assert "no separating gadget among 1 assignments" in out


def test_gadget_check_rejects_non_metric(tmp_path, capsys):
    from gapkit.barrier import ExplicitSpace, GadgetTables, serialize_gadget

    space = ExplicitSpace(((0, 1, 9), (1, 0, 1), (9, 1, 0)))
    path = tmp_path / "bad.json"
    path.write_bytes(serialize_gadget(GadgetTables(1, (0, 1), (1, 2), space)))
    code, _, err = run(capsys, "gadget", "check", "--in", str(path))
    assert code == 2
    assert "error:" in err


# -- params -------------------------------------------------------------

def test_params_gap(capsys):
    assert run(capsys, "params", "gap", "--width", "2")[1] == "3\n"
    assert run(capsys, "params", "gap", "--width", "3")[1] == "2\n"
    assert run(capsys, "params", "gap", "--width", "5")[1] == "3/2\n"


def test_params_batch(capsys):
    code, out, _ = run(
        capsys,
        "params", "batch", "--points", "1048576", "--approx", "2",
        "--delta", "1/2", "--delta-prime", "1/4",
    )
    assert code == 0
    assert out.startswith("ell=1025 interval=(N^1/2, N^3/4)")
    code, out, _ = run(
        capsys,
        "params", "batch", "--points", "1048576", "--approx", "2",
        "--delta", "1/2", "--delta-prime", "1/2",
    )
    assert code == 1
    assert out.startswith("infeasible:")


# -- argument handling --------------------------------------------------

def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "nosuchkind", "--seed", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["gen", "bcp"])
    assert info.value.code == 2


def test_bad_set_value_reported(capsys):
    code, _, err = run(capsys, "gen", "bcp", "--seed", "1", "--set", "nonsense")
    assert code == 2
    assert "error:" in err
